#include "polarity/specfun.hpp"

#include <cmath>
#include <string>

#include "polarity/errors.hpp"

namespace polarity::specfun {

namespace {

constexpr int kCfIterationCap = 10000;
constexpr double kCfTolerance = 1e-14;

void check_order(int l) {
  if (l < 0 || l > kMaxOrder) {
    throw Error(ErrorCode::InvalidOrder,
                "Bessel order l=" + std::to_string(l) + " outside [0, " +
                    std::to_string(kMaxOrder) + "]");
  }
}

}  // namespace

double mod_sph_bessel_i(int l, double r) {
  check_order(l);
  if (r < 0.0 || !std::isfinite(r)) {
    throw Error(ErrorCode::DomainError, "mod_sph_bessel_i requires r >= 0");
  }
  if (r > kBesselArgMax) {
    throw Error(ErrorCode::OverflowRisk,
                "mod_sph_bessel_i: r=" + std::to_string(r) +
                    " exceeds safe threshold " + std::to_string(kBesselArgMax));
  }
  if (r == 0.0) return l == 0 ? 1.0 : 0.0;

  // Ascending series i_l(r) = sum_k r^{l+2k} / (2^k k! (2l+2k+1)!!).
  // All terms positive, so the sum is well conditioned for any admissible r.
  double term = 1.0;
  for (int j = 1; j <= l; ++j) term *= r / static_cast<double>(2 * j + 1);
  double sum = 0.0;
  for (int k = 0; k < 4000; ++k) {
    sum += term;
    if (term < sum * 1e-17) break;
    term *= r * r / (2.0 * (k + 1) * (2.0 * l + 2.0 * k + 3.0));
  }
  return sum;
}

BesselRatioResult bessel_ratio_rho(int l, double r) {
  check_order(l);
  if (r < 0.0 || !std::isfinite(r)) {
    throw Error(ErrorCode::DomainError, "bessel_ratio_rho requires r >= 0");
  }

  // rho_l(r) = l + r^2/(2l+3) + O(r^4); below this threshold the continued
  // fraction gains nothing and kappa(.,.,0) = D*l must come out exact.
  if (r < 1e-8) {
    return {static_cast<double>(l) + r * r / (2.0 * l + 3.0), true, 0};
  }

  // rho_l(r) = l + r * R_l(r) with R_l = i_{l+1}/i_l evaluated by the
  // continued fraction R_l = r/(2l+3 + r^2/(2l+5 + r^2/(2l+7 + ...))),
  // modified Lentz scheme. Avoids forming the overflowing i_l at large r.
  const double tiny = 1e-300;
  double f = tiny;
  double c = f;
  double d = 0.0;
  int iter = 0;
  bool converged = false;
  for (int k = 1; k <= kCfIterationCap; ++k) {
    const double a = (k == 1) ? r : r * r;
    const double b = 2.0 * l + 1.0 + 2.0 * k;
    d = b + a * d;
    if (d == 0.0) d = tiny;
    c = b + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    iter = k;
    if (std::fabs(delta - 1.0) < kCfTolerance) {
      converged = true;
      break;
    }
  }
  return {static_cast<double>(l) + r * f, converged, iter};
}

double kappa(double D, int l, double omega) {
  if (!(D > 0.0)) {
    throw Error(ErrorCode::DomainError, "kappa requires D > 0");
  }
  if (omega < 0.0) {
    throw Error(ErrorCode::DomainError, "kappa requires omega >= 0");
  }
  if (omega == 0.0) return D * l;
  const BesselRatioResult rho = bessel_ratio_rho(l, std::sqrt(omega / D));
  if (!rho.converged) {
    throw Error(ErrorCode::NoConvergence,
                "kappa: Bessel ratio continued fraction did not converge");
  }
  return D * rho.value;
}

double tilde_kappa(double r) {
  if (!(r > 0.0)) {
    throw Error(ErrorCode::DomainError, "tilde_kappa requires r > 0");
  }
  if (r < 0.5) {
    // (r cosh r - sinh r) = sum_{k>=1} 2k r^{2k+1}/(2k+1)! has positive
    // terms, so the quotient below is cancellation-free near 0.
    double t = r * r * r / 6.0;  // r^{2k+1}/(2k+1)! at k=1
    double num = 0.0;
    double den = r;  // sinh series, k=0 term
    for (int k = 1; k <= 30; ++k) {
      num += 2.0 * k * t;
      den += t;
      t *= r * r / (2.0 * (k + 1) * (2.0 * k + 3.0));
      if (t < den * 1e-18) break;
    }
    return num / (r * r * den);
  }
  return (r / std::tanh(r) - 1.0) / (r * r);
}

double legendre_p(int l, double x) {
  check_order(l);
  if (std::fabs(x) > 1.0) {
    throw Error(ErrorCode::DomainError, "legendre_p requires |x| <= 1");
  }
  if (l == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (int k = 2; k <= l; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  return p;
}

}  // namespace polarity::specfun
