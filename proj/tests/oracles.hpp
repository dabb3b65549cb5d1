#ifndef POLARITY_TESTS_ORACLES_HPP
#define POLARITY_TESTS_ORACLES_HPP

// Test-only oracles, independent of the library implementation paths:
// truncated ascending series for the modified spherical Bessel functions,
// closed forms from the l = 0 identities, explicit low-order Legendre
// polynomials, central finite differences, and a generic bisection.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace oracles {

// i_l and its derivative from the ascending series (default 200 terms).
struct BesselSeries {
  double value = 0.0;
  double derivative = 0.0;
};

inline BesselSeries bessel_i_series(int l, double r, int terms = 200) {
  BesselSeries out;
  double t = 1.0;
  for (int j = 1; j <= l; ++j) t *= r / (2.0 * j + 1.0);
  for (int k = 0; k < terms; ++k) {
    out.value += t;
    out.derivative += (l + 2.0 * k) * t / r;
    t *= r * r / (2.0 * (k + 1.0) * (2.0 * l + 2.0 * k + 3.0));
  }
  return out;
}

inline double rho_series(int l, double r, int terms = 200) {
  const BesselSeries s = bessel_i_series(l, r, terms);
  return r * s.derivative / s.value;
}

// (r cosh r - sinh r)/(r^2 sinh r) straight from the closed form.
inline double tilde_kappa_closed(double r) {
  return (r * std::cosh(r) - std::sinh(r)) / (r * r * std::sinh(r));
}

// rho_0(r) = r i_0'(r)/i_0(r) = (r cosh r - sinh r)/sinh r.
inline double rho0_closed(double r) {
  return (r * std::cosh(r) - std::sinh(r)) / std::sinh(r);
}

inline double legendre_explicit(int l, double x) {
  switch (l) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return 0.5 * (3.0 * x * x - 1.0);
    case 3: return 0.5 * (5.0 * x * x * x - 3.0 * x);
    case 4: return 0.125 * ((35.0 * x * x - 30.0) * x * x + 3.0);
    default: throw std::out_of_range("legendre_explicit needs l <= 4");
  }
}

inline double central_difference(const std::function<double(double)>& f,
                                 double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, double tol = 1e-13) {
  double flo = f(lo);
  while (hi - lo > tol * std::max(1.0, std::fabs(hi))) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Small deterministic generator for property tests (xorshift-style, kept
// separate from the library's SplitMix64 on purpose).
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : s_(seed * 2654435761u + 1) {}
  double uniform(double lo, double hi) {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    const double unit = static_cast<double>(s_ >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

 private:
  std::uint64_t s_;
};

// Random Jacobian entries satisfying the strict sign conditions
// (f_v > 0, q_v < 0 <= q_u - q_v, q_V > 0); with require_stable also
// S = (1/3)(f_u q_v - f_v q_u) + q_V (f_v - f_u) > 0 by rejection.
struct JacobianSample {
  double f_u, f_v, q_u, q_v, q_V;
  double S() const {
    return (f_u * q_v - f_v * q_u) / 3.0 + q_V * (f_v - f_u);
  }
};

inline JacobianSample sample_sign_condition_jacobian(TestRng& rng,
                                                     bool require_stable) {
  for (;;) {
    JacobianSample j;
    j.f_u = rng.uniform(-2.0, 2.0);
    j.f_v = rng.uniform(0.05, 3.0);
    j.q_u = rng.uniform(-2.0, 1.0);
    j.q_v = j.q_u - rng.uniform(0.05, 3.0);  // q_v < q_u
    if (!(j.q_v < 0.0)) continue;
    j.q_V = rng.uniform(0.05, 2.0);
    if (require_stable && !(j.S() > 0.0)) continue;
    return j;
  }
}

}  // namespace oracles

#endif
