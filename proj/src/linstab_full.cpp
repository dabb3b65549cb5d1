#include "polarity/linstab_full.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "polarity/errors.hpp"
#include "polarity/specfun.hpp"

namespace polarity::linstab_full {

namespace {

constexpr double kRootRelTol = 1e-12;
constexpr double kBracketGrowth = 4.0;
constexpr double kBracketCap = 1e30;
constexpr int kSignScanPoints = 512;
constexpr double kDegenerateActiveTol = 1e-10;

void require_finite_D(const kinetics::KineticParams& p, const char* who) {
  if (p.reduced_model()) {
    throw Error(ErrorCode::DomainError,
                std::string(who) + ": requires finite D (reduced model has "
                                   "its own dispersion)");
  }
}

double initial_bracket_hi(const kinetics::Equilibrium& eq,
                          const kinetics::KineticParams& p) {
  const double det = eq.f_u * eq.q_v - eq.f_v * eq.q_u;
  return std::max(1.0, p.gamma * p.gamma * std::fabs(det));
}

// Bisection on [lo, hi] with G(lo) < 0 < G(hi), relative tolerance on omega.
double bisect_root(const std::function<double(double)>& G, double lo,
                   double hi) {
  while (hi - lo > kRootRelTol * std::max(1.0, std::fabs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (G(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Shared root-search protocol of mode_instability and its zero-lateral
// mirror: geometric bracket expansion (G -> +inf), bisection, and for
// d != 1 a log-grid sign scan when G(0) > 0.
DispersionReport detect_instability(int l, const kinetics::Equilibrium& eq,
                                    const kinetics::KineticParams& p,
                                    const std::function<double(double)>& G) {
  DispersionReport report;
  report.l = l;
  report.G_at_zero = G(0.0);
  report.e_coeff = coefficient_e(l, eq, p);
  report.degenerate = degenerate_branch(l, eq, p);

  auto expand_hi = [&G](double hi) {
    while (G(hi) <= 0.0) {
      hi *= kBracketGrowth;
      if (hi > kBracketCap) {
        throw Error(ErrorCode::BracketFailure,
                    "dispersion bracket expansion exceeded safe range");
      }
    }
    return hi;
  };

  if (report.G_at_zero < 0.0) {
    const double hi = expand_hi(initial_bracket_hi(eq, p));
    report.root_omega = bisect_root(G, 0.0, hi);
    report.verdict = Verdict::Unstable;
    return report;
  }

  if (p.d == 1.0) {
    // G_l(omega) >= G_l(0) for d = 1, so G_l(0) > 0 settles stability.
    report.verdict = Verdict::Stable;
    return report;
  }

  // d != 1: the condition is only sufficient; scan for an interior dip.
  const double hi = expand_hi(initial_bracket_hi(eq, p));
  const double lo = 1e-8;
  for (int k = 0; k < kSignScanPoints; ++k) {
    const double omega =
        lo * std::pow(hi / lo, static_cast<double>(k) / (kSignScanPoints - 1));
    if (G(omega) < 0.0) {
      // Inside a negative dip: report the right-hand crossing, consistent
      // with the G(0) < 0 branch.
      const double right = expand_hi(omega);
      report.root_omega = bisect_root(G, omega, right);
      report.verdict = Verdict::Unstable;
      return report;
    }
  }
  report.verdict = Verdict::Inconclusive;
  return report;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

const char* case_name(InstabilityCase c) {
  switch (c) {
    case InstabilityCase::Case1: return "Case1";
    case InstabilityCase::Case2: return "Case2";
    case InstabilityCase::None: return "None";
  }
  return "Unknown";
}

double dispersion_G(int l, double omega, const kinetics::Equilibrium& eq,
                    const kinetics::KineticParams& p) {
  require_finite_D(p, "dispersion_G");
  const double mu = static_cast<double>(l) * (l + 1);
  const double g = p.gamma;
  const double quad =
      omega * omega +
      ((p.d + 1.0) * mu + (-eq.f_u + eq.f_v) * g) * omega +
      p.d * mu * mu + g * mu * (-p.d * eq.f_u + eq.f_v);
  const double k = specfun::kappa(p.D, l, omega);
  const double coupling =
      -g * eq.q_v * (mu + omega) + g * g * (eq.f_u * eq.q_v - eq.f_v * eq.q_u);
  return g * eq.q_V * quad + k * quad + k * coupling;
}

double dispersion_G0_tilde(double omega, const kinetics::Equilibrium& eq,
                           const kinetics::KineticParams& p) {
  require_finite_D(p, "dispersion_G0_tilde");
  if (!(omega > 0.0)) {
    throw Error(ErrorCode::DomainError, "dispersion_G0_tilde: omega > 0");
  }
  const double g = p.gamma;
  const double tk = specfun::tilde_kappa(std::sqrt(omega / p.D));
  return tk * (omega * omega + g * omega * (eq.f_v - eq.f_u - eq.q_v) +
               g * g * (eq.f_u * eq.q_v - eq.f_v * eq.q_u)) +
         g * eq.q_V * omega + g * g * eq.q_V * (eq.f_v - eq.f_u);
}

HomogeneousReport homogeneous_stability(const kinetics::Equilibrium& eq,
                                        const kinetics::KineticParams& p) {
  (void)p;
  kinetics::SignConditionReport signs = kinetics::verify_sign_conditions(eq);
  if (!signs.strict_all()) {
    throw Error(ErrorCode::SignConditionViolation,
                "homogeneous_stability requires the strict sign conditions");
  }
  HomogeneousReport report;
  report.S = kinetics::stability_value_S(eq);
  report.fv_gt_fu = eq.f_v > eq.f_u;
  const double scale =
      std::fabs(eq.f_u * eq.q_v) + std::fabs(eq.f_v * eq.q_u) +
      std::fabs(eq.q_V * (eq.f_v - eq.f_u)) + 1e-300;
  if (std::fabs(report.S) < 1e-12 * scale) {
    report.verdict = HomogeneousVerdict::Degenerate;
  } else {
    report.verdict = report.S > 0.0 ? HomogeneousVerdict::Stable
                                    : HomogeneousVerdict::Unstable;
  }
  return report;
}

DispersionReport mode_instability(int l, const kinetics::Equilibrium& eq,
                                  const kinetics::KineticParams& p) {
  require_finite_D(p, "mode_instability");
  if (l < 1) {
    throw Error(ErrorCode::DomainError, "mode_instability requires l >= 1");
  }
  const HomogeneousReport hom = homogeneous_stability(eq, p);
  if (hom.verdict != HomogeneousVerdict::Stable) {
    DispersionReport report;
    report.l = l;
    report.G_at_zero = dispersion_G(l, 0.0, eq, p);
    report.e_coeff = coefficient_e(l, eq, p);
    report.verdict = Verdict::NotApplicable;
    return report;
  }
  DispersionReport report = detect_instability(
      l, eq, p, [&](double w) { return dispersion_G(l, w, eq, p); });
  const CaseReport cases = classify_case(eq, p);
  report.instability_case = cases.instability_case;
  report.lambda_minus = cases.lambda_minus;
  report.lambda_plus = cases.lambda_plus;
  report.Q = cases.Q;
  return report;
}

CaseReport classify_case(const kinetics::Equilibrium& eq,
                         const kinetics::KineticParams& p, int l_max) {
  CaseReport report;
  const double det = eq.f_u * eq.q_v - eq.f_v * eq.q_u;
  const double b = p.d * eq.f_u - eq.f_v + eq.q_v;
  const double Q = b * b - 4.0 * p.d * det;
  report.Q = Q;

  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  bool real_pair = false;
  if (p.d > 0.0) {
    if (Q > 0.0) {
      lambda_minus = (b - std::sqrt(Q)) / (2.0 * p.d);
      lambda_plus = (b + std::sqrt(Q)) / (2.0 * p.d);
      real_pair = true;
    }
  } else {
    // d = 0: d lambda^2 - b lambda + det degenerates to the linear equation
    // with root lambda_+ = det/b, b = q_v - f_v < 0.
    lambda_plus = det / b;
    lambda_minus = lambda_plus;
    real_pair = true;
  }
  if (real_pair) {
    report.lambda_minus = lambda_minus;
    report.lambda_plus = lambda_plus;
  }

  auto band_admissible = [&](bool two_sided) {
    for (int l = 1; l <= l_max; ++l) {
      const double ratio = static_cast<double>(l) * (l + 1) / p.gamma;
      const bool ok = two_sided ? (lambda_minus < ratio && ratio < lambda_plus)
                                : (ratio < lambda_plus);
      if (ok) report.admissible_l.push_back(l);
    }
  };

  if (det < 0.0) {
    band_admissible(false);
    if (!report.admissible_l.empty()) {
      report.instability_case = InstabilityCase::Case2;
    }
    return report;
  }
  if (det >= 0.0 && b > 0.0 && p.d > 0.0 && Q > 0.0) {
    band_admissible(true);
    if (!report.admissible_l.empty()) {
      report.instability_case = InstabilityCase::Case1;
    }
  }
  return report;
}

AggregateReport aggregate_stability(const kinetics::Equilibrium& eq,
                                    const kinetics::KineticParams& p,
                                    int l_max) {
  AggregateReport report;
  int first_dominated = l_max;
  for (int l = 1; l < l_max; ++l) {
    if (coefficient_e(l, eq, p) > 0.0 &&
        coefficient_e(l + 1, eq, p) > coefficient_e(l, eq, p)) {
      first_dominated = l;
      break;
    }
  }
  report.l_cut = std::min(2 * first_dominated, l_max);
  bool any_unstable = false;
  bool any_inconclusive = false;
  for (int l = 1; l <= report.l_cut; ++l) {
    report.modes.push_back(mode_instability(l, eq, p));
    const Verdict v = report.modes.back().verdict;
    any_unstable = any_unstable || v == Verdict::Unstable;
    any_inconclusive = any_inconclusive || v == Verdict::Inconclusive ||
                       v == Verdict::NotApplicable;
  }
  if (any_unstable) {
    report.overall = Verdict::Unstable;
  } else {
    report.overall = any_inconclusive ? Verdict::Inconclusive : Verdict::Stable;
  }
  return report;
}

double coefficient_e(int l, const kinetics::Equilibrium& eq,
                     const kinetics::KineticParams& p) {
  const double mu = static_cast<double>(l) * (l + 1);
  return p.d * mu * mu +
         p.gamma * mu * (-p.d * eq.f_u + eq.f_v - eq.q_v) +
         p.gamma * p.gamma * (eq.f_u * eq.q_v - eq.f_v * eq.q_u);
}

DegenerateBranchReport degenerate_branch(int l, const kinetics::Equilibrium& eq,
                                         const kinetics::KineticParams& p) {
  DegenerateBranchReport report;
  if (eq.q_u == 0.0 || eq.q_v == 0.0) {
    report.degenerate_jacobian = true;
    return report;
  }
  const double mu = static_cast<double>(l) * (l + 1);
  const double cross = -eq.f_u * eq.q_v + eq.f_v * eq.q_u;
  report.residual = (p.d - 1.0) * mu * eq.q_u -
                    p.gamma * cross * (eq.q_u - eq.q_v) / eq.q_v;
  report.omega = -(p.gamma * cross + p.d * mu * eq.q_u) / eq.q_u;
  const double scale = std::fabs((p.d - 1.0) * mu * eq.q_u) +
                       std::fabs(p.gamma * cross * (eq.q_u - eq.q_v) / eq.q_v) +
                       1.0;
  report.active = std::fabs(report.residual) < kDegenerateActiveTol * scale;
  return report;
}

double zero_lateral_dispersion(int l, double omega,
                               const kinetics::Equilibrium& eq,
                               const kinetics::KineticParams& p) {
  require_finite_D(p, "zero_lateral_dispersion");
  const double g = p.gamma;
  const double k = specfun::kappa(p.D, l, omega);
  return g * eq.q_V * (omega * omega + (-eq.f_u + eq.f_v) * g * omega) +
         k * (omega * omega + (-eq.f_u + eq.f_v - eq.q_v) * g * omega +
              g * g * (eq.f_u * eq.q_v - eq.f_v * eq.q_u));
}

DispersionReport zero_lateral_mode_instability(
    int l, const kinetics::Equilibrium& eq, const kinetics::KineticParams& p) {
  require_finite_D(p, "zero_lateral_mode_instability");
  if (l < 1) {
    throw Error(ErrorCode::DomainError,
                "zero_lateral_mode_instability requires l >= 1");
  }
  return detect_instability(
      l, eq, p, [&](double w) { return zero_lateral_dispersion(l, w, eq, p); });
}

}  // namespace polarity::linstab_full
