#include "polarity/linstab_reduced.hpp"

#include <algorithm>
#include <cmath>

#include "polarity/errors.hpp"

namespace polarity::linstab_reduced {

namespace {

// Coefficients of omega^2 + b omega + c = 0 for a mode with eigenvalue mu.
struct ModeQuadratic {
  double b = 0.0;
  double c = 0.0;
};

ModeQuadratic mode_quadratic(double mu, const kinetics::Equilibrium& eq,
                             const kinetics::KineticParams& p) {
  const double g = p.gamma;
  ModeQuadratic q;
  q.b = (p.d + 1.0) * mu + g * (-eq.f_u + eq.f_v - eq.q_v);
  q.c = p.d * mu * mu + g * mu * (-p.d * eq.f_u + eq.f_v - eq.q_v) +
        g * g * (eq.f_u * eq.q_v - eq.f_v * eq.q_u);
  return q;
}

}  // namespace

SpectrumSpec SpectrumSpec::unit_sphere(int l_max) {
  SpectrumSpec spec;
  spec.c_times_area = kinetics::kSphereCTimesArea;
  spec.eigenvalues.reserve(static_cast<size_t>(std::max(l_max, 0)));
  for (int l = 1; l <= l_max; ++l) {
    spec.eigenvalues.push_back(static_cast<double>(l) * (l + 1));
  }
  return spec;
}

void SpectrumSpec::validate() const {
  if (!(c_times_area > 0.0)) {
    throw Error(ErrorCode::ValidationError, "c|Gamma| must be > 0");
  }
  double prev = 0.0;
  for (double mu : eigenvalues) {
    if (!(mu > prev)) {
      throw Error(ErrorCode::ValidationError,
                  "spectrum eigenvalues must be strictly increasing and > 0");
    }
    prev = mu;
  }
}

OdeStabilityReport ode_stability(const kinetics::Equilibrium& eq,
                                 const SpectrumSpec& spec) {
  spec.validate();
  const kinetics::SignConditionReport signs =
      kinetics::verify_sign_conditions(eq);
  if (!signs.strict_all()) {
    throw Error(ErrorCode::SignConditionViolation,
                "ode_stability requires the strict sign conditions");
  }
  const double V1p = -spec.c_times_area;
  OdeStabilityReport report;
  report.trace_value = eq.f_u - eq.f_v + eq.q_v + eq.q_V * V1p;
  report.det_value = eq.f_u * (eq.q_v + eq.q_V * V1p) -
                     eq.f_v * (eq.q_u + eq.q_V * V1p);
  report.fu_lt_fv = eq.f_u < eq.f_v;
  report.trace_implied_by_det =
      report.det_value > 0.0 && report.trace_value < 0.0;
  const double scale = std::fabs(eq.f_u * eq.q_v) +
                       std::fabs(eq.f_v * eq.q_u) +
                       std::fabs(eq.q_V * V1p * (eq.f_u - eq.f_v)) + 1e-300;
  if (std::fabs(report.det_value) < 1e-12 * scale) {
    report.verdict = OdeVerdict::Degenerate;
  } else if (report.det_value > 0.0 && report.trace_value < 0.0) {
    report.verdict = OdeVerdict::Stable;
  } else {
    report.verdict = OdeVerdict::Unstable;
  }
  return report;
}

QuadraticRoots quadratic_dispersion_roots(double mu,
                                          const kinetics::Equilibrium& eq,
                                          const kinetics::KineticParams& p) {
  if (!(mu > 0.0)) {
    throw Error(ErrorCode::DomainError,
                "quadratic_dispersion_roots requires mu > 0");
  }
  const ModeQuadratic q = mode_quadratic(mu, eq, p);
  QuadraticRoots roots;
  const double disc = q.b * q.b - 4.0 * q.c;
  if (disc >= 0.0) {
    // Cancellation-safe real quadratic roots.
    const double s = std::sqrt(disc);
    const double t = -0.5 * (q.b + std::copysign(s, q.b));
    double r1 = t;
    double r2 = (t != 0.0) ? q.c / t : -0.5 * (q.b - std::copysign(s, q.b));
    if (r1 > r2) std::swap(r1, r2);
    roots.first = r1;
    roots.second = r2;
    if (r2 > 0.0) roots.positive_root = r2;
  } else {
    const double re = -0.5 * q.b;
    const double im = 0.5 * std::sqrt(-disc);
    roots.first = {re, -im};
    roots.second = {re, im};
  }
  return roots;
}

ReducedCaseReport classify_case_reduced(const kinetics::Equilibrium& eq,
                                        const kinetics::KineticParams& p,
                                        const SpectrumSpec& spec) {
  spec.validate();
  ReducedCaseReport report;
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
    lambda_plus = det / b;  // b = q_v - f_v < 0 when d = 0
    lambda_minus = lambda_plus;
    real_pair = true;
  }
  if (real_pair) {
    report.lambda_minus = lambda_minus;
    report.lambda_plus = lambda_plus;
  }

  auto collect = [&](bool two_sided) {
    for (double mu : spec.eigenvalues) {
      const double ratio = mu / p.gamma;
      const bool ok = two_sided ? (lambda_minus < ratio && ratio < lambda_plus)
                                : (ratio < lambda_plus);
      if (ok) report.admissible_mu.push_back(mu);
    }
  };

  if (det < 0.0) {
    collect(false);
    if (!report.admissible_mu.empty()) {
      report.instability_case = InstabilityCase::Case2;
      report.unstable = true;
    }
    return report;
  }
  if (b > 0.0 && p.d > 0.0 && Q > 0.0) {
    collect(true);
    if (!report.admissible_mu.empty()) {
      report.instability_case = InstabilityCase::Case1;
      report.unstable = true;
    }
  }
  return report;
}

std::vector<GrowthPoint> growth_rate_curve(const kinetics::Equilibrium& eq,
                                           const kinetics::KineticParams& p,
                                           std::span<const double> mu_grid) {
  std::vector<GrowthPoint> curve;
  curve.reserve(mu_grid.size());
  for (double mu : mu_grid) {
    GrowthPoint point;
    point.mu = mu;
    const QuadraticRoots roots = quadratic_dispersion_roots(mu, eq, p);
    if (roots.positive_root) {
      point.omega_plus = roots.positive_root;
      if (p.d == 1.0) point.mode_sum = *roots.positive_root + mu;
    }
    curve.push_back(point);
  }
  return curve;
}

std::vector<ConsistencyRow> full_vs_reduced_consistency(
    const kinetics::Equilibrium& eq, const kinetics::KineticParams& p, int l,
    std::span<const double> D_list) {
  const double mu = static_cast<double>(l) * (l + 1);
  const QuadraticRoots reduced = quadratic_dispersion_roots(mu, eq, p);
  if (!reduced.positive_root) {
    throw Error(ErrorCode::DomainError,
                "full_vs_reduced_consistency requires a reduced-model "
                "instability at the requested mode");
  }
  std::vector<ConsistencyRow> rows;
  rows.reserve(D_list.size());
  for (double D : D_list) {
    kinetics::KineticParams pd = p;
    pd.D = D;
    ConsistencyRow row;
    row.D = D;
    row.root_reduced = *reduced.positive_root;
    const linstab_full::DispersionReport mode =
        linstab_full::mode_instability(l, eq, pd);
    if (mode.root_omega) row.root_full = mode.root_omega;
    row.gap = mode.root_omega
                  ? std::fabs(*mode.root_omega - row.root_reduced) /
                        row.root_reduced
                  : 1.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace polarity::linstab_reduced
