#include "polarity/linstab_reduced.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "polarity/errors.hpp"

using namespace polarity;
using doctest::Approx;

namespace {

kinetics::Equilibrium table2_equilibrium() {
  return kinetics::find_equilibria(kinetics::KineticParams{}).states.front();
}

kinetics::KineticParams reduced_table2() {
  kinetics::KineticParams p;
  p.D = kinetics::kInfiniteD;
  return p;
}

kinetics::Equilibrium from_sample(const oracles::JacobianSample& j) {
  kinetics::Equilibrium eq;
  eq.f_u = j.f_u;
  eq.f_v = j.f_v;
  eq.q_u = j.q_u;
  eq.q_v = j.q_v;
  eq.q_V = j.q_V;
  return eq;
}

// Independent reimplementation: unstable iff some spectrum eigenvalue makes
// the quadratic's constant term negative (given f_u < f_v).
bool brute_force_unstable(const kinetics::Equilibrium& eq,
                          const kinetics::KineticParams& p,
                          const linstab_reduced::SpectrumSpec& spec) {
  for (double mu : spec.eigenvalues) {
    const double c = p.d * mu * mu +
                     p.gamma * mu * (-p.d * eq.f_u + eq.f_v - eq.q_v) +
                     p.gamma * p.gamma * (eq.f_u * eq.q_v - eq.f_v * eq.q_u);
    if (c < 0.0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("ode_stability: unit-sphere determinant value equals 3S") {
  const linstab_reduced::SpectrumSpec spec =
      linstab_reduced::SpectrumSpec::unit_sphere(10);
  oracles::TestRng rng(61);
  for (int i = 0; i < 300; ++i) {
    const kinetics::Equilibrium eq =
        from_sample(oracles::sample_sign_condition_jacobian(rng, false));
    const double S = kinetics::stability_value_S(eq);
    try {
      const linstab_reduced::OdeStabilityReport report =
          linstab_reduced::ode_stability(eq, spec);
      CHECK(report.det_value == Approx(3.0 * S).epsilon(1e-12).scale(1.0));
    } catch (const Error&) {
      // strict sign conditions can fail for the weak sampler; skip
    }
  }
}

TEST_CASE("ode_stability: reference state stable, degenerate detected") {
  const linstab_reduced::SpectrumSpec spec =
      linstab_reduced::SpectrumSpec::unit_sphere(10);
  const linstab_reduced::OdeStabilityReport report =
      linstab_reduced::ode_stability(table2_equilibrium(), spec);
  CHECK(report.verdict == linstab_reduced::OdeVerdict::Stable);
  CHECK(report.fu_lt_fv);
  CHECK(report.trace_implied_by_det);

  kinetics::Equilibrium degenerate;
  degenerate.f_u = degenerate.f_v = 0.9;
  degenerate.q_u = degenerate.q_v = -1.2;
  degenerate.q_V = 0.3;
  CHECK(linstab_reduced::ode_stability(degenerate, spec).verdict ==
        linstab_reduced::OdeVerdict::Degenerate);
}

TEST_CASE("(Tu-gen-2) implies (Tu-gen-1) under the sign conditions") {
  const linstab_reduced::SpectrumSpec spec =
      linstab_reduced::SpectrumSpec::unit_sphere(5);
  oracles::TestRng rng(67);
  int seen = 0;
  while (seen < 300) {
    const kinetics::Equilibrium eq =
        from_sample(oracles::sample_sign_condition_jacobian(rng, false));
    const double V1p = -spec.c_times_area;
    const double det = eq.f_u * (eq.q_v + eq.q_V * V1p) -
                       eq.f_v * (eq.q_u + eq.q_V * V1p);
    if (!(det > 0.0)) continue;
    ++seen;
    const double trace = eq.f_u - eq.f_v + eq.q_v + eq.q_V * V1p;
    CHECK(trace < 0.0);
    CHECK(eq.f_u < eq.f_v);
  }
}

TEST_CASE("quadratic_dispersion_roots: reference growth rate and boundary") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  const kinetics::KineticParams p = reduced_table2();

  const linstab_reduced::QuadraticRoots at2 =
      linstab_reduced::quadratic_dispersion_roots(2.0, eq, p);
  REQUIRE(at2.positive_root.has_value());
  CHECK(*at2.positive_root == Approx(6.2035138278733939).epsilon(1e-10));

  // constant term vanishes at mu = gamma lambda+
  const linstab_reduced::ReducedCaseReport cases =
      linstab_reduced::classify_case_reduced(
          eq, p, linstab_reduced::SpectrumSpec::unit_sphere(10));
  REQUIRE(cases.lambda_plus.has_value());
  const double mu_star = p.gamma * *cases.lambda_plus;
  const double c = p.d * mu_star * mu_star +
                   p.gamma * mu_star * (-p.d * eq.f_u + eq.f_v - eq.q_v) +
                   p.gamma * p.gamma * (eq.f_u * eq.q_v - eq.f_v * eq.q_u);
  CHECK(c == Approx(0.0).scale(p.gamma * p.gamma));

  kinetics::KineticParams gamma40 = p;
  gamma40.gamma = 40.0;
  CHECK_FALSE(linstab_reduced::quadratic_dispersion_roots(2.0, eq, gamma40)
                  .positive_root.has_value());
}

TEST_CASE("classify_case_reduced: reference Case 2 with mu = {2, 6}") {
  const linstab_reduced::ReducedCaseReport report =
      linstab_reduced::classify_case_reduced(
          table2_equilibrium(), reduced_table2(),
          linstab_reduced::SpectrumSpec::unit_sphere(20));
  CHECK(report.instability_case == linstab_reduced::InstabilityCase::Case2);
  CHECK(report.unstable);
  REQUIRE(report.admissible_mu.size() == 2);
  CHECK(report.admissible_mu[0] == 2.0);
  CHECK(report.admissible_mu[1] == 6.0);
}

TEST_CASE("classify_case_reduced: d=1 never Case 1; Case 1 needs activator-depletion") {
  oracles::TestRng rng(71);
  const linstab_reduced::SpectrumSpec spec =
      linstab_reduced::SpectrumSpec::unit_sphere(30);
  kinetics::KineticParams p = reduced_table2();
  int case1_seen = 0;
  for (int i = 0; i < 2000; ++i) {
    const kinetics::Equilibrium eq =
        from_sample(oracles::sample_sign_condition_jacobian(rng, true));
    p.gamma = rng.uniform(10.0, 2000.0);
    p.d = 1.0;
    CHECK(linstab_reduced::classify_case_reduced(eq, p, spec).instability_case !=
          linstab_reduced::InstabilityCase::Case1);
    p.d = rng.uniform(5.0, 200.0);
    const linstab_reduced::ReducedCaseReport report =
        linstab_reduced::classify_case_reduced(eq, p, spec);
    if (report.instability_case == linstab_reduced::InstabilityCase::Case1) {
      ++case1_seen;
      CHECK(eq.f_u > 0.0);
      CHECK(eq.q_u <= 0.0);
    }
  }
  CHECK(case1_seen > 0);  // the sampler does reach Case 1 at large d
}

TEST_CASE("classify_case_reduced agrees with the brute-force scan") {
  oracles::TestRng rng(73);
  const linstab_reduced::SpectrumSpec spec =
      linstab_reduced::SpectrumSpec::unit_sphere(25);
  kinetics::KineticParams p = reduced_table2();
  for (int i = 0; i < 1000; ++i) {
    const kinetics::Equilibrium eq =
        from_sample(oracles::sample_sign_condition_jacobian(rng, true));
    p.gamma = rng.uniform(5.0, 3000.0);
    p.d = rng.uniform(0.0, 50.0);
    const linstab_reduced::ReducedCaseReport report =
        linstab_reduced::classify_case_reduced(eq, p, spec);
    CHECK(report.unstable == brute_force_unstable(eq, p, spec));
  }
}

TEST_CASE("growth_rate_curve: d=1 mode-selection law") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  const kinetics::KineticParams p = reduced_table2();
  std::vector<double> grid;
  for (double mu = 0.25; mu <= 12.0; mu += 0.25) grid.push_back(mu);
  const std::vector<linstab_reduced::GrowthPoint> curve =
      linstab_reduced::growth_rate_curve(eq, p, grid);

  double s_ref = 0.0;
  double prev_omega = 1e300;
  bool any = false;
  for (const linstab_reduced::GrowthPoint& point : curve) {
    if (point.mu >= 8.2035138278735431) {  // gamma lambda+
      CHECK_FALSE(point.omega_plus.has_value());
      continue;
    }
    REQUIRE(point.omega_plus.has_value());
    REQUIRE(point.mode_sum.has_value());
    if (!any) {
      s_ref = *point.mode_sum;
      any = true;
    }
    CHECK(*point.mode_sum == Approx(s_ref).epsilon(1e-11));
    CHECK(*point.omega_plus < prev_omega);
    prev_omega = *point.omega_plus;
  }
  CHECK(any);
  // argmax over the sphere spectrum sits at the smallest unstable eigenvalue
  const std::vector<double> sphere{2.0, 6.0};
  const std::vector<linstab_reduced::GrowthPoint> modes =
      linstab_reduced::growth_rate_curve(eq, p, sphere);
  CHECK(*modes[0].omega_plus > *modes[1].omega_plus);
}

TEST_CASE("full_vs_reduced_consistency: gap closes as D grows") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  kinetics::KineticParams p;  // finite-D copy used for the full side
  const std::vector<double> D_list{100.0, 1000.0, 10000.0};
  const std::vector<linstab_reduced::ConsistencyRow> rows =
      linstab_reduced::full_vs_reduced_consistency(eq, p, 1, D_list);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].gap > rows[1].gap);
  CHECK(rows[1].gap > rows[2].gap);
  CHECK(rows[2].gap < 0.01);
  REQUIRE(rows[0].root_full.has_value());
  CHECK(*rows[0].root_full == Approx(5.19588639620727).epsilon(1e-8));
  CHECK(*rows[2].root_full == Approx(6.19190496771322).epsilon(1e-8));
  CHECK(rows[0].root_reduced == Approx(6.2035138278733939).epsilon(1e-10));

  // finite-D discrepancy is real: D = 1 is stable in the full system
  kinetics::KineticParams p1;
  p1.D = 1.0;
  CHECK(linstab_full::mode_instability(1, eq, p1).verdict ==
        linstab_full::Verdict::Stable);
  CHECK(linstab_reduced::quadratic_dispersion_roots(2.0, eq, p1)
            .positive_root.has_value());
}

TEST_CASE("SpectrumSpec validation rejects disorder") {
  linstab_reduced::SpectrumSpec spec;
  spec.eigenvalues = {2.0, 2.0};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.eigenvalues = {-1.0};
  CHECK_THROWS_AS(spec.validate(), Error);
}
