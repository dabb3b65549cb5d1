#include "polarity/linstab_full.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "polarity/errors.hpp"
#include "polarity/specfun.hpp"

using namespace polarity;
using doctest::Approx;

namespace {

kinetics::Equilibrium table2_equilibrium() {
  return kinetics::find_equilibria(kinetics::KineticParams{}).states.front();
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

// Right-hand side of the instability threshold, written independently:
// (gamma qV + D l)(d l^2(l+1)^2 + gamma l(l+1)(-d fu + fv))
//   - D gamma qv l^2(l+1) + D l gamma^2 (fu qv - fv qu).
double threshold_oracle(int l, const kinetics::Equilibrium& e,
                        const kinetics::KineticParams& p) {
  const double L = l * (l + 1.0);
  return (p.gamma * e.q_V + p.D * l) *
             (p.d * L * L + p.gamma * L * (-p.d * e.f_u + e.f_v)) -
         p.D * p.gamma * e.q_v * l * L +
         p.D * l * p.gamma * p.gamma * (e.f_u * e.q_v - e.f_v * e.q_u);
}

}  // namespace

TEST_CASE("dispersion_G at omega=0 equals the threshold expression") {
  oracles::TestRng rng(41);
  for (int i = 0; i < 300; ++i) {
    const kinetics::Equilibrium eq =
        from_sample(oracles::sample_sign_condition_jacobian(rng, false));
    kinetics::KineticParams p;
    p.gamma = rng.uniform(10.0, 1000.0);
    p.d = rng.uniform(0.0, 5.0);
    p.D = rng.uniform(0.5, 1e4);
    for (int l : {1, 2, 5}) {
      const double expected = threshold_oracle(l, eq, p);
      const double got = linstab_full::dispersion_G(l, 0.0, eq, p);
      CHECK(got == Approx(expected).epsilon(1e-10).scale(std::fabs(expected)));
    }
  }
}

TEST_CASE("G_0(omega) = omega * tilde_G_0(omega): roots co-locate") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  const kinetics::KineticParams p;
  for (double omega : {1e-3, 0.1, 1.0, 8.0, 300.0}) {
    const double g0 = linstab_full::dispersion_G(0, omega, eq, p);
    const double tg0 = linstab_full::dispersion_G0_tilde(omega, eq, p);
    CHECK(g0 == Approx(omega * tg0).epsilon(1e-10));
  }
}

TEST_CASE("tilde_G_0: limits at 0+ and large omega") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  const kinetics::KineticParams p;  // D = 100
  const double S = kinetics::stability_value_S(eq);
  CHECK(linstab_full::dispersion_G0_tilde(1e-9, eq, p) ==
        Approx(p.gamma * p.gamma * S).epsilon(1e-6));
  CHECK(linstab_full::dispersion_G0_tilde(1e9, eq, p) > 0.0);
  CHECK(linstab_full::dispersion_G0_tilde(1.0, eq, p) > 0.0);
}

TEST_CASE("homogeneous_stability: reference state, synthetic unstable, degenerate") {
  const kinetics::KineticParams p;
  const linstab_full::HomogeneousReport stable =
      linstab_full::homogeneous_stability(table2_equilibrium(), p);
  CHECK(stable.verdict == linstab_full::HomogeneousVerdict::Stable);
  CHECK(stable.S == Approx(0.21442919808245459).epsilon(1e-9));
  CHECK(stable.fv_gt_fu);

  kinetics::Equilibrium bad;
  bad.f_u = 1.0;
  bad.f_v = 0.5;
  bad.q_u = -1.0;
  bad.q_v = -1.0;
  bad.q_V = 1.0;
  const linstab_full::HomogeneousReport unstable =
      linstab_full::homogeneous_stability(bad, p);
  CHECK(unstable.verdict == linstab_full::HomogeneousVerdict::Unstable);
  CHECK_FALSE(unstable.fv_gt_fu);

  kinetics::Equilibrium degenerate;
  degenerate.f_u = degenerate.f_v = 0.8;
  degenerate.q_u = degenerate.q_v = -1.5;
  degenerate.q_V = 0.6;
  CHECK(linstab_full::homogeneous_stability(degenerate, p).verdict ==
        linstab_full::HomogeneousVerdict::Degenerate);

  kinetics::Equilibrium violating = bad;
  violating.q_V = -1.0;
  CHECK_THROWS_AS(linstab_full::homogeneous_stability(violating, p), Error);
}

TEST_CASE("constant-perturbation 3x3 system is singular iff S = 0") {
  // rows: (fu, fv, 0), (qu, qv, qV), (4pi, 4pi, 4pi/3); det = 4pi S.
  oracles::TestRng rng(43);
  const double pi4 = 4.0 * std::acos(-1.0);
  for (int i = 0; i < 500; ++i) {
    const oracles::JacobianSample j =
        oracles::sample_sign_condition_jacobian(rng, false);
    const double det =
        j.f_u * (j.q_v * pi4 / 3.0 - j.q_V * pi4) -
        j.f_v * (j.q_u * pi4 / 3.0 - j.q_V * pi4);
    CHECK(det == Approx(pi4 * j.S()).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("mode_instability: reference regimes (Fig 1 vs Fig 2)") {
  const kinetics::Equilibrium eq = table2_equilibrium();

  kinetics::KineticParams p100;
  p100.D = 100.0;
  const linstab_full::DispersionReport l1 =
      linstab_full::mode_instability(1, eq, p100);
  CHECK(l1.verdict == linstab_full::Verdict::Unstable);
  CHECK(l1.G_at_zero < 0.0);
  REQUIRE(l1.root_omega.has_value());
  // recorded from the independent bisection oracle
  CHECK(*l1.root_omega == Approx(5.19588639620727).epsilon(1e-8));
  CHECK(std::fabs(linstab_full::dispersion_G(1, *l1.root_omega, eq, p100)) <
        1e-6 * std::fabs(l1.G_at_zero));
  CHECK(l1.instability_case == linstab_full::InstabilityCase::Case2);

  kinetics::KineticParams p1;
  p1.D = 1.0;
  for (int l = 1; l <= 50; ++l) {
    CHECK(linstab_full::mode_instability(l, eq, p1).verdict ==
          linstab_full::Verdict::Stable);
  }
}

TEST_CASE("mode_instability: large l decays") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  kinetics::KineticParams p;
  p.D = 100.0;
  for (int l : {10, 40, 120, 200}) {
    CHECK(linstab_full::mode_instability(l, eq, p).verdict ==
          linstab_full::Verdict::Stable);
  }
}

TEST_CASE("classify_case: reference parameters give Case 2 with l = {1, 2}") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  const kinetics::KineticParams p;
  const linstab_full::CaseReport report = linstab_full::classify_case(eq, p);
  CHECK(report.instability_case == linstab_full::InstabilityCase::Case2);
  REQUIRE(report.lambda_plus.has_value());
  CHECK(*report.lambda_plus == Approx(0.020508784569683858).epsilon(1e-9));
  REQUIRE(report.admissible_l.size() == 2);
  CHECK(report.admissible_l[0] == 1);
  CHECK(report.admissible_l[1] == 2);
}

TEST_CASE("classify_case: d=1 with sign conditions never yields Case 1") {
  oracles::TestRng rng(47);
  kinetics::KineticParams p;
  p.d = 1.0;
  for (int i = 0; i < 500; ++i) {
    const kinetics::Equilibrium eq =
        from_sample(oracles::sample_sign_condition_jacobian(rng, true));
    p.gamma = rng.uniform(10.0, 2000.0);
    const linstab_full::CaseReport report = linstab_full::classify_case(eq, p);
    CHECK(report.instability_case != linstab_full::InstabilityCase::Case1);
  }
}

TEST_CASE("classify_case: Q < 0 under Case-1 preconditions gives None") {
  kinetics::Equilibrium eq;
  // fu qv - fv qu = 1.25 - 1.2 = 0.05 >= 0, d fu - fv + qv > 0 for d = 10,
  // and Q = b^2 - 4 d det tuned negative.
  eq.f_u = 0.1;
  eq.f_v = 0.4;
  eq.q_u = -3.0;
  eq.q_v = -3.1;
  eq.q_V = 1.0;
  kinetics::KineticParams p;
  p.d = 36.0;
  const double det = eq.f_u * eq.q_v - eq.f_v * eq.q_u;  // 0.89
  const double b = p.d * eq.f_u - eq.f_v + eq.q_v;       // 0.1
  REQUIRE(det >= 0.0);
  REQUIRE(b > 0.0);
  REQUIRE(b * b - 4.0 * p.d * det < 0.0);
  const linstab_full::CaseReport report = linstab_full::classify_case(eq, p);
  CHECK(report.instability_case == linstab_full::InstabilityCase::None);
  CHECK_FALSE(report.lambda_plus.has_value());
}

TEST_CASE("coefficient_e: fixture, factorization through lambda, large-l sign") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  const kinetics::KineticParams p;
  CHECK(linstab_full::coefficient_e(1, eq, p) ==
        Approx(-18957.606355161475).epsilon(1e-9));
  CHECK(linstab_full::coefficient_e(2, eq, p) ==
        Approx(-6742.6344200353778).epsilon(1e-9));
  CHECK(linstab_full::coefficient_e(3, eq, p) > 0.0);
  CHECK(linstab_full::coefficient_e(200, eq, p) > 0.0);

  // e(mu) = d mu^2 - gamma b mu + gamma^2 det vanishes at mu = gamma lambda±
  const linstab_full::CaseReport cases = linstab_full::classify_case(eq, p);
  REQUIRE(cases.lambda_plus.has_value());
  const double mu_root = p.gamma * *cases.lambda_plus;
  const double e_at_root =
      p.d * mu_root * mu_root +
      p.gamma * mu_root * (-p.d * eq.f_u + eq.f_v - eq.q_v) +
      p.gamma * p.gamma * (eq.f_u * eq.q_v - eq.f_v * eq.q_u);
  CHECK(e_at_root == Approx(0.0).scale(p.gamma * p.gamma));
}

TEST_CASE("degenerate_branch: constructed zero residual and reference inactivity") {
  kinetics::KineticParams p;  // d = 1
  kinetics::Equilibrium balanced;
  balanced.f_u = 0.5;
  balanced.f_v = 1.0;
  balanced.q_u = -1.0;
  balanced.q_v = -2.0;  // fu qv - fv qu = -1 + 1 = 0
  balanced.q_V = 1.0;
  const linstab_full::DegenerateBranchReport active =
      linstab_full::degenerate_branch(2, balanced, p);
  CHECK(active.residual == Approx(0.0).scale(1.0));
  CHECK(active.active);
  CHECK(active.omega == Approx(-p.d * 6.0).epsilon(1e-12));

  const linstab_full::DegenerateBranchReport reference =
      linstab_full::degenerate_branch(1, table2_equilibrium(), p);
  CHECK_FALSE(reference.active);
  CHECK(reference.residual == Approx(48.67945339).epsilon(1e-6));

  kinetics::Equilibrium degenerate = balanced;
  degenerate.q_u = 0.0;
  CHECK(linstab_full::degenerate_branch(1, degenerate, p).degenerate_jacobian);
}

TEST_CASE("zero_lateral_dispersion: omega=0 sign and Case-2 root") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  kinetics::KineticParams p;
  p.D = 100.0;
  // at omega = 0 the value is D l gamma^2 (fu qv - fv qu)
  const double det = eq.f_u * eq.q_v - eq.f_v * eq.q_u;
  CHECK(linstab_full::zero_lateral_dispersion(1, 0.0, eq, p) ==
        Approx(p.D * 1 * p.gamma * p.gamma * det).epsilon(1e-12));

  const linstab_full::DispersionReport report =
      linstab_full::zero_lateral_mode_instability(1, eq, p);
  CHECK(report.verdict == linstab_full::Verdict::Unstable);
  REQUIRE(report.root_omega.has_value());
  CHECK(*report.root_omega == Approx(7.19936180297).epsilon(1e-6));
}

TEST_CASE("zero_lateral_dispersion: Case-1 signs give stability") {
  kinetics::Equilibrium eq;
  eq.f_u = -1.0;
  eq.f_v = 1.0;
  eq.q_u = -0.5;
  eq.q_v = -1.0;
  eq.q_V = 1.0;  // det = 1.5 >= 0, S = 0.5 + 2 > 0
  kinetics::KineticParams p;
  p.D = 1000.0;
  const linstab_full::DispersionReport report =
      linstab_full::zero_lateral_mode_instability(2, eq, p);
  CHECK(report.verdict == linstab_full::Verdict::Stable);
  CHECK_FALSE(report.root_omega.has_value());
}

TEST_CASE("d=1 lower bound G_l(omega) >= G_l(0) on random stable Jacobians") {
  oracles::TestRng rng(53);
  kinetics::KineticParams p;
  p.d = 1.0;
  for (int i = 0; i < 100; ++i) {
    const kinetics::Equilibrium eq =
        from_sample(oracles::sample_sign_condition_jacobian(rng, true));
    p.gamma = rng.uniform(10.0, 1000.0);
    p.D = rng.uniform(0.5, 1e4);
    for (int l : {1, 2, 3}) {
      const double g0 = linstab_full::dispersion_G(l, 0.0, eq, p);
      const double scale = std::fabs(g0) + p.gamma * p.gamma;
      for (int k = 0; k < 40; ++k) {
        const double omega = std::pow(10.0, -4.0 + 10.0 * k / 39.0);
        CHECK(linstab_full::dispersion_G(l, omega, eq, p) >=
              g0 - 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("G_l grows without bound in omega (bracketing soundness)") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  const kinetics::KineticParams p;
  for (int l : {0, 1, 3, 10}) {
    const double far = linstab_full::dispersion_G(l, 1e12, eq, p);
    CHECK(far > 0.0);
    CHECK(far > std::fabs(linstab_full::dispersion_G(l, 0.0, eq, p)));
  }
}

TEST_CASE("case classification is consistent with large-D mode verdicts") {
  oracles::TestRng rng(59);
  kinetics::KineticParams p;
  p.d = 1.0;
  int confirmed = 0;
  while (confirmed < 50) {
    const kinetics::Equilibrium eq =
        from_sample(oracles::sample_sign_condition_jacobian(rng, true));
    p.gamma = rng.uniform(20.0, 500.0);
    p.D = 1.0;
    const linstab_full::CaseReport cases = linstab_full::classify_case(eq, p);
    if (cases.instability_case == linstab_full::InstabilityCase::None) continue;
    // keep samples where D = 1e4 already makes the D*l*e term dominate the
    // gamma*qV part of G_l(0), i.e. D* is safely below the tested D
    const int l0 = cases.admissible_l.front();
    const double mu0 = static_cast<double>(l0) * (l0 + 1);
    const double positive_part =
        p.gamma * eq.q_V *
        (p.d * mu0 * mu0 + p.gamma * mu0 * (-p.d * eq.f_u + eq.f_v));
    const double e0 = linstab_full::coefficient_e(l0, eq, p);
    if (!(1e4 * l0 * (-e0) > 10.0 * positive_part)) continue;
    ++confirmed;
    kinetics::KineticParams big = p;
    big.D = 1e6;
    CHECK(linstab_full::mode_instability(l0, eq, big).verdict ==
          linstab_full::Verdict::Unstable);
    kinetics::KineticParams mid = p;
    mid.D = 1e3;
    const linstab_full::Verdict v_mid =
        linstab_full::mode_instability(l0, eq, mid).verdict;
    CHECK((v_mid == linstab_full::Verdict::Unstable ||
           v_mid == linstab_full::Verdict::Stable));
  }
}

TEST_CASE("aggregate_stability: cutoff from the e coefficient, overall verdict") {
  const kinetics::Equilibrium eq = table2_equilibrium();
  kinetics::KineticParams p;
  p.D = 100.0;
  const linstab_full::AggregateReport hot =
      linstab_full::aggregate_stability(eq, p);
  // e turns positive and growing at l = 3, so the cut is 6
  CHECK(hot.l_cut == 6);
  CHECK(hot.overall == linstab_full::Verdict::Unstable);
  CHECK(hot.modes.front().verdict == linstab_full::Verdict::Unstable);

  p.D = 1.0;
  const linstab_full::AggregateReport cold =
      linstab_full::aggregate_stability(eq, p);
  CHECK(cold.overall == linstab_full::Verdict::Stable);
  CHECK(static_cast<int>(cold.modes.size()) == cold.l_cut);
}

TEST_CASE("mode_instability marks reports NotApplicable without stability") {
  kinetics::Equilibrium bad;
  bad.f_u = 1.0;
  bad.f_v = 0.5;
  bad.q_u = -1.0;
  bad.q_v = -1.0;
  bad.q_V = 1.0;  // S < 0
  const kinetics::KineticParams p;
  CHECK(linstab_full::mode_instability(1, bad, p).verdict ==
        linstab_full::Verdict::NotApplicable);
}
