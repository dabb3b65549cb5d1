#ifndef POLARITY_LINSTAB_REDUCED_HPP
#define POLARITY_LINSTAB_REDUCED_HPP

// Linear stability of the D -> infinity non-local reduction: ODE-reduction
// stability, the quadratic dispersion in the Laplace-Beltrami eigenvalue mu,
// the exact Case 1 / Case 2 instability characterization on general surfaces
// via a supplied spectrum, and the d = 1 mode-selection law.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "polarity/kinetics.hpp"
#include "polarity/linstab_full.hpp"

namespace polarity::linstab_reduced {

using linstab_full::InstabilityCase;

// Laplace-Beltrami spectrum of the membrane (positive eigenvalues only)
// plus the geometric factor c|Gamma| = |Gamma|/|B|.
struct SpectrumSpec {
  std::vector<double> eigenvalues;
  double c_times_area = kinetics::kSphereCTimesArea;

  // mu_l = l(l+1), l = 1..l_max, c|Gamma| = 3.
  static SpectrumSpec unit_sphere(int l_max);
  void validate() const;
};

enum class OdeVerdict { Stable, Unstable, Degenerate };

struct OdeStabilityReport {
  OdeVerdict verdict = OdeVerdict::Degenerate;
  double trace_value = 0.0;  // f_u - f_v + q_v + q_V V1', must be < 0
  double det_value = 0.0;    // f_u(q_v+q_V V1') - f_v(q_u+q_V V1'), must be > 0
  bool fu_lt_fv = false;
  bool trace_implied_by_det = false;  // det > 0 did force trace < 0 here
};

struct QuadraticRoots {
  std::complex<double> first;
  std::complex<double> second;
  std::optional<double> positive_root;
};

struct ReducedCaseReport {
  InstabilityCase instability_case = InstabilityCase::None;
  std::optional<double> lambda_minus;
  std::optional<double> lambda_plus;
  std::optional<double> Q;
  std::vector<double> admissible_mu;
  bool unstable = false;  // exact: Case 1 or Case 2 with admissible mode
};

struct GrowthPoint {
  double mu = 0.0;
  std::optional<double> omega_plus;
  std::optional<double> mode_sum;  // omega_plus + mu, reported when d = 1
};

struct ConsistencyRow {
  double D = 0.0;
  std::optional<double> root_full;
  double root_reduced = 0.0;
  double gap = 0.0;  // |root_full - root_reduced| / root_reduced
};

OdeStabilityReport ode_stability(const kinetics::Equilibrium& eq,
                                 const SpectrumSpec& spec);

QuadraticRoots quadratic_dispersion_roots(double mu,
                                          const kinetics::Equilibrium& eq,
                                          const kinetics::KineticParams& p);

ReducedCaseReport classify_case_reduced(const kinetics::Equilibrium& eq,
                                        const kinetics::KineticParams& p,
                                        const SpectrumSpec& spec);

std::vector<GrowthPoint> growth_rate_curve(const kinetics::Equilibrium& eq,
                                           const kinetics::KineticParams& p,
                                           std::span<const double> mu_grid);

std::vector<ConsistencyRow> full_vs_reduced_consistency(
    const kinetics::Equilibrium& eq, const kinetics::KineticParams& p, int l,
    std::span<const double> D_list);

}  // namespace polarity::linstab_reduced

#endif
