#ifndef POLARITY_LINSTAB_FULL_HPP
#define POLARITY_LINSTAB_FULL_HPP

// Linear stability of the fully coupled bulk-surface system on the unit
// ball: the dispersion function G_l, stability under membrane-homogeneous
// perturbations, per-mode instability detection with root finding, the
// Case 1 / Case 2 classification, the degenerate V_lm = 0 branch, and the
// zero-lateral-diffusion variant.

#include <optional>
#include <vector>

#include "polarity/kinetics.hpp"

namespace polarity::linstab_full {

inline constexpr int kDefaultModeCap = 200;

enum class Verdict { Stable, Unstable, Inconclusive, NotApplicable };
enum class HomogeneousVerdict { Stable, Unstable, Degenerate };
enum class InstabilityCase { Case1, Case2, None };

const char* verdict_name(Verdict v);
const char* case_name(InstabilityCase c);

struct HomogeneousReport {
  HomogeneousVerdict verdict = HomogeneousVerdict::Degenerate;
  double S = 0.0;
  bool fv_gt_fu = false;
};

struct DegenerateBranchReport {
  double residual = 0.0;
  double omega = 0.0;
  bool active = false;
  bool degenerate_jacobian = false;  // q_u = 0 or q_v = 0
};

struct DispersionReport {
  int l = 0;
  double G_at_zero = 0.0;
  std::optional<double> root_omega;
  Verdict verdict = Verdict::Inconclusive;
  InstabilityCase instability_case = InstabilityCase::None;
  std::optional<double> lambda_minus;
  std::optional<double> lambda_plus;
  std::optional<double> Q;
  double e_coeff = 0.0;
  DegenerateBranchReport degenerate;
};

struct CaseReport {
  InstabilityCase instability_case = InstabilityCase::None;
  std::optional<double> lambda_minus;
  std::optional<double> lambda_plus;
  std::optional<double> Q;
  std::vector<int> admissible_l;
};

// G_l(omega), grouped as in the eigenvalue equation: the common quadratic
// multiplies gamma*q_V and kappa, plus kappa times the sorption coupling.
double dispersion_G(int l, double omega, const kinetics::Equilibrium& eq,
                    const kinetics::KineticParams& p);

// tilde-G_0(omega) whose positive roots coincide with those of G_0.
double dispersion_G0_tilde(double omega, const kinetics::Equilibrium& eq,
                           const kinetics::KineticParams& p);

// Stability under perturbations spatially homogeneous on the membrane:
// Stable iff S > 0. Requires the strict sign conditions.
HomogeneousReport homogeneous_stability(const kinetics::Equilibrium& eq,
                                        const kinetics::KineticParams& p);

DispersionReport mode_instability(int l, const kinetics::Equilibrium& eq,
                                  const kinetics::KineticParams& p);

CaseReport classify_case(const kinetics::Equilibrium& eq,
                         const kinetics::KineticParams& p,
                         int l_max = kDefaultModeCap);

struct AggregateReport {
  Verdict overall = Verdict::Inconclusive;
  int l_cut = 0;  // modes 1..l_cut examined; beyond, e > 0 and growing
  std::vector<DispersionReport> modes;
};

// Per-mode verdicts aggregated over l in [1, l_cut], l_cut set to twice the
// first l where the D-independent coefficient e turns positive and growing.
AggregateReport aggregate_stability(const kinetics::Equilibrium& eq,
                                    const kinetics::KineticParams& p,
                                    int l_max = kDefaultModeCap);

// e = d l^2(l+1)^2 + gamma l(l+1)(-d f_u + f_v - q_v) + gamma^2 (f_u q_v - f_v q_u),
// the coefficient of D*l in G_l(0); e < 0 forces instability for large D.
double coefficient_e(int l, const kinetics::Equilibrium& eq,
                     const kinetics::KineticParams& p);

DegenerateBranchReport degenerate_branch(int l, const kinetics::Equilibrium& eq,
                                         const kinetics::KineticParams& p);

// Dispersion of the zero-lateral-diffusion reduction (d_u = d_v = 0).
double zero_lateral_dispersion(int l, double omega,
                               const kinetics::Equilibrium& eq,
                               const kinetics::KineticParams& p);

DispersionReport zero_lateral_mode_instability(int l,
                                               const kinetics::Equilibrium& eq,
                                               const kinetics::KineticParams& p);

}  // namespace polarity::linstab_full

#endif
