#ifndef POLARITY_KINETICS_HPP
#define POLARITY_KINETICS_HPP

// GTPase constitutive laws f (activation/inactivation) and q (membrane
// attachment/detachment), their analytic Jacobians, sign-condition checks,
// and homogeneous equilibrium solving under total-mass conservation on the
// unit sphere.

#include <cmath>
#include <limits>
#include <vector>

namespace polarity::kinetics {

// Nondimensional model constants. D = infinity selects the non-local
// reduced model (cytosolic concentration slaved to total mass).
struct KineticParams {
  double a1 = 0.02;
  double a2 = 20.0;
  double a3 = 160.0;
  double a4 = 1.0;
  double a5 = 0.5;
  double a6 = 0.36;
  double a_m6 = 5.0;
  double gamma = 400.0;
  double d = 1.0;
  double D = 100.0;
  double V_init = 5.1;

  bool reduced_model() const { return std::isinf(D); }
  // Throws ValidationError listing every violated constraint.
  void validate() const;
};

inline constexpr double kInfiniteD = std::numeric_limits<double>::infinity();

// Unit-sphere geometry used by the mass bookkeeping: c = 1/|B| = 3/(4 pi),
// c|Gamma| = 3, so V[u+v] = V_init - 3 (mean membrane density).
inline constexpr double kSphereCTimesArea = 3.0;

struct JacobianEntries {
  double f_u = 0.0;
  double f_v = 0.0;
  double q_u = 0.0;
  double q_v = 0.0;
  double q_V = 0.0;
  bool kink_warning = false;  // |u+v-1| < 1e-12: q-partials are one-sided
};

struct Equilibrium {
  double u_star = 0.0;
  double v_star = 0.0;
  double V_star = 0.0;
  double f_u = 0.0;
  double f_v = 0.0;
  double q_u = 0.0;
  double q_v = 0.0;
  double q_V = 0.0;
  double residual_f = 0.0;
  double residual_q = 0.0;
};

struct SignConditionReport {
  bool fv_nonneg = false;
  bool qv_nonpos = false;
  bool qv_le_qu = false;
  bool qV_nonneg = false;
  bool fv_pos = false;
  bool qv_neg = false;
  bool qV_pos = false;
  bool weak_all() const { return fv_nonneg && qv_nonpos && qv_le_qu && qV_nonneg; }
  bool strict_all() const { return fv_pos && qv_neg && qV_pos && qv_le_qu; }
};

struct EquilibriumSearch {
  double u_max = 1.0;
  int grid_points = 10000;
  double bisect_tol = 1e-12;
  double merge_tol = 1e-8;
};

struct EquilibriaResult {
  std::vector<Equilibrium> states;  // sorted by u_star
  // No sign change up to u_max although q is still positive there; a root
  // likely lies beyond the search range.
  bool bracket_overflow = false;
};

double f_react(double u, double v, const KineticParams& p);
double q_sorp(double u, double v, double V, const KineticParams& p);

// v(u) solving f(u, v) = 0 in closed form.
double v_from_f_zero(double u, const KineticParams& p);

JacobianEntries jacobian(double u, double v, double V, const KineticParams& p);

SignConditionReport verify_sign_conditions(const Equilibrium& eq);

EquilibriaResult find_equilibria(const KineticParams& p,
                                 const EquilibriumSearch& search = {});

// S = (1/3)(f_u q_v - f_v q_u) + q_V (f_v - f_u); S > 0 is stability under
// membrane-homogeneous perturbations.
double stability_value_S(const Equilibrium& eq);

}  // namespace polarity::kinetics

#endif
