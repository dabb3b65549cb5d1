#include "polarity/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polarity/errors.hpp"

namespace polarity::kinetics {

namespace {

constexpr double kKinkTolerance = 1e-12;

double q_mass_closed(double u, const KineticParams& p) {
  const double v = v_from_f_zero(u, p);
  const double V = p.V_init - kSphereCTimesArea * (u + v);
  return q_sorp(u, v, V, p);
}

Equilibrium make_equilibrium(double u, const KineticParams& p) {
  Equilibrium eq;
  eq.u_star = u;
  eq.v_star = v_from_f_zero(u, p);
  eq.V_star = p.V_init - kSphereCTimesArea * (eq.u_star + eq.v_star);
  const JacobianEntries j = jacobian(eq.u_star, eq.v_star, eq.V_star, p);
  eq.f_u = j.f_u;
  eq.f_v = j.f_v;
  eq.q_u = j.q_u;
  eq.q_v = j.q_v;
  eq.q_V = j.q_V;
  eq.residual_f = f_react(eq.u_star, eq.v_star, p);
  eq.residual_q = q_sorp(eq.u_star, eq.v_star, eq.V_star, p);
  return eq;
}

}  // namespace

void KineticParams::validate() const {
  std::string violations;
  auto require = [&violations](bool ok, const char* msg) {
    if (!ok) {
      if (!violations.empty()) violations += "; ";
      violations += msg;
    }
  };
  require(a1 > 0.0, "a1 must be > 0");
  require(a2 > 0.0, "a2 must be > 0");
  require(a3 > 0.0, "a3 must be > 0");
  require(a4 > 0.0, "a4 must be > 0");
  require(a5 > 0.0, "a5 must be > 0");
  require(a6 > 0.0, "a6 must be > 0");
  require(a_m6 > 0.0, "a_m6 must be > 0");
  require(gamma > 0.0, "gamma must be > 0");
  require(d >= 0.0, "d must be >= 0");
  require(D > 0.0, "D must be > 0 (or infinity for the reduced model)");
  require(V_init >= 0.0, "V_init must be >= 0");
  require(a1 < a3, "a1 < a3 is required for the sign conditions");
  if (!violations.empty()) {
    throw Error(ErrorCode::ValidationError, violations);
  }
}

double f_react(double u, double v, const KineticParams& p) {
  return (p.a1 + (p.a3 - p.a1) * u / (p.a2 + u)) * v - p.a4 * u / (p.a5 + u);
}

double q_sorp(double u, double v, double V, const KineticParams& p) {
  return p.a6 * V * std::max(1.0 - (u + v), 0.0) - p.a_m6 * v;
}

double v_from_f_zero(double u, const KineticParams& p) {
  return p.a4 * u / ((p.a5 + u) * (p.a1 + (p.a3 - p.a1) * u / (p.a2 + u)));
}

JacobianEntries jacobian(double u, double v, double V, const KineticParams& p) {
  JacobianEntries j;
  const double a2u = p.a2 + u;
  const double a5u = p.a5 + u;
  j.f_u = (p.a3 - p.a1) * p.a2 / (a2u * a2u) * v - p.a4 * p.a5 / (a5u * a5u);
  j.f_v = p.a1 + (p.a3 - p.a1) * u / a2u;

  const double slack = 1.0 - (u + v);
  j.kink_warning = std::fabs(slack) < kKinkTolerance;
  // At the kink the unclamped branch is used; all linearizations of
  // interest sit at states with u+v < 1.
  if (slack >= 0.0) {
    j.q_u = -p.a6 * V;
    j.q_v = -p.a6 * V - p.a_m6;
    j.q_V = p.a6 * slack;
  } else {
    j.q_u = 0.0;
    j.q_v = -p.a_m6;
    j.q_V = 0.0;
  }
  return j;
}

SignConditionReport verify_sign_conditions(const Equilibrium& eq) {
  SignConditionReport r;
  r.fv_nonneg = eq.f_v >= 0.0;
  r.qv_nonpos = eq.q_v <= 0.0;
  r.qv_le_qu = eq.q_v <= eq.q_u;
  r.qV_nonneg = eq.q_V >= 0.0;
  r.fv_pos = eq.f_v > 0.0;
  r.qv_neg = eq.q_v < 0.0;
  r.qV_pos = eq.q_V > 0.0;
  return r;
}

EquilibriaResult find_equilibria(const KineticParams& p,
                                 const EquilibriumSearch& search) {
  p.validate();
  if (search.u_max <= 0.0 || search.grid_points < 2) {
    throw Error(ErrorCode::ValidationError,
                "equilibrium search requires u_max > 0 and grid_points >= 2");
  }

  EquilibriaResult result;
  const int n = search.grid_points;
  const double h = search.u_max / n;
  double g_prev = q_mass_closed(0.0, p);
  if (g_prev == 0.0) result.states.push_back(make_equilibrium(0.0, p));
  double g_last = g_prev;
  for (int i = 1; i <= n; ++i) {
    const double u = i * h;
    const double g = q_mass_closed(u, p);
    g_last = g;
    if (g == 0.0) {
      result.states.push_back(make_equilibrium(u, p));
      g_prev = g;
      continue;
    }
    if (g_prev != 0.0 && std::signbit(g) != std::signbit(g_prev)) {
      double lo = (i - 1) * h;
      double hi = u;
      double g_lo = g_prev;
      while (hi - lo > search.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = q_mass_closed(mid, p);
        if (g_mid == 0.0 || std::signbit(g_mid) == std::signbit(g_lo)) {
          lo = mid;
          g_lo = g_mid;
        } else {
          hi = mid;
        }
      }
      result.states.push_back(make_equilibrium(0.5 * (lo + hi), p));
    }
    g_prev = g;
  }

  // q(0, 0, V_init) >= 0 always; if q stayed positive across the whole
  // range, the saturation-driven sign change lies beyond u_max.
  result.bracket_overflow = result.states.empty() && g_last > 0.0;

  std::sort(result.states.begin(), result.states.end(),
            [](const Equilibrium& a, const Equilibrium& b) {
              return a.u_star < b.u_star;
            });
  std::vector<Equilibrium> merged;
  for (const Equilibrium& eq : result.states) {
    if (merged.empty() ||
        eq.u_star - merged.back().u_star > search.merge_tol) {
      merged.push_back(eq);
    }
  }
  result.states = std::move(merged);
  return result;
}

double stability_value_S(const Equilibrium& eq) {
  return (eq.f_u * eq.q_v - eq.f_v * eq.q_u) / 3.0 +
         eq.q_V * (eq.f_v - eq.f_u);
}

}  // namespace polarity::kinetics
