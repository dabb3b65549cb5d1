#include "polarity/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "polarity/errors.hpp"
#include "polarity/rng.hpp"
#include "polarity/specfun.hpp"

namespace polarity::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCgTargetRel = 1e-12;
constexpr double kCgFailRel = 1e-10;

struct NanDetected {
  double t = 0.0;
};

double dtheta_of(int n_theta) { return kPi / n_theta; }
double theta_center(int j, double dth) { return (j + 0.5) * dth; }

// Tridiagonal IMEX factor for (I - dt * coeff * L) on the theta grid,
// L the flux-form Laplace-Beltrami. Thomas precomputation is reused
// across steps.
class SurfaceDiffusionSolve {
 public:
  SurfaceDiffusionSolve(int n_theta, double dt, double coeff)
      : n_(n_theta), lower_(n_theta), diag_(n_theta), upper_(n_theta),
        cprime_(n_theta), work_(n_theta) {
    const double dth = dtheta_of(n_theta);
    const double alpha = dt * coeff / (dth * dth);
    for (int j = 0; j < n_; ++j) {
      const double sc = std::sin(theta_center(j, dth));
      const double sf_lo = (j == 0) ? 0.0 : std::sin(j * dth);
      const double sf_hi = (j == n_ - 1) ? 0.0 : std::sin((j + 1) * dth);
      const double a = sf_lo / sc;
      const double b = sf_hi / sc;
      lower_[j] = -alpha * a;
      diag_[j] = 1.0 + alpha * (a + b);
      upper_[j] = -alpha * b;
    }
    // forward-elimination coefficients
    cprime_[0] = upper_[0] / diag_[0];
    for (int j = 1; j < n_; ++j) {
      cprime_[j] = upper_[j] / (diag_[j] - lower_[j] * cprime_[j - 1]);
    }
  }

  void solve(std::vector<double>& x) const {
    work_[0] = x[0] / diag_[0];
    for (int j = 1; j < n_; ++j) {
      work_[j] = (x[j] - lower_[j] * work_[j - 1]) /
                 (diag_[j] - lower_[j] * cprime_[j - 1]);
    }
    x[n_ - 1] = work_[n_ - 1];
    for (int j = n_ - 2; j >= 0; --j) {
      x[j] = work_[j] - cprime_[j] * x[j + 1];
    }
  }

 private:
  int n_;
  std::vector<double> lower_, diag_, upper_, cprime_;
  mutable std::vector<double> work_;
};

class ReducedStepper {
 public:
  ReducedStepper(int n_theta, const kinetics::KineticParams& p, double dt)
      : p_(p), dt_(dt), solve_u_(n_theta, dt, 1.0),
        solve_v_(n_theta, dt, p.d), f_(n_theta), q_(n_theta) {}

  void step(SurfaceField& u, SurfaceField& v) {
    const int n = u.n();
    const double V = nonlocal_V(u, v, p_);
    for (int j = 0; j < n; ++j) {
      f_[j] = kinetics::f_react(u.values[j], v.values[j], p_);
      q_[j] = kinetics::q_sorp(u.values[j], v.values[j], V, p_);
    }
    for (int j = 0; j < n; ++j) {
      u.values[j] += dt_ * p_.gamma * f_[j];
      v.values[j] += dt_ * p_.gamma * (-f_[j] + q_[j]);
    }
    solve_u_.solve(u.values);
    if (p_.d > 0.0) solve_v_.solve(v.values);
  }

 private:
  kinetics::KineticParams p_;
  double dt_;
  SurfaceDiffusionSolve solve_u_, solve_v_;
  std::vector<double> f_, q_;
};

// Finite-volume spherical bulk with conjugate-gradient implicit solve.
// All metric weights drop the common 2 pi factor; the outer-face weight
// sin(theta_j) dtheta matches the surface quadrature exactly, which makes
// the discrete bulk-surface mass exchange cancel to solver tolerance.
class FullStepper {
 public:
  FullStepper(int n_r, int n_theta, const kinetics::KineticParams& p,
              double dt)
      : p_(p), dt_(dt), nr_(n_r), nt_(n_theta),
        solve_u_(n_theta, dt, 1.0), solve_v_(n_theta, dt, p.d) {
    const double dth = dtheta_of(nt_);
    const double dr = 1.0 / nr_;
    const size_t cells = static_cast<size_t>(nr_) * nt_;
    vol_.resize(cells);
    diag_.resize(cells);
    cond_r_.assign(static_cast<size_t>(nr_ - 1) * nt_, 0.0);
    cond_t_.assign(nt_ - 1, 0.0);
    outer_weight_.resize(nt_);
    sinc_.resize(nt_);

    for (int j = 0; j < nt_; ++j) {
      sinc_[j] = std::sin(theta_center(j, dth));
      outer_weight_[j] = sinc_[j] * dth;
    }
    for (int j = 0; j < nt_ - 1; ++j) {
      cond_t_[j] = std::sin((j + 1) * dth) * dr / dth;
    }
    for (int i = 0; i < nr_ - 1; ++i) {
      const double r_face = (i + 1) * dr;
      for (int j = 0; j < nt_; ++j) {
        cond_r_[static_cast<size_t>(i) * nt_ + j] =
            r_face * r_face * sinc_[j] * dth / dr;
      }
    }
    for (int i = 0; i < nr_; ++i) {
      const double r = (i + 0.5) * dr;
      for (int j = 0; j < nt_; ++j) {
        const size_t ij = static_cast<size_t>(i) * nt_ + j;
        vol_[ij] = r * r * dr * sinc_[j] * dth;
        double c = 0.0;
        if (i > 0) c += cond_r_[ij - nt_];
        if (i < nr_ - 1) c += cond_r_[ij];
        if (j > 0) c += cond_t_[j - 1];
        if (j < nt_ - 1) c += cond_t_[j];
        diag_[ij] = vol_[ij] / dt_ + p_.D * c;
      }
    }
    rhs_.resize(cells);
    res_.resize(cells);
    zvec_.resize(cells);
    pvec_.resize(cells);
    apvec_.resize(cells);
    f_.resize(nt_);
    q_.resize(nt_);
    vtrace_.resize(nt_);

    // theta-line preconditioner: per radial index the tridiagonal block
    // diag(A) - D*cond_t couplings, factored once. Tames the stiff angular
    // coupling near the origin where 1/(r dtheta)^2 blows up.
    line_lower_.resize(cells);
    line_cprime_.resize(cells);
    line_factor_.resize(cells);
    line_work_.resize(nt_);
    for (int i = 0; i < nr_; ++i) {
      const size_t row = static_cast<size_t>(i) * nt_;
      double prev_cprime = 0.0;
      for (int j = 0; j < nt_; ++j) {
        const double lower = (j > 0) ? -p_.D * cond_t_[j - 1] : 0.0;
        const double upper = (j < nt_ - 1) ? -p_.D * cond_t_[j] : 0.0;
        const double denom = diag_[row + j] - lower * prev_cprime;
        line_lower_[row + j] = lower;
        line_factor_[row + j] = 1.0 / denom;
        prev_cprime = upper / denom;
        line_cprime_[row + j] = prev_cprime;
      }
    }
  }

  void trace(const BulkField& V, std::vector<double>& out) const {
    for (int j = 0; j < nt_; ++j) {
      out[j] = 1.5 * V.at(nr_ - 1, j) - 0.5 * V.at(nr_ - 2, j);
    }
  }

  void step(SurfaceField& u, SurfaceField& v, BulkField& V) {
    trace(V, vtrace_);
    for (int j = 0; j < nt_; ++j) {
      f_[j] = kinetics::f_react(u.values[j], v.values[j], p_);
      q_[j] = kinetics::q_sorp(u.values[j], v.values[j], vtrace_[j], p_);
    }

    for (size_t ij = 0; ij < vol_.size(); ++ij) {
      rhs_[ij] = vol_[ij] / dt_ * V.values[ij];
    }
    const size_t last_row = static_cast<size_t>(nr_ - 1) * nt_;
    for (int j = 0; j < nt_; ++j) {
      rhs_[last_row + j] -= p_.gamma * q_[j] * outer_weight_[j];
    }
    // initial guess: linear extrapolation from the two previous solutions
    if (prev_V_.size() == V.values.size()) {
      for (size_t ij = 0; ij < V.values.size(); ++ij) {
        const double cur = V.values[ij];
        V.values[ij] = 2.0 * cur - prev_V_[ij];
        prev_V_[ij] = cur;
      }
    } else {
      prev_V_ = V.values;
    }
    cg_solve(V.values);

    for (int j = 0; j < nt_; ++j) {
      u.values[j] += dt_ * p_.gamma * f_[j];
      v.values[j] += dt_ * p_.gamma * (-f_[j] + q_[j]);
    }
    solve_u_.solve(u.values);
    if (p_.d > 0.0) solve_v_.solve(v.values);
  }

 private:
  void apply_A(const std::vector<double>& x, std::vector<double>& y) const {
    const double D = p_.D;
    for (int i = 0; i < nr_; ++i) {
      const size_t row = static_cast<size_t>(i) * nt_;
      for (int j = 0; j < nt_; ++j) {
        const size_t ij = row + j;
        double acc = diag_[ij] * x[ij];
        if (i > 0) acc -= D * cond_r_[ij - nt_] * x[ij - nt_];
        if (i < nr_ - 1) acc -= D * cond_r_[ij] * x[ij + nt_];
        if (j > 0) acc -= D * cond_t_[j - 1] * x[ij - 1];
        if (j < nt_ - 1) acc -= D * cond_t_[j] * x[ij + 1];
        y[ij] = acc;
      }
    }
  }

  // z = M^{-1} r with M the theta-line blocks (SPD).
  void precondition(const std::vector<double>& r, std::vector<double>& z) {
    for (int i = 0; i < nr_; ++i) {
      const size_t row = static_cast<size_t>(i) * nt_;
      line_work_[0] = r[row] * line_factor_[row];
      for (int j = 1; j < nt_; ++j) {
        line_work_[j] = (r[row + j] - line_lower_[row + j] * line_work_[j - 1]) *
                        line_factor_[row + j];
      }
      z[row + nt_ - 1] = line_work_[nt_ - 1];
      for (int j = nt_ - 2; j >= 0; --j) {
        z[row + j] = line_work_[j] - line_cprime_[row + j] * z[row + j + 1];
      }
    }
  }

  // Preconditioned CG, warm-started from the previous solution.
  void cg_solve(std::vector<double>& x) {
    const size_t n = x.size();
    double bnorm2 = 0.0;
    for (size_t k = 0; k < n; ++k) bnorm2 += rhs_[k] * rhs_[k];
    if (bnorm2 == 0.0) {
      std::fill(x.begin(), x.end(), 0.0);
      return;
    }
    apply_A(x, apvec_);
    double rnorm2 = 0.0;
    for (size_t k = 0; k < n; ++k) {
      res_[k] = rhs_[k] - apvec_[k];
      rnorm2 += res_[k] * res_[k];
    }
    const double target2 = kCgTargetRel * kCgTargetRel * bnorm2;
    const int cap = std::max(
        200, static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))));
    precondition(res_, zvec_);
    double rz = 0.0;
    for (size_t k = 0; k < n; ++k) rz += res_[k] * zvec_[k];
    pvec_ = zvec_;
    int iter = 0;
    while (rnorm2 > target2 && iter < cap) {
      apply_A(pvec_, apvec_);
      double pap = 0.0;
      for (size_t k = 0; k < n; ++k) pap += pvec_[k] * apvec_[k];
      const double alpha = rz / pap;
      rnorm2 = 0.0;
      for (size_t k = 0; k < n; ++k) {
        x[k] += alpha * pvec_[k];
        res_[k] -= alpha * apvec_[k];
        rnorm2 += res_[k] * res_[k];
      }
      precondition(res_, zvec_);
      double rz_next = 0.0;
      for (size_t k = 0; k < n; ++k) rz_next += res_[k] * zvec_[k];
      const double beta = rz_next / rz;
      rz = rz_next;
      for (size_t k = 0; k < n; ++k) pvec_[k] = zvec_[k] + beta * pvec_[k];
      ++iter;
    }
    iterations_total_ += iter;
    if (rnorm2 > kCgFailRel * kCgFailRel * bnorm2) {
      throw Error(ErrorCode::LinearSolveFailure,
                  "bulk CG stalled at relative residual " +
                      std::to_string(std::sqrt(rnorm2 / bnorm2)));
    }
  }

 public:
  long iterations_total() const { return iterations_total_; }

  double bulk_mass(const BulkField& V) const {
    double m = 0.0;
    for (size_t ij = 0; ij < vol_.size(); ++ij) m += vol_[ij] * V.values[ij];
    return 2.0 * kPi * m;
  }

 private:
  kinetics::KineticParams p_;
  double dt_;
  int nr_, nt_;
  SurfaceDiffusionSolve solve_u_, solve_v_;
  std::vector<double> vol_, diag_, cond_r_, cond_t_;
  std::vector<double> outer_weight_, sinc_;
  std::vector<double> rhs_, res_, zvec_, pvec_, apvec_;
  std::vector<double> line_lower_, line_cprime_, line_factor_, line_work_;
  std::vector<double> prev_V_;
  long iterations_total_ = 0;
  std::vector<double> f_, q_, vtrace_;
};

double arithmetic_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

void SimConfig::validate() const {
  std::string violations;
  auto require = [&violations](bool ok, const char* msg) {
    if (!ok) {
      if (!violations.empty()) violations += "; ";
      violations += msg;
    }
  };
  require(n_theta >= 16, "n_theta must be >= 16");
  require(model == Model::Reduced || n_r >= 16, "n_r must be >= 16");
  require(dt > 0.0, "dt must be > 0");
  require(t_end > 0.0, "t_end must be > 0");
  require(snapshot_stride >= 1, "snapshot_stride must be >= 1");
  require(field_stride >= 0, "field_stride must be >= 0");
  require(ic_amplitude >= 0.0, "ic_amplitude must be >= 0");
  require(legendre_l_max >= 0, "legendre_l_max must be >= 0");
  require(ic != InitialConditionKind::ModePerturbation || perturb_l >= 1,
          "perturb_l must be >= 1");
  if (model == Model::Full) {
    require(!params.reduced_model(), "full model requires finite D");
  }
  if (!violations.empty()) throw Error(ErrorCode::ValidationError, violations);
  params.validate();
}

SurfaceField laplace_beltrami_axisym(const SurfaceField& w, double coeff) {
  const int n = w.n();
  const double dth = dtheta_of(n);
  SurfaceField out;
  out.values.resize(n);
  for (int j = 0; j < n; ++j) {
    const double sc = std::sin(theta_center(j, dth));
    const double flux_lo =
        (j == 0) ? 0.0
                 : std::sin(j * dth) * (w.values[j] - w.values[j - 1]) / dth;
    const double flux_hi =
        (j == n - 1)
            ? 0.0
            : std::sin((j + 1) * dth) * (w.values[j + 1] - w.values[j]) / dth;
    out.values[j] = coeff * (flux_hi - flux_lo) / (sc * dth);
  }
  return out;
}

double surface_integral(const SurfaceField& w) {
  const int n = w.n();
  const double dth = dtheta_of(n);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    s += w.values[j] * std::sin(theta_center(j, dth));
  }
  return 2.0 * kPi * s * dth;
}

double nonlocal_V(const SurfaceField& u, const SurfaceField& v,
                  const kinetics::KineticParams& p) {
  double s = 0.0;
  const int n = u.n();
  const double dth = dtheta_of(n);
  for (int j = 0; j < n; ++j) {
    s += (u.values[j] + v.values[j]) * std::sin(theta_center(j, dth));
  }
  return p.V_init -
         kinetics::kSphereCTimesArea / (4.0 * kPi) * (2.0 * kPi * s * dth);
}

void step_reduced(SurfaceField& u, SurfaceField& v,
                  const kinetics::KineticParams& p, double dt) {
  ReducedStepper stepper(u.n(), p, dt);
  stepper.step(u, v);
}

void step_full(SurfaceField& u, SurfaceField& v, BulkField& V,
               const kinetics::KineticParams& p, double dt) {
  FullStepper stepper(V.n_r, V.n_theta, p, dt);
  stepper.step(u, v, V);
}

double total_mass_reduced(const SurfaceField& u, const SurfaceField& v,
                          const kinetics::KineticParams& p) {
  SurfaceField sum;
  sum.values.resize(u.values.size());
  for (size_t j = 0; j < sum.values.size(); ++j) {
    sum.values[j] = u.values[j] + v.values[j];
  }
  return surface_integral(sum) + (4.0 * kPi / 3.0) * nonlocal_V(u, v, p);
}

double total_mass_full(const SurfaceField& u, const SurfaceField& v,
                       const BulkField& V) {
  const double dth = dtheta_of(V.n_theta);
  const double dr = 1.0 / V.n_r;
  double bulk = 0.0;
  for (int i = 0; i < V.n_r; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < V.n_theta; ++j) {
      bulk += V.at(i, j) * r * r * dr * std::sin(theta_center(j, dth)) * dth;
    }
  }
  SurfaceField sum;
  sum.values.resize(u.values.size());
  for (size_t j = 0; j < sum.values.size(); ++j) {
    sum.values[j] = u.values[j] + v.values[j];
  }
  return 2.0 * kPi * bulk + surface_integral(sum);
}

namespace {

struct InitialState {
  SurfaceField u;
  SurfaceField v;
  double V0 = 0.0;
};

InitialState build_initial_state(const SimConfig& cfg) {
  InitialState s;
  s.u.values.assign(cfg.n_theta, 0.0);
  s.v.values.assign(cfg.n_theta, 0.0);
  const double dth = dtheta_of(cfg.n_theta);

  switch (cfg.ic) {
    case InitialConditionKind::RandomUniform: {
      rng::SplitMix64 gen(cfg.seed);
      for (int j = 0; j < cfg.n_theta; ++j) {
        s.u.values[j] = gen.next_unit() * cfg.ic_amplitude;
      }
      for (int j = 0; j < cfg.n_theta; ++j) {
        s.v.values[j] = gen.next_unit() * cfg.ic_amplitude;
      }
      break;
    }
    case InitialConditionKind::UniformMean: {
      const double mean = 0.5 * cfg.ic_amplitude;
      std::fill(s.u.values.begin(), s.u.values.end(), mean);
      std::fill(s.v.values.begin(), s.v.values.end(), mean);
      break;
    }
    case InitialConditionKind::ModePerturbation: {
      const kinetics::EquilibriaResult eqs =
          kinetics::find_equilibria(cfg.params);
      const kinetics::Equilibrium* pick = nullptr;
      for (const kinetics::Equilibrium& eq : eqs.states) {
        const bool positive =
            eq.u_star > 0.0 && eq.v_star > 0.0 && eq.V_star > 0.0;
        if (positive && (pick == nullptr) &&
            kinetics::stability_value_S(eq) > 0.0) {
          pick = &eq;
        }
      }
      if (pick == nullptr && !eqs.states.empty()) pick = &eqs.states.front();
      if (pick == nullptr) {
        throw Error(ErrorCode::DomainError,
                    "mode-perturbation initial condition needs an equilibrium");
      }
      for (int j = 0; j < cfg.n_theta; ++j) {
        const double x = std::cos(theta_center(j, dth));
        s.u.values[j] =
            pick->u_star +
            cfg.perturb_amplitude * specfun::legendre_p(cfg.perturb_l, x);
        s.v.values[j] = pick->v_star;
      }
      break;
    }
  }
  s.V0 = cfg.params.V_init -
         kinetics::kSphereCTimesArea *
             (arithmetic_mean(s.u.values) + arithmetic_mean(s.v.values));
  return s;
}

SimRecord run_attempt(const SimConfig& cfg, double dt, bool halved) {
  InitialState init = build_initial_state(cfg);
  SurfaceField u = init.u;
  SurfaceField v = init.v;
  BulkField V;

  std::optional<ReducedStepper> reduced;
  std::optional<FullStepper> full;
  if (cfg.model == Model::Reduced) {
    reduced.emplace(cfg.n_theta, cfg.params, dt);
  } else {
    V = BulkField(cfg.n_r, cfg.n_theta, init.V0);
    full.emplace(cfg.n_r, cfg.n_theta, cfg.params, dt);
  }

  SimRecord record;
  record.n_theta = cfg.n_theta;
  record.dt_used = dt;
  record.dt_halved = halved;
  record.V0 = cfg.model == Model::Full ? init.V0 : 0.0;

  const double dth = dtheta_of(cfg.n_theta);
  std::vector<std::vector<double>> p_table(
      static_cast<size_t>(cfg.legendre_l_max) + 1,
      std::vector<double>(cfg.n_theta));
  std::vector<double> sin_w(cfg.n_theta);
  for (int j = 0; j < cfg.n_theta; ++j) {
    const double theta = theta_center(j, dth);
    sin_w[j] = std::sin(theta) * dth;
    for (int l = 0; l <= cfg.legendre_l_max; ++l) {
      p_table[l][j] = specfun::legendre_p(l, std::cos(theta));
    }
  }

  std::vector<double> vtrace(cfg.n_theta, 0.0);
  auto record_state = [&](double t) {
    for (double x : u.values) {
      if (!std::isfinite(x)) throw NanDetected{t};
    }
    for (double x : v.values) {
      if (!std::isfinite(x)) throw NanDetected{t};
    }
    record.times.push_back(t);
    record.mass.push_back(cfg.model == Model::Reduced
                              ? total_mass_reduced(u, v, cfg.params)
                              : total_mass_full(u, v, V));
    const auto [umin_it, umax_it] =
        std::minmax_element(u.values.begin(), u.values.end());
    const auto [vmin_it, vmax_it] =
        std::minmax_element(v.values.begin(), v.values.end());
    record.u_min.push_back(*umin_it);
    record.u_max.push_back(*umax_it);
    record.v_min.push_back(*vmin_it);
    record.v_max.push_back(*vmax_it);
    record.u_mean.push_back(arithmetic_mean(u.values));
    record.v_mean.push_back(arithmetic_mean(v.values));
    for (int j = 0; j < cfg.n_theta; ++j) {
      if (u.values[j] < 0.0) ++record.negative_cells;
      if (v.values[j] < 0.0) ++record.negative_cells;
    }
    std::vector<double> amps(cfg.legendre_l_max + 1, 0.0);
    for (int l = 0; l <= cfg.legendre_l_max; ++l) {
      double s = 0.0;
      for (int j = 0; j < cfg.n_theta; ++j) {
        s += u.values[j] * p_table[l][j] * sin_w[j];
      }
      amps[l] = (2.0 * l + 1.0) / 2.0 * s;
    }
    record.legendre.push_back(std::move(amps));
  };

  auto record_snapshot = [&](double t) {
    Snapshot snap;
    snap.t = t;
    snap.u = u.values;
    snap.v = v.values;
    if (cfg.model == Model::Full) {
      full->trace(V, vtrace);
      snap.V_trace = vtrace;
    }
    record.snapshots.push_back(std::move(snap));
  };

  const long n_steps =
      static_cast<long>(std::ceil(cfg.t_end / dt - 1e-12));
  record_state(0.0);
  record_snapshot(0.0);
  long diag_count = 0;
  for (long step = 1; step <= n_steps; ++step) {
    if (cfg.model == Model::Reduced) {
      reduced->step(u, v);
    } else {
      full->step(u, v, V);
    }
    if (step % cfg.snapshot_stride == 0 || step == n_steps) {
      const double t = static_cast<double>(step) * dt;
      if (full) record.cg_iterations = full->iterations_total();
      record_state(t);
      ++diag_count;
      if (cfg.field_stride > 0 && diag_count % cfg.field_stride == 0 &&
          step != n_steps) {
        record_snapshot(t);
      }
      if (step == n_steps) record_snapshot(t);
    }
  }
  return record;
}

}  // namespace

SimRecord run_simulation(const SimConfig& cfg) {
  cfg.validate();
  try {
    return run_attempt(cfg, cfg.dt, false);
  } catch (const NanDetected&) {
    // One retry with halved dt; a second trip is a hard failure.
  }
  try {
    return run_attempt(cfg, 0.5 * cfg.dt, true);
  } catch (const NanDetected& nan) {
    throw Error(ErrorCode::SolverFailure,
                "non-finite field values at t=" + std::to_string(nan.t) +
                    " even after halving dt to " + std::to_string(0.5 * cfg.dt));
  }
}

double measure_growth_rate(const SimRecord& record, int l, double t0,
                           double t1) {
  if (record.legendre.empty() ||
      l >= static_cast<int>(record.legendre.front().size())) {
    throw Error(ErrorCode::WindowError,
                "requested Legendre amplitude was not recorded");
  }
  // Projection of the constant equilibrium background onto P_l; removed so
  // the fitted amplitude is the perturbation alone.
  const int n = record.n_theta;
  const double dth = dtheta_of(n);
  double proj_const = 0.0;
  for (int j = 0; j < n; ++j) {
    const double theta = theta_center(j, dth);
    proj_const += specfun::legendre_p(l, std::cos(theta)) *
                  std::sin(theta) * dth;
  }
  const double baseline =
      record.u_mean.front() * (2.0 * l + 1.0) / 2.0 * proj_const;

  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  long count = 0;
  for (size_t k = 0; k < record.times.size(); ++k) {
    const double t = record.times[k];
    if (t < t0 || t > t1) continue;
    const double amp = record.legendre[k][l] - baseline;
    if (!(amp > 0.0)) {
      throw Error(ErrorCode::WindowError,
                  "non-positive mode amplitude inside the fit window");
    }
    const double y = std::log(amp);
    sum_t += t;
    sum_y += y;
    sum_tt += t * t;
    sum_ty += t * y;
    ++count;
  }
  if (count < 2) {
    throw Error(ErrorCode::WindowError, "fit window holds fewer than 2 samples");
  }
  const double denom = count * sum_tt - sum_t * sum_t;
  return (count * sum_ty - sum_t * sum_y) / denom;
}

int spot_count(const SurfaceField& w, double level) {
  int runs = 0;
  bool inside = false;
  for (double x : w.values) {
    const bool above = x > level;
    if (above && !inside) ++runs;
    inside = above;
  }
  return runs;
}

}  // namespace polarity::sim
