#ifndef POLARITY_SIMULATE_HPP
#define POLARITY_SIMULATE_HPP

// Nonlinear axisymmetric time-domain solver for the reduced non-local
// system on the unit sphere and the full coupled system on the unit ball.
// Cell-centered grids (theta_j = (j+1/2) pi/N_theta, r_i = (i+1/2)/N_r),
// conservative flux-form operators, IMEX stepping with implicit diffusion
// and explicit reaction / non-local / Robin coupling.
//
// The explicit part limits dt: dt * (stiffest reaction rate, roughly
// gamma * max|dq/dv|) must stay below 2. The NaN guard halves dt once and
// retries before giving up.

#include <cstdint>
#include <optional>
#include <vector>

#include "polarity/kinetics.hpp"

namespace polarity::sim {

struct SurfaceField {
  std::vector<double> values;

  int n() const { return static_cast<int>(values.size()); }
};

struct BulkField {
  int n_r = 0;
  int n_theta = 0;
  std::vector<double> values;  // row-major (i, j) = values[i * n_theta + j]

  BulkField() = default;
  BulkField(int nr, int nt, double fill = 0.0)
      : n_r(nr), n_theta(nt), values(static_cast<size_t>(nr) * nt, fill) {}
  double& at(int i, int j) { return values[static_cast<size_t>(i) * n_theta + j]; }
  double at(int i, int j) const { return values[static_cast<size_t>(i) * n_theta + j]; }
};

enum class Model { Reduced, Full };
enum class InitialConditionKind { RandomUniform, UniformMean, ModePerturbation };

struct SimConfig {
  Model model = Model::Reduced;
  int n_theta = 256;
  int n_r = 64;
  double dt = 1e-4;
  double t_end = 5.0;
  std::uint64_t seed = 0;
  double ic_amplitude = 2e-4;
  InitialConditionKind ic = InitialConditionKind::RandomUniform;
  int perturb_l = 1;
  double perturb_amplitude = 1e-6;
  int snapshot_stride = 10;   // diagnostics every this many steps
  int field_stride = 0;       // field snapshots every field_stride-th
                              // diagnostic record; 0 = initial + final only
  int legendre_l_max = 6;
  kinetics::KineticParams params;

  void validate() const;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> V_trace;  // empty for the reduced model
};

struct SimRecord {
  int n_theta = 0;
  double dt_used = 0.0;
  bool dt_halved = false;
  double V0 = 0.0;  // initial bulk value (full model)
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> u_min, u_max, v_min, v_max;
  std::vector<double> u_mean, v_mean;
  // legendre[k][l] = (2l+1)/2 sum_j u_j P_l(cos theta_j) sin theta_j dtheta
  std::vector<std::vector<double>> legendre;
  std::vector<Snapshot> snapshots;
  long negative_cells = 0;  // diagnostic count, positivity is not enforced
  long cg_iterations = 0;   // bulk solver work (full model)
};

// Conservative flux-form Laplace-Beltrami, zero flux through both poles.
SurfaceField laplace_beltrami_axisym(const SurfaceField& w, double coeff);

// 2 pi sum_j w_j sin(theta_j) dtheta.
double surface_integral(const SurfaceField& w);

// Non-local cytosolic value V[u+v] = V_init - (3/4pi) integral(u+v).
double nonlocal_V(const SurfaceField& u, const SurfaceField& v,
                  const kinetics::KineticParams& p);

// One IMEX step of the reduced system (in place).
void step_reduced(SurfaceField& u, SurfaceField& v,
                  const kinetics::KineticParams& p, double dt);

// One IMEX step of the full system (in place).
void step_full(SurfaceField& u, SurfaceField& v, BulkField& V,
               const kinetics::KineticParams& p, double dt);

double total_mass_reduced(const SurfaceField& u, const SurfaceField& v,
                          const kinetics::KineticParams& p);
double total_mass_full(const SurfaceField& u, const SurfaceField& v,
                       const BulkField& V);

SimRecord run_simulation(const SimConfig& cfg);

// Least-squares slope of log(a_l(t) - equilibrium projection) over
// [t0, t1] from the recorded Legendre amplitudes.
double measure_growth_rate(const SimRecord& record, int l, double t0,
                           double t1);

// Number of contiguous index runs with w_j > level (poles are distinct
// points, no wraparound).
int spot_count(const SurfaceField& w, double level);

}  // namespace polarity::sim

#endif
