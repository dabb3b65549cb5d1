#ifndef POLARITY_NONDIM_HPP
#define POLARITY_NONDIM_HPP

// Conversion between the dimensional GTPase model and the nondimensional
// parameter set, with the reference length fixed at 1 m (R = sqrt(gamma) m).

#include "polarity/kinetics.hpp"

namespace polarity::nondim {

// SI units as indicated by the field suffixes.
struct DimensionalParams {
  double k1_m2_per_mol_s = 0.0;
  double k2_m2_per_mol_s = 0.0;
  double k3_mol_per_m2_s = 0.0;
  double k4_mol_per_m2 = 0.0;
  double K5_m2_per_mol = 0.0;
  double g0_mol_per_m2 = 0.0;
  double b6_m2_per_mol_s = 0.0;
  double b_m6_per_s = 0.0;
  double D_m2_per_s = 0.0;
  double du_m2_per_s = 0.0;
  double dv_m2_per_s = 0.0;
  double c_max_mol_per_m2 = 0.0;
  double R_m = 0.0;
  double vol_B_m3 = 0.0;
  double area_Gamma_m2 = 0.0;
  double V_init = 5.1;  // already nondimensional reference concentration

  void validate() const;  // throws UnitViolation on non-positive entries
};

// Anchor scales fixing the inverse map's degrees of freedom. R_m <= 0 means
// "derive R from gamma"; an explicit R_m must agree with sqrt(gamma) m.
struct RedimensionAnchors {
  double du_m2_per_s = 1.0;
  double c_max_mol_per_m2 = 1.0;
  double vol_B_m3 = 4.18879020478639098;    // unit ball
  double area_Gamma_m2 = 12.5663706143591729;  // unit sphere
  double R_m = 0.0;
};

kinetics::KineticParams nondimensionalize(const DimensionalParams& dp);

// Inverse of nondimensionalize up to the anchor freedoms; the k1/g0 product
// is split by the convention g0 = c_max.
DimensionalParams redimensionalize(const kinetics::KineticParams& p,
                                   const RedimensionAnchors& anchors);

}  // namespace polarity::nondim

#endif
