#include "polarity/nondim.hpp"

#include <cmath>
#include <string>

#include "polarity/errors.hpp"

namespace polarity::nondim {

namespace {

// Unit length I = 1 m; kept explicit so the groupings below read like the
// dimensional analysis they implement.
constexpr double kUnitLength = 1.0;

void require_positive(double value, const char* name, std::string& v) {
  if (!(value > 0.0)) {
    if (!v.empty()) v += "; ";
    v += std::string(name) + " must be > 0";
  }
}

}  // namespace

void DimensionalParams::validate() const {
  std::string v;
  require_positive(k1_m2_per_mol_s, "k1", v);
  require_positive(k2_m2_per_mol_s, "k2", v);
  require_positive(k3_mol_per_m2_s, "k3", v);
  require_positive(k4_mol_per_m2, "k4", v);
  require_positive(K5_m2_per_mol, "K5", v);
  require_positive(g0_mol_per_m2, "g0", v);
  require_positive(b6_m2_per_mol_s, "b6", v);
  require_positive(b_m6_per_s, "b_m6", v);
  require_positive(D_m2_per_s, "D", v);
  require_positive(du_m2_per_s, "du", v);
  require_positive(dv_m2_per_s, "dv", v);
  require_positive(c_max_mol_per_m2, "c_max", v);
  require_positive(R_m, "R", v);
  require_positive(vol_B_m3, "vol_B", v);
  require_positive(area_Gamma_m2, "area_Gamma", v);
  require_positive(V_init, "V_init", v);
  if (!v.empty()) throw Error(ErrorCode::UnitViolation, v);
}

kinetics::KineticParams nondimensionalize(const DimensionalParams& dp) {
  dp.validate();
  const double I2 = kUnitLength * kUnitLength;
  kinetics::KineticParams p;
  p.a1 = I2 * dp.k1_m2_per_mol_s * dp.g0_mol_per_m2 / dp.du_m2_per_s;
  p.a2 = 1.0 / (dp.K5_m2_per_mol * dp.c_max_mol_per_m2);
  p.a3 = (dp.k2_m2_per_mol_s / dp.k1_m2_per_mol_s) * p.a1;
  p.a4 = I2 * dp.k3_mol_per_m2_s / (dp.du_m2_per_s * dp.c_max_mol_per_m2);
  p.a5 = dp.k4_mol_per_m2 / dp.c_max_mol_per_m2;
  p.a6 = I2 * dp.b6_m2_per_mol_s * dp.c_max_mol_per_m2 * dp.vol_B_m3 /
         (dp.du_m2_per_s * dp.area_Gamma_m2 * dp.R_m);
  p.a_m6 = I2 * dp.b_m6_per_s / dp.du_m2_per_s;
  p.d = dp.dv_m2_per_s / dp.du_m2_per_s;
  p.D = dp.D_m2_per_s / dp.du_m2_per_s;
  p.gamma = (dp.R_m / kUnitLength) * (dp.R_m / kUnitLength);
  p.V_init = dp.V_init;
  return p;
}

DimensionalParams redimensionalize(const kinetics::KineticParams& p,
                                   const RedimensionAnchors& anchors) {
  p.validate();
  if (p.reduced_model()) {
    throw Error(ErrorCode::UnitViolation,
                "redimensionalize: D must be finite");
  }
  std::string v;
  require_positive(anchors.du_m2_per_s, "anchor du", v);
  require_positive(anchors.c_max_mol_per_m2, "anchor c_max", v);
  require_positive(anchors.vol_B_m3, "anchor vol_B", v);
  require_positive(anchors.area_Gamma_m2, "anchor area_Gamma", v);
  if (!v.empty()) throw Error(ErrorCode::UnitViolation, v);

  const double R_from_gamma = std::sqrt(p.gamma) * kUnitLength;
  double R = anchors.R_m;
  if (R <= 0.0) {
    R = R_from_gamma;
  } else if (std::fabs(R - R_from_gamma) > 1e-9 * R_from_gamma) {
    throw Error(ErrorCode::UnitViolation,
                "anchor R inconsistent with sqrt(gamma) * 1m");
  }

  const double I2 = kUnitLength * kUnitLength;
  const double du = anchors.du_m2_per_s;
  const double c_max = anchors.c_max_mol_per_m2;

  DimensionalParams dp;
  dp.du_m2_per_s = du;
  dp.c_max_mol_per_m2 = c_max;
  dp.vol_B_m3 = anchors.vol_B_m3;
  dp.area_Gamma_m2 = anchors.area_Gamma_m2;
  dp.R_m = R;
  dp.g0_mol_per_m2 = c_max;  // convention splitting the k1*g0 product
  dp.k1_m2_per_mol_s = p.a1 * du / (I2 * dp.g0_mol_per_m2);
  dp.k2_m2_per_mol_s = (p.a3 / p.a1) * dp.k1_m2_per_mol_s;
  dp.k3_mol_per_m2_s = p.a4 * du * c_max / I2;
  dp.k4_mol_per_m2 = p.a5 * c_max;
  dp.K5_m2_per_mol = 1.0 / (p.a2 * c_max);
  dp.b6_m2_per_mol_s =
      p.a6 * du * dp.area_Gamma_m2 * R / (I2 * c_max * dp.vol_B_m3);
  dp.b_m6_per_s = p.a_m6 * du / I2;
  dp.dv_m2_per_s = p.d * du;
  dp.D_m2_per_s = p.D * du;
  dp.V_init = p.V_init;
  return dp;
}

}  // namespace polarity::nondim
