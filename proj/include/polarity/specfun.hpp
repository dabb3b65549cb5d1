#ifndef POLARITY_SPECFUN_HPP
#define POLARITY_SPECFUN_HPP

// Modified spherical Bessel machinery for the bulk dispersion theory:
// i_l, the logarithmic-derivative ratio rho_l(r) = r i_l'(r)/i_l(r),
// kappa_{D,l}(omega) = D * rho_l(sqrt(omega/D)), the l=0 helper
// tilde_kappa, and Legendre polynomials for axisymmetric mode projection.

namespace polarity::specfun {

inline constexpr int kMaxOrder = 200;

// Largest argument accepted by mod_sph_bessel_i; above this e^r overflows
// double range. Ratio-based callers must use bessel_ratio_rho instead.
inline constexpr double kBesselArgMax = 700.0;

// Limit of tilde_kappa(r) as r -> 0+.
inline constexpr double kTildeKappaAtZero = 1.0 / 3.0;

struct BesselRatioResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// i_l(r) = sqrt(pi/(2r)) I_{l+1/2}(r), with i_0(0)=1 and i_l(0)=0 for l>=1.
double mod_sph_bessel_i(int l, double r);

// rho_l(r) = r i_l'(r)/i_l(r), continued-fraction evaluation; rho_l(0) = l.
// Bounds l <= rho_l(r) <= l + r^2/3 hold for all r >= 0.
BesselRatioResult bessel_ratio_rho(int l, double r);

// kappa_{D,l}(omega) = D rho_l(sqrt(omega/D)); kappa_{D,l}(0) = D*l exactly.
double kappa(double D, int l, double omega);

// (r cosh r - sinh r)/(r^2 sinh r); strictly decreasing, 1/3 at 0+, -> 0.
double tilde_kappa(double r);

// Legendre polynomial P_l(x) by the three-term recurrence, |x| <= 1.
double legendre_p(int l, double x);

}  // namespace polarity::specfun

#endif
