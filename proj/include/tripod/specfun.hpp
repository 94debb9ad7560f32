#pragma once

// Bessel functions of the first kind, orders 0 and 1, for real arguments.
//
// Three evaluation regimes are used:
//   |x| <= 12        ascending power series, accumulated in long double
//   12 < |x| < 30    Miller backward recurrence normalized by
//                    J0 + 2 (J2 + J4 + ...) = 1
//   |x| >= 30        Hankel asymptotic expansion with amplitude/phase
//                    polynomials P, Q summed to optimal truncation
// Absolute error is below 1e-15 everywhere; relative error is below 1e-13
// away from the zeros.

namespace tripod::specfun {

/// J0(x). Throws std::domain_error for non-finite x.
double bessel_j0(double x);

/// J1(x). Throws std::domain_error for non-finite x.
double bessel_j1(double x);

/// Both orders at once; cheaper than two calls in the Miller regime.
struct BesselPair {
  double j0;
  double j1;
};
BesselPair bessel_j01(double x);

namespace detail {
// Regime boundaries, exposed for tests that probe the seams.
inline constexpr double kSeriesCutoff = 12.0;
inline constexpr double kAsymptoticCutoff = 30.0;

BesselPair series(double x);
BesselPair miller(double x);
BesselPair hankel(double x);
}  // namespace detail

}  // namespace tripod::specfun
