#pragma once

#include "tripod/analytic.hpp"
#include "tripod/model.hpp"

#include <optional>
#include <vector>

namespace tripod::analysis {

/// eta(tau) samples. eta is not clamped to [0, 1].
struct EfficiencyCurve {
  std::vector<double> tau;
  std::vector<double> eta;
  double normalization = 0.0;  ///< pulse energy
  Provenance provenance = Provenance::Analytic;

  double max() const;
  double argmax() const;
};

/// Trapezoidal zeta-integral of |Upsilon|^2 at fixed tau, linear in tau
/// between grid nodes. Throws std::out_of_range outside the grid.
double upsilon_norm(const PolaritonField& field, double tau);

/// eta on every tau node of the field.
EfficiencyCurve efficiency_curve(const PolaritonField& field, const BoundarySignal& signal);

/// eta from the closed-form norm at the given times (evaluated in parallel).
EfficiencyCurve efficiency_curve(const BoundarySignal& signal, double zeta_L,
                                 const std::vector<double>& taus,
                                 const analytic::ConvolutionQuadrature& q = {});

/// |N_Upsilon(tau) - F_in(tau) + F_out(tau)| / E with all terms taken from the
/// field columns at zeta = 0 and zeta = zeta_max (trapezoid rule in tau,
/// linear between nodes).
double conservation_residual(const PolaritonField& field, const BoundarySignal& signal, double tau);

/// The same residual with every term from the closed forms.
double conservation_residual(const BoundarySignal& signal, double zeta_L, double tau,
                             const analytic::ConvolutionQuadrature& q = {});

/// max over tau of the pulse energy inside a window of width zeta_L, over the
/// total energy.
double containment_fraction(const BoundarySignal& signal, double zeta_L);

/// Least-squares slope of log(eta) against log(tau) for tau in [tau_lo, tau_hi].
double asymptotic_exponent_fit(const EfficiencyCurve& curve, double tau_lo, double tau_hi);

/// Fraction of the pulse energy that has entered the medium by tau.
double extremal_efficiency_estimate(const BoundarySignal& signal, double tau);

struct RegimeInputs {
  double nu0 = 0.0;
  double beta = 0.0;
  double zeta_L = 1.0;
  double tau = 1.0;
  double tau_p = 1.0;
  std::optional<double> optical_density;
  std::optional<double> delta_omega_eit;
};

RegimeInputs regime_inputs(const MediumParams& m, const PulseSpec& pulse, double nu0, double tau);

struct RegimeReport {
  static constexpr double kMuchGreater = 10.0;
  static constexpr double kMuchLess = 0.1;

  double cond1_value = 0.0;  ///< |a| sqrt(zeta_L tau)
  double cond2_value = 0.0;  ///< |a| sqrt(zeta_L / tau) tau_p
  bool cond1_ok = false;
  bool cond2_ok = false;

  std::optional<double> cond3_value;  ///< |nu0| sqrt(sqrt(s) tau_p / dw)
  std::optional<double> K_p;          ///< tau_p dw
  std::optional<double> cond4_lhs;    ///< sqrt(s) K_p
  std::optional<double> cond4_rhs;    ///< |dw / nu0|^2, absent for nu0 = 0
  std::optional<double> nu_in_window; ///< |nu0| / dw
  bool cond3_ok = false;
  bool K_p_ok = false;
  bool cond4_ok = false;
  bool nu_in_window_ok = false;
};

RegimeReport regime_report(const RegimeInputs& in);

}  // namespace tripod::analysis
