#pragma once

#include "tripod/model.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace tripod::pde {

/// Classical (c-number) fields of the linearized tripod system on a grid of
/// cell centres z_j = (j + 1/2) dz.
///
/// Normalization: |E|^2 and |f_alpha|^2 are linear densities on the same
/// footing, so without decay
///   N = sum_j dz (|E_j|^2 + |f_e,j|^2 + |f_1,j|^2 + |f_2,j|^2)
/// changes only by the photon flux c |E|^2 through the two ends.
struct MaxwellBlochState {
  double t = 0.0;
  std::vector<cplx> E, fe, f1, f2;

  double norm(double dz) const;
};

struct MaxwellBlochConfig {
  std::size_t n_z = 100;
  double t_max = 1.0;
  double dt = 0.0;                ///< 0 selects dz / c (exact-shift advection)
  std::size_t sample_every = 0;   ///< 0 keeps only the final state
};

/// Excitation ledger accumulated over the run.
struct ExcitationLedger {
  double initial = 0.0;
  double final = 0.0;
  double inflow = 0.0;   ///< integral of c |E(0, t)|^2
  double outflow = 0.0;  ///< integral of c |E(L, t)|^2
  double decay = 0.0;    ///< 2 gamma times the integral of |f_e|^2 over z and t
};

struct MaxwellBlochResult {
  double dz = 0.0;
  double dt = 0.0;
  std::vector<MaxwellBlochState> samples;
  /// Field leaving the medium, one entry per step.
  std::vector<double> t_out;
  std::vector<cplx> E_out;
  /// Psi projection in the last cell after each step, at times t_state.
  std::vector<double> t_state;
  std::vector<cplx> psi_last;
  double z_last = 0.0;
  ExcitationLedger ledger;
};

/// Coefficients of the local coupling, normally taken from MediumParams
/// (g = kappa sqrt(n1d)); set directly to study limits such as g = 0.
struct MaxwellBlochCoefficients {
  double g = 0.0;
  double gamma = 0.0;
  double omega = 0.0;
  double beta = 0.0;
  double c = 1.0;
  double length = 1.0;

  static MaxwellBlochCoefficients from(const MediumParams& m);
};

/// Integrates
///   dE/dt   = -c dE/dz + i g f_e
///   df_e/dt = i g E + i Omega (cos(beta) f_1 + sin(beta) f_2) - gamma f_e
///   df_1/dt = i Omega cos(beta) f_e
///   df_2/dt = i nu(t) f_2 + i Omega sin(beta) f_e
/// with g = kappa sqrt(n1d) and E(0, t) = E_in(t). Strang splitting: exact
/// one-cell shift for the advection, exact 4x4 matrix exponential for the
/// local coupling with nu frozen at each half-step midpoint.
/// Throws std::invalid_argument when c dt > dz.
MaxwellBlochResult solve_maxwell_bloch(const MediumParams& m,
                                       const std::function<cplx(double)>& E_in,
                                       const DetuningProfile& nu, const MaxwellBlochConfig& cfg);
MaxwellBlochResult solve_maxwell_bloch(const MaxwellBlochCoefficients& k,
                                       const std::function<cplx(double)>& E_in,
                                       const DetuningProfile& nu, const MaxwellBlochConfig& cfg);

/// Pointwise dark-state combinations
///   Psi = cos(theta) E - sin(theta) (cos(beta) f_1 + sin(beta) f_2)
///   Upsilon = sin(beta) f_1 - cos(beta) f_2
std::pair<std::vector<cplx>, std::vector<cplx>> project_to_polaritons(
    const MaxwellBlochState& state, const MediumParams& m);

/// Steady-state amplitude transmission of a monochromatic probe detuned by
/// omega (fields ~ exp(-i omega t)) through the whole sample.
cplx transmission(const MediumParams& m, double nu, double omega);

/// Smallest omega > 0 where the intensity transmission falls to 1/e.
double transparency_halfwidth(const MediumParams& m, double nu = 0.0);

}  // namespace tripod::pde
