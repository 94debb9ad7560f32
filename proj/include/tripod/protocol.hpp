#pragma once

#include "tripod/analytic.hpp"
#include "tripod/model.hpp"

#include <vector>

namespace tripod::protocol {

enum class SwitchKind { NuToZero, ControlsOff, RetrievalSwap };
const char* to_string(SwitchKind k);

/// Control fields used to release the stored spin wave.
struct RetrievalControls {
  double omega1 = 0.0;  ///< sin(beta) Omega
  double omega2 = 0.0;  ///< -cos(beta) Omega
  double nu = 0.0;
};

RetrievalControls retrieval_controls(double beta, double omega);

struct ProtocolSchedule {
  double storage_time = 0.0;  ///< lab time of the sudden switch
  SwitchKind kind = SwitchKind::NuToZero;
  double omega = 1.0;

  void validate() const;
  RetrievalControls retrieval(double beta) const { return retrieval_controls(beta, omega); }
};

/// Both polaritons along the lab-time line t = t_s, i.e. at (zeta, t_s - zeta),
/// plus the boundary fluxes accumulated up to that line.
struct LabSlice {
  double t_s = 0.0;
  std::vector<double> zeta;
  std::vector<cplx> psi;
  std::vector<cplx> upsilon;
  double input_flux = 0.0;   ///< integral of |Psi(0, tau)|^2 for tau < t_s
  double output_flux = 0.0;  ///< integral of |Psi(zeta_L, tau)|^2 for tau < t_s - zeta_L

  double upsilon_norm() const;
  double psi_norm() const;
};

/// Lab-time slice of a computed field, linear in tau between nodes.
/// Throws std::out_of_range when t_s exceeds the simulated range.
LabSlice snapshot(const PolaritonField& field, double t_s);

/// Lab-time slice from the closed forms on the n_zeta + 1 points
/// zeta_L (i / n_zeta)^2, dense near the entrance where Psi has a boundary
/// layer of width ~1 / (a^2 t_s).
LabSlice snapshot(const BoundarySignal& signal, double zeta_L, double t_s, std::size_t n_zeta,
                  const analytic::ConvolutionQuadrature& q = {});

struct SpinState {
  SwitchKind kind = SwitchKind::NuToZero;
  double t_s = 0.0;
  std::vector<double> zeta;
  std::vector<cplx> upsilon;  ///< frozen spin wave released by retrieval
  std::vector<cplx> psi;      ///< frozen Psi (ControlsOff only, zero otherwise)
  double upsilon_norm = 0.0;
  double psi_norm = 0.0;
  double stored_norm = 0.0;   ///< everything held in the medium after the switch
  double drained_norm = 0.0;  ///< Psi that still leaves the medium (NuToZero, RetrievalSwap)
  double input_flux = 0.0;
  double output_flux = 0.0;

  /// |stored + drained + output_flux - input_flux| / input_flux
  double bookkeeping_residual() const;
};

/// Sudden switch at t_s. NuToZero and RetrievalSwap freeze Upsilon and let
/// Psi drain at v_g; ControlsOff freezes both.
SpinState apply_storage_switch(const LabSlice& slice, SwitchKind kind);

struct RetrievalResult {
  RetrievalControls controls;
  std::vector<double> delta;      ///< time since release at zeta_L
  std::vector<cplx> output;       ///< released polariton at zeta_L
  std::vector<double> zeta;
  std::vector<cplx> orthogonal;   ///< stationary polariton of the swapped basis
  double output_energy = 0.0;
};

/// Swapped controls make -Upsilon the propagating polariton: with nu = 0 it
/// leaves unchanged, output(delta) = -Upsilon(zeta_L - delta).
RetrievalResult retrieve(const SpinState& state, double beta, double omega);

/// Lab time in [t_lo, t_hi] maximising the stored Upsilon norm.
double store_at_maximum(const BoundarySignal& signal, double zeta_L, double t_lo, double t_hi,
                        std::size_t n_zeta, const analytic::ConvolutionQuadrature& q = {});

struct ProtocolReport {
  double t_s = 0.0;
  double input_energy = 0.0;
  double stored_norm = 0.0;
  double retrieved_energy = 0.0;
  double efficiency = 0.0;          ///< retrieved / input energy
  double unitarity_error = 0.0;     ///< |retrieved - retrievable| / retrievable
  double bookkeeping_residual = 0.0;
  double orthogonal_max = 0.0;
  SpinState state;
  RetrievalResult retrieval;
};

/// Store (at the given time, or at the maximum when t_s <= 0) and retrieve,
/// all from the closed forms.
ProtocolReport run_protocol(const BoundarySignal& signal, double zeta_L, ProtocolSchedule schedule,
                            double beta, std::size_t n_zeta, double t_max,
                            const analytic::ConvolutionQuadrature& q = {});

}  // namespace tripod::protocol
