#pragma once

#include "tripod/model.hpp"

namespace tripod::pde {

/// Box scheme for the characteristic-coordinate polariton equations
///   dPsi/dzeta   = i nu sin(beta) (sin(beta) Psi + cos(beta) Upsilon)
///   dUpsilon/dtau = i nu cos(beta) (sin(beta) Psi + cos(beta) Upsilon)
/// with nu evaluated at lab time t = tau + zeta. Each cell integrates both
/// equations with the trapezoid rule along its edges; the implicit 2x2
/// system at the far corner is solved in closed form, so there is no step
/// restriction.
struct GoursatScheme {
  enum class Order { BoxTrapezoid2 };
  Order order = Order::BoxTrapezoid2;
  /// Also solve on the doubled grid and return (4 fine - coarse) / 3 on the
  /// requested nodes.
  bool richardson = false;
};

/// Solves on the rectangle described by `grid` with Psi(0, tau) = Psi0(tau)
/// and Upsilon(zeta, 0) = 0. Output is in the unprimed frame.
PolaritonField solve_goursat(const BoundarySignal& boundary, const DetuningProfile& nu,
                             double beta, const Grid& grid, const GoursatScheme& scheme = {});

}  // namespace tripod::pde
