#include "tripod/goursat.hpp"

#include <cmath>

namespace tripod::pde {

namespace {

PolaritonField march(const BoundarySignal& boundary, const DetuningProfile& nu, double beta,
                     const Grid& grid) {
  grid.validate();
  PolaritonField f(grid, Frame::Unprimed, Provenance::GoursatPDE);
  const std::size_t nz = grid.zeta_nodes();
  const std::size_t nt = grid.tau_nodes();
  const double hz = grid.dzeta();
  const double ht = grid.dtau();
  const double s = std::sin(beta);
  const double c = std::cos(beta);
  const cplx I(0.0, 1.0);
  auto nu_at = [&](std::size_t i, std::size_t j) { return nu(grid.tau(j) + grid.zeta(i)); };

  // entrance: Psi prescribed, Upsilon integrated along tau
  f.psi_at(0, 0) = boundary(grid.tau(0));
  f.upsilon_at(0, 0) = 0.0;
  for (std::size_t j = 0; j + 1 < nt; ++j) {
    const cplx p0 = f.psi_at(0, j);
    const cplx u0 = f.upsilon_at(0, j);
    const cplx p1 = boundary(grid.tau(j + 1));
    const double n0 = nu_at(0, j);
    const double n1 = nu_at(0, j + 1);
    const cplx g = 0.5 * ht * I * n1 * c;
    const cplx rhs = u0 + 0.5 * ht * I * n0 * c * (s * p0 + c * u0) + g * s * p1;
    f.psi_at(0, j + 1) = p1;
    f.upsilon_at(0, j + 1) = rhs / (1.0 - g * c);
  }

  for (std::size_t i = 0; i + 1 < nz; ++i) {
    // initial line: Upsilon = 0, Psi integrated along zeta
    {
      const cplx p0 = f.psi_at(i, 0);
      const double n0 = nu_at(i, 0);
      const double n1 = nu_at(i + 1, 0);
      const cplx al = 0.5 * hz * I * n1 * s;
      const cplx rhs = p0 + 0.5 * hz * I * n0 * s * (s * p0);
      f.psi_at(i + 1, 0) = rhs / (1.0 - al * s);
      f.upsilon_at(i + 1, 0) = 0.0;
    }
    for (std::size_t j = 0; j + 1 < nt; ++j) {
      const cplx pl = f.psi_at(i, j + 1);
      const cplx ul = f.upsilon_at(i, j + 1);
      const cplx pb = f.psi_at(i + 1, j);
      const cplx ub = f.upsilon_at(i + 1, j);
      const double nl = nu_at(i, j + 1);
      const double nb = nu_at(i + 1, j);
      const double nn = nu_at(i + 1, j + 1);
      const cplx al = 0.5 * hz * I * nn * s;
      const cplx ga = 0.5 * ht * I * nn * c;
      const cplx r1 = pl + 0.5 * hz * I * nl * s * (s * pl + c * ul);
      const cplx r2 = ub + 0.5 * ht * I * nb * c * (s * pb + c * ub);
      const cplx det = 1.0 - al * s - ga * c;
      f.psi_at(i + 1, j + 1) = (r1 * (1.0 - ga * c) + al * c * r2) / det;
      f.upsilon_at(i + 1, j + 1) = ((1.0 - al * s) * r2 + ga * s * r1) / det;
    }
  }
  return f;
}

}  // namespace

PolaritonField solve_goursat(const BoundarySignal& boundary, const DetuningProfile& nu,
                             double beta, const Grid& grid, const GoursatScheme& scheme) {
  PolaritonField coarse = march(boundary, nu, beta, grid);
  if (!scheme.richardson) return coarse;
  Grid fine_grid = grid;
  fine_grid.n_zeta *= 2;
  fine_grid.n_tau *= 2;
  const PolaritonField fine = march(boundary, nu, beta, fine_grid);
  for (std::size_t i = 0; i < grid.zeta_nodes(); ++i) {
    for (std::size_t j = 0; j < grid.tau_nodes(); ++j) {
      const std::size_t k = fine.index(2 * i, 2 * j);
      coarse.psi_at(i, j) = (4.0 * fine.psi[k] - coarse.psi_at(i, j)) / 3.0;
      coarse.upsilon_at(i, j) = (4.0 * fine.upsilon[k] - coarse.upsilon_at(i, j)) / 3.0;
    }
  }
  return coarse;
}

}  // namespace tripod::pde
