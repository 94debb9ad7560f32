#include "tripod/maxwell_bloch.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>
#include <stdexcept>

namespace tripod::pde {

double MaxwellBlochState::norm(double dz) const {
  double s = 0.0;
  for (std::size_t j = 0; j < E.size(); ++j)
    s += std::norm(E[j]) + std::norm(fe[j]) + std::norm(f1[j]) + std::norm(f2[j]);
  return s * dz;
}

namespace {

using Mat4 = Eigen::Matrix4cd;

class LocalPropagator {
 public:
  LocalPropagator(const MaxwellBlochCoefficients& k, double h) : k_(k), h_(h) {}

  const Mat4& operator()(double nu) {
    auto it = cache_.find(nu);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 256) cache_.clear();
    const cplx I(0.0, 1.0);
    const double oc = k_.omega * std::cos(k_.beta);
    const double os = k_.omega * std::sin(k_.beta);
    Mat4 M = Mat4::Zero();
    M(0, 1) = I * k_.g;
    M(1, 0) = I * k_.g;
    M(1, 1) = -k_.gamma;
    M(1, 2) = I * oc;
    M(1, 3) = I * os;
    M(2, 1) = I * oc;
    M(3, 1) = I * os;
    M(3, 3) = I * nu;
    Mat4 U = (M * h_).exp();
    return cache_.emplace(nu, U).first->second;
  }

 private:
  MaxwellBlochCoefficients k_;
  double h_;
  std::map<double, Mat4> cache_;
};

void apply(const Mat4& U, MaxwellBlochState& s) {
  const std::size_t n = s.E.size();
  for (std::size_t j = 0; j < n; ++j) {
    const cplx v0 = s.E[j], v1 = s.fe[j], v2 = s.f1[j], v3 = s.f2[j];
    s.E[j] = U(0, 0) * v0 + U(0, 1) * v1 + U(0, 2) * v2 + U(0, 3) * v3;
    s.fe[j] = U(1, 0) * v0 + U(1, 1) * v1 + U(1, 2) * v2 + U(1, 3) * v3;
    s.f1[j] = U(2, 0) * v0 + U(2, 1) * v1 + U(2, 2) * v2 + U(2, 3) * v3;
    s.f2[j] = U(3, 0) * v0 + U(3, 1) * v1 + U(3, 2) * v2 + U(3, 3) * v3;
  }
}

double excited_norm(const MaxwellBlochState& s) {
  double acc = 0.0;
  for (const auto& v : s.fe) acc += std::norm(v);
  return acc;
}

}  // namespace

MaxwellBlochCoefficients MaxwellBlochCoefficients::from(const MediumParams& m) {
  const DerivedParams d = derive_params(m);
  return {d.collective, m.gamma, m.omega, m.beta, m.c, m.length};
}

MaxwellBlochResult solve_maxwell_bloch(const MediumParams& m,
                                       const std::function<cplx(double)>& E_in,
                                       const DetuningProfile& nu, const MaxwellBlochConfig& cfg) {
  return solve_maxwell_bloch(MaxwellBlochCoefficients::from(m), E_in, nu, cfg);
}

MaxwellBlochResult solve_maxwell_bloch(const MaxwellBlochCoefficients& m,
                                       const std::function<cplx(double)>& E_in,
                                       const DetuningProfile& nu, const MaxwellBlochConfig& cfg) {
  if (!(m.c > 0) || !(m.length > 0) || !(m.gamma >= 0) || !(m.g >= 0) || !(m.omega >= 0))
    throw std::invalid_argument("solve_maxwell_bloch: invalid coefficients");
  if (cfg.n_z < 1) throw std::invalid_argument("solve_maxwell_bloch: n_z must be >= 1");
  MaxwellBlochResult res;
  res.dz = m.length / static_cast<double>(cfg.n_z);
  res.dt = cfg.dt > 0 ? cfg.dt : res.dz / m.c;
  const double courant = m.c * res.dt / res.dz;
  if (courant > 1.0 + 1e-12) throw std::invalid_argument("solve_maxwell_bloch: CFL violated (c dt > dz)");
  const bool exact_shift = std::abs(courant - 1.0) <= 1e-12;
  const double dz = res.dz;
  const double dt = res.dt;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(cfg.t_max / dt - 1e-9));

  MaxwellBlochState s;
  s.E.assign(cfg.n_z, 0.0);
  s.fe.assign(cfg.n_z, 0.0);
  s.f1.assign(cfg.n_z, 0.0);
  s.f2.assign(cfg.n_z, 0.0);
  res.z_last = (static_cast<double>(cfg.n_z) - 0.5) * dz;
  res.ledger.initial = 0.0;

  LocalPropagator half(m, 0.5 * dt);
  const double theta = std::atan2(m.g, m.omega);
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const double sb = std::sin(m.beta);
  const double cb = std::cos(m.beta);

  res.t_out.reserve(steps);
  res.E_out.reserve(steps);
  res.t_state.reserve(steps);
  res.psi_last.reserve(steps);
  if (cfg.sample_every) res.samples.push_back(s);

  double excited_prev = excited_norm(s);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    apply(half(nu(t + 0.25 * dt)), s);

    const std::size_t last = cfg.n_z - 1;
    const cplx leaving = s.E[last];
    const cplx entering = E_in(t + 0.5 * dt);
    if (exact_shift) {
      for (std::size_t j = last; j > 0; --j) s.E[j] = s.E[j - 1];
      s.E[0] = entering;
      res.ledger.outflow += std::norm(leaving) * dz;
      res.ledger.inflow += std::norm(entering) * dz;
    } else {
      // first-order upwind
      for (std::size_t j = last; j > 0; --j) s.E[j] -= courant * (s.E[j] - s.E[j - 1]);
      s.E[0] -= courant * (s.E[0] - entering);
      res.ledger.outflow += std::norm(leaving) * m.c * dt;
      res.ledger.inflow += std::norm(entering) * m.c * dt;
    }

    apply(half(nu(t + 0.75 * dt)), s);
    s.t = t + dt;

    const double excited = excited_norm(s);
    res.ledger.decay += 2.0 * m.gamma * dt * dz * 0.5 * (excited_prev + excited);
    excited_prev = excited;

    res.t_out.push_back(t + 0.5 * dt);
    res.E_out.push_back(leaving);
    res.t_state.push_back(s.t);
    res.psi_last.push_back(ct * s.E[last] - st * (cb * s.f1[last] + sb * s.f2[last]));
    if (cfg.sample_every && (k + 1) % cfg.sample_every == 0) res.samples.push_back(s);
  }
  res.ledger.final = s.norm(dz);
  if (!cfg.sample_every || res.samples.empty() || res.samples.back().t != s.t) res.samples.push_back(s);
  return res;
}

std::pair<std::vector<cplx>, std::vector<cplx>> project_to_polaritons(
    const MaxwellBlochState& state, const MediumParams& m) {
  const DerivedParams d = derive_params(m);
  const double st = std::sin(d.theta);
  const double ct = std::cos(d.theta);
  const double sb = std::sin(m.beta);
  const double cb = std::cos(m.beta);
  std::vector<cplx> psi(state.E.size()), ups(state.E.size());
  for (std::size_t j = 0; j < state.E.size(); ++j) {
    psi[j] = ct * state.E[j] - st * (cb * state.f1[j] + sb * state.f2[j]);
    ups[j] = sb * state.f1[j] - cb * state.f2[j];
  }
  return {std::move(psi), std::move(ups)};
}

cplx transmission(const MediumParams& m, double nu, double omega) {
  const DerivedParams d = derive_params(m);
  if (omega == 0.0 || omega + nu == 0.0) return std::exp(cplx(0.0, omega * m.length / m.c));
  const double cb = std::cos(m.beta);
  const double sb = std::sin(m.beta);
  const double o2 = m.omega * m.omega;
  const cplx D = cplx(m.gamma, -omega) + cplx(0.0, o2 * (cb * cb / omega + sb * sb / (omega + nu)));
  const double g2 = d.collective * d.collective;
  const cplx k = cplx(0.0, omega / m.c) - g2 / (m.c * D);
  return std::exp(k * m.length);
}

double transparency_halfwidth(const MediumParams& m, double nu) {
  const double target = std::exp(-1.0);
  auto intensity = [&](double w) { return std::norm(transmission(m, nu, w)); };
  double hi = 1e-6 * std::max(m.omega, 1e-300);
  while (intensity(hi) > target) {
    hi *= 2.0;
    if (hi > 1e12 * m.omega) throw std::runtime_error("transparency_halfwidth: no 1/e point");
  }
  double lo = 0.5 * hi;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (intensity(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace tripod::pde
