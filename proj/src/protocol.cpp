#include "tripod/protocol.hpp"

#include "tripod/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tripod::protocol {

const char* to_string(SwitchKind k) {
  switch (k) {
    case SwitchKind::NuToZero: return "nu_to_zero";
    case SwitchKind::ControlsOff: return "controls_off";
    case SwitchKind::RetrievalSwap: return "retrieval_swap";
  }
  return "?";
}

RetrievalControls retrieval_controls(double beta, double omega) {
  return {std::sin(beta) * omega, -std::cos(beta) * omega, 0.0};
}

void ProtocolSchedule::validate() const {
  if (!(storage_time > 0) || !std::isfinite(storage_time))
    throw std::invalid_argument("ProtocolSchedule: storage_time must be positive");
  if (!(omega > 0) || !std::isfinite(omega))
    throw std::invalid_argument("ProtocolSchedule: omega must be positive");
}

namespace {

// Trapezoid rule on possibly non-uniform, monotone nodes.
double norm_of(const std::vector<cplx>& v, const std::vector<double>& z) {
  double acc = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i)
    acc += 0.5 * std::abs(z[i] - z[i - 1]) * (std::norm(v[i - 1]) + std::norm(v[i]));
  return acc;
}

// Field value at (i, tau) by linear interpolation between tau nodes; zero for tau <= 0.
template <class Get>
cplx interp_tau(const Grid& g, std::size_t i, double tau, Get get) {
  if (tau <= 0.0) return 0.0;
  if (g.n_tau == 0) return get(i, 0);
  const double x = std::min(tau / g.dtau(), static_cast<double>(g.n_tau));
  const auto j = std::min(static_cast<std::size_t>(x), g.n_tau - 1);
  const double w = x - static_cast<double>(j);
  return (1.0 - w) * get(i, j) + w * get(i, j + 1);
}

template <class Get>
double column_flux(const Grid& g, std::size_t i, double tau_end, Get get) {
  if (tau_end <= 0.0 || g.n_tau == 0) return 0.0;
  const double h = g.dtau();
  const auto full = static_cast<std::size_t>(std::floor(tau_end / h));
  double acc = 0.0;
  for (std::size_t j = 0; j < full && j < g.n_tau; ++j)
    acc += 0.5 * h * (std::norm(get(i, j)) + std::norm(get(i, j + 1)));
  const double rest = tau_end - static_cast<double>(full) * h;
  if (rest > 0.0 && full < g.n_tau) {
    const double a = std::norm(get(i, full));
    const double b = std::norm(interp_tau(g, i, tau_end, get));
    acc += 0.5 * rest * (a + b);
  }
  return acc;
}

}  // namespace

double LabSlice::upsilon_norm() const { return norm_of(upsilon, zeta); }
double LabSlice::psi_norm() const { return norm_of(psi, zeta); }

LabSlice snapshot(const PolaritonField& field, double t_s) {
  const Grid& g = field.grid;
  if (!(t_s > 0)) throw std::invalid_argument("snapshot: t_s must be positive");
  if (t_s > g.tau_max * (1 + 1e-12)) throw std::out_of_range("snapshot: t_s beyond the simulated range");
  if (field.frame != Frame::Unprimed) throw std::invalid_argument("snapshot: field must be unprimed");
  auto psi = [&](std::size_t i, std::size_t j) { return field.psi_at(i, j); };
  auto ups = [&](std::size_t i, std::size_t j) { return field.upsilon_at(i, j); };
  LabSlice s;
  s.t_s = t_s;
  const std::size_t nz = g.zeta_nodes();
  s.zeta.resize(nz);
  for (std::size_t i = 0; i < nz; ++i) s.zeta[i] = g.zeta(i);
  s.psi.resize(nz);
  s.upsilon.resize(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    const double tau = t_s - s.zeta[i];
    s.psi[i] = interp_tau(g, i, tau, psi);
    s.upsilon[i] = interp_tau(g, i, tau, ups);
  }
  s.input_flux = column_flux(g, 0, t_s, psi);
  s.output_flux = column_flux(g, nz - 1, t_s - g.zeta_max, psi);
  return s;
}

LabSlice snapshot(const BoundarySignal& signal, double zeta_L, double t_s, std::size_t n_zeta,
                  const analytic::ConvolutionQuadrature& q) {
  if (!(t_s > 0)) throw std::invalid_argument("snapshot: t_s must be positive");
  if (n_zeta < 1) throw std::invalid_argument("snapshot: n_zeta must be >= 1");
  LabSlice s;
  s.t_s = t_s;
  s.zeta.resize(n_zeta + 1);
  s.psi.assign(n_zeta + 1, 0.0);
  s.upsilon.assign(n_zeta + 1, 0.0);
  for (std::size_t i = 0; i <= n_zeta; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n_zeta);
    const double z = zeta_L * x * x;
    s.zeta[i] = z;
    const double tau = t_s - z;
    if (tau <= 0.0) continue;
    s.psi[i] = analytic::evaluate_psi(z, tau, signal, q).value;
    s.upsilon[i] = analytic::evaluate_upsilon(z, tau, signal, q).value;
  }
  s.input_flux = signal.energy_between(0.0, t_s);
  s.output_flux = t_s > zeta_L ? analytic::psi_flux(signal, zeta_L, t_s - zeta_L, q) : 0.0;
  return s;
}

double SpinState::bookkeeping_residual() const {
  if (input_flux == 0.0) return std::abs(stored_norm + drained_norm + output_flux);
  return std::abs(stored_norm + drained_norm + output_flux - input_flux) / input_flux;
}

SpinState apply_storage_switch(const LabSlice& slice, SwitchKind kind) {
  SpinState st;
  st.kind = kind;
  st.t_s = slice.t_s;
  st.zeta = slice.zeta;
  st.upsilon = slice.upsilon;
  st.input_flux = slice.input_flux;
  st.output_flux = slice.output_flux;
  st.upsilon_norm = slice.upsilon_norm();
  const double psi_norm = slice.psi_norm();
  if (kind == SwitchKind::ControlsOff) {
    st.psi = slice.psi;
    st.psi_norm = psi_norm;
    st.stored_norm = st.upsilon_norm + psi_norm;
  } else {
    st.psi.assign(slice.psi.size(), 0.0);
    st.stored_norm = st.upsilon_norm;
    st.drained_norm = psi_norm;
  }
  return st;
}

RetrievalResult retrieve(const SpinState& state, double beta, double omega) {
  RetrievalResult r;
  r.controls = retrieval_controls(beta, omega);
  const std::size_t n = state.zeta.size();
  r.zeta = state.zeta;
  r.orthogonal = state.psi;
  r.delta.resize(n);
  r.output.resize(n);
  if (n == 0) return r;
  const double zl = state.zeta.back();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = n - 1 - k;
    r.delta[k] = zl - state.zeta[i];
    r.output[k] = -state.upsilon[i];
  }
  r.output_energy = n < 2 ? 0.0 : norm_of(r.output, r.delta);
  return r;
}

double store_at_maximum(const BoundarySignal& signal, double zeta_L, double t_lo, double t_hi,
                        std::size_t n_zeta, const analytic::ConvolutionQuadrature& q) {
  if (!(t_hi > t_lo) || !(t_lo >= 0)) throw std::invalid_argument("store_at_maximum: bad bracket");
  auto stored = [&](double t) { return t <= 0 ? 0.0 : snapshot(signal, zeta_L, t, n_zeta, q).upsilon_norm(); };
  const int n = 64;
  const double h = (t_hi - t_lo) / n;
  double best_t = t_lo, best = -1.0;
  for (int k = 0; k <= n; ++k) {
    const double t = t_lo + h * k;
    const double v = stored(t);
    if (v > best) best = v, best_t = t;
  }
  const double lo = std::max(t_lo, best_t - h);
  const double hi = std::min(t_hi, best_t + h);
  const double t = quad::golden_max(stored, lo, hi, 1e-6 * signal.spec().tau_p);
  return stored(t) >= best ? t : best_t;
}

ProtocolReport run_protocol(const BoundarySignal& signal, double zeta_L, ProtocolSchedule schedule,
                            double beta, std::size_t n_zeta, double t_max,
                            const analytic::ConvolutionQuadrature& q) {
  ProtocolReport rep;
  if (schedule.storage_time <= 0.0)
    schedule.storage_time = store_at_maximum(signal, zeta_L, 0.0, t_max, n_zeta, q);
  schedule.validate();
  const LabSlice slice = snapshot(signal, zeta_L, schedule.storage_time, n_zeta, q);
  rep.state = apply_storage_switch(slice, schedule.kind);
  rep.retrieval = retrieve(rep.state, beta, schedule.omega);
  rep.t_s = schedule.storage_time;
  rep.input_energy = signal.energy();
  rep.stored_norm = rep.state.stored_norm;
  rep.retrieved_energy = rep.retrieval.output_energy;
  rep.efficiency = rep.retrieved_energy / rep.input_energy;
  rep.unitarity_error = rep.state.upsilon_norm > 0
                            ? std::abs(rep.retrieved_energy - rep.state.upsilon_norm) / rep.state.upsilon_norm
                            : std::abs(rep.retrieved_energy);
  rep.bookkeeping_residual = rep.state.bookkeeping_residual();
  for (const auto& v : rep.retrieval.orthogonal) rep.orthogonal_max = std::max(rep.orthogonal_max, std::abs(v));
  return rep;
}

}  // namespace tripod::protocol
