#include "tripod/analysis.hpp"

#include "tripod/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

namespace tripod::analysis {

double EfficiencyCurve::max() const {
  return eta.empty() ? 0.0 : *std::max_element(eta.begin(), eta.end());
}

double EfficiencyCurve::argmax() const {
  if (eta.empty()) return 0.0;
  return tau[static_cast<std::size_t>(std::max_element(eta.begin(), eta.end()) - eta.begin())];
}

namespace {

double column_norm(const PolaritonField& f, std::size_t j) {
  const std::size_t nz = f.grid.zeta_nodes();
  if (nz == 1) return 0.0;
  std::vector<double> y(nz);
  for (std::size_t i = 0; i < nz; ++i) y[i] = std::norm(f.upsilon_at(i, j));
  return quad::trapezoid(y, f.grid.dzeta());
}

// Trapezoid rule for the integral of |Psi(zeta_i, tau)|^2 over [0, tau_end],
// with a partial last panel at the linearly interpolated value.
double boundary_flux(const PolaritonField& f, std::size_t i, double tau_end) {
  const Grid& g = f.grid;
  if (tau_end <= 0.0 || g.n_tau == 0) return 0.0;
  const double h = g.dtau();
  const auto full = std::min(static_cast<std::size_t>(std::floor(tau_end / h + 1e-9)), g.n_tau);
  double acc = 0.0;
  for (std::size_t j = 0; j < full; ++j)
    acc += 0.5 * h * (std::norm(f.psi_at(i, j)) + std::norm(f.psi_at(i, j + 1)));
  const double rest = tau_end - static_cast<double>(full) * h;
  if (rest > 1e-12 * h && full < g.n_tau) {
    const double w = rest / h;
    const cplx end = (1.0 - w) * f.psi_at(i, full) + w * f.psi_at(i, full + 1);
    acc += 0.5 * rest * (std::norm(f.psi_at(i, full)) + std::norm(end));
  }
  return acc;
}

}  // namespace

double upsilon_norm(const PolaritonField& field, double tau) {
  const Grid& g = field.grid;
  const double lo = g.tau(0);
  const double hi = g.tau(g.tau_nodes() - 1);
  if (!(tau >= lo - 1e-12 * std::max(1.0, hi) && tau <= hi * (1 + 1e-12)))
    throw std::out_of_range("upsilon_norm: tau outside the grid");
  if (g.n_tau == 0) return column_norm(field, 0);
  const double x = std::clamp(tau / g.dtau(), 0.0, static_cast<double>(g.n_tau));
  const auto j = std::min(static_cast<std::size_t>(x), g.n_tau - 1);
  const double w = x - static_cast<double>(j);
  const double n0 = column_norm(field, j);
  if (w == 0.0) return n0;
  return (1.0 - w) * n0 + w * column_norm(field, j + 1);
}

EfficiencyCurve efficiency_curve(const PolaritonField& field, const BoundarySignal& signal) {
  const double e = signal.energy();
  if (!(e > 0)) throw std::invalid_argument("efficiency_curve: pulse energy must be positive");
  EfficiencyCurve c;
  c.normalization = e;
  c.provenance = field.provenance;
  const std::size_t nt = field.grid.tau_nodes();
  c.tau.resize(nt);
  c.eta.resize(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    c.tau[j] = field.grid.tau(j);
    c.eta[j] = column_norm(field, j) / e;
  }
  return c;
}

EfficiencyCurve efficiency_curve(const BoundarySignal& signal, double zeta_L,
                                 const std::vector<double>& taus,
                                 const analytic::ConvolutionQuadrature& q) {
  const double e = signal.energy();
  if (!(e > 0)) throw std::invalid_argument("efficiency_curve: pulse energy must be positive");
  EfficiencyCurve c;
  c.normalization = e;
  c.provenance = Provenance::Analytic;
  c.tau = taus;
  c.eta.assign(taus.size(), 0.0);
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < taus.size(); k += workers)
        c.eta[k] = analytic::upsilon_norm(signal, zeta_L, taus[k], q) / e;
    }));
  }
  for (auto& j : jobs) j.get();
  return c;
}

double conservation_residual(const PolaritonField& field, const BoundarySignal& signal, double tau) {
  const std::size_t last = field.grid.zeta_nodes() - 1;
  const double stored = upsilon_norm(field, tau);
  const double in = boundary_flux(field, 0, tau);
  const double out = boundary_flux(field, last, tau);
  return std::abs(stored - in + out) / signal.energy();
}

double conservation_residual(const BoundarySignal& signal, double zeta_L, double tau,
                             const analytic::ConvolutionQuadrature& q) {
  const double stored = analytic::upsilon_norm(signal, zeta_L, tau, q);
  const double in = analytic::psi_flux(signal, 0.0, tau, q);
  const double out = analytic::psi_flux(signal, zeta_L, tau, q);
  return std::abs(stored - in + out) / signal.energy();
}

double containment_fraction(const BoundarySignal& signal, double zeta_L) {
  if (!(zeta_L > 0)) throw std::invalid_argument("containment_fraction: zeta_L must be positive");
  const double e = signal.energy();
  auto inside = [&](double t) { return signal.energy_between(t - zeta_L, t); };
  const double tp = signal.spec().tau_p;
  const double end = signal.support_end() + zeta_L;
  const double step = 0.01 * tp;
  double best_t = 0.0, best = -1.0;
  for (double t = 0.0; t <= end + step; t += step) {
    const double v = inside(t);
    if (v > best) best = v, best_t = t;
  }
  const double t = quad::golden_max(inside, std::max(0.0, best_t - step), best_t + step, 1e-10 * tp);
  return std::max(best, inside(t)) / e;
}

double asymptotic_exponent_fit(const EfficiencyCurve& curve, double tau_lo, double tau_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < curve.tau.size(); ++k) {
    const double t = curve.tau[k];
    if (t < tau_lo || t > tau_hi) continue;
    if (!(curve.eta[k] > 0) || !(t > 0))
      throw std::domain_error("asymptotic_exponent_fit: non-positive sample in range");
    const double x = std::log(t), y = std::log(curve.eta[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("asymptotic_exponent_fit: fewer than two samples in range");
  const double dn = static_cast<double>(n);
  const double den = dn * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("asymptotic_exponent_fit: degenerate range");
  return (dn * sxy - sx * sy) / den;
}

double extremal_efficiency_estimate(const BoundarySignal& signal, double tau) {
  if (tau <= 0.0) return 0.0;
  return signal.energy_between(0.0, tau) / signal.energy();
}

RegimeInputs regime_inputs(const MediumParams& m, const PulseSpec& pulse, double nu0, double tau) {
  const DerivedParams d = derive_params(m);
  RegimeInputs in;
  in.nu0 = nu0;
  in.beta = m.beta;
  in.zeta_L = d.zeta_L;
  in.tau = tau;
  in.tau_p = pulse.tau_p;
  in.optical_density = m.optical_density;
  in.delta_omega_eit = d.delta_omega_eit;
  return in;
}

RegimeReport regime_report(const RegimeInputs& in) {
  RegimeReport r;
  const double a = std::abs(analytic::coupling_constant(in.nu0, in.beta));
  r.cond1_value = a * std::sqrt(in.zeta_L * in.tau);
  r.cond2_value = in.tau > 0 ? a * std::sqrt(in.zeta_L / in.tau) * in.tau_p
                             : std::numeric_limits<double>::infinity();
  r.cond1_ok = r.cond1_value >= RegimeReport::kMuchGreater;
  r.cond2_ok = r.cond2_value <= RegimeReport::kMuchLess;
  if (in.optical_density && in.delta_omega_eit) {
    const double s = *in.optical_density;
    const double dw = *in.delta_omega_eit;
    const double nu = std::abs(in.nu0);
    r.cond3_value = nu * std::sqrt(std::sqrt(s) * in.tau_p / dw);
    r.K_p = in.tau_p * dw;
    r.cond4_lhs = std::sqrt(s) * *r.K_p;
    if (nu > 0) r.cond4_rhs = (dw / nu) * (dw / nu);
    r.nu_in_window = nu / dw;
    r.cond3_ok = *r.cond3_value >= RegimeReport::kMuchGreater;
    r.K_p_ok = *r.K_p >= RegimeReport::kMuchGreater;
    r.cond4_ok = r.cond4_rhs && *r.cond4_lhs >= RegimeReport::kMuchGreater * *r.cond4_rhs;
    r.nu_in_window_ok = *r.nu_in_window <= RegimeReport::kMuchLess;
  }
  return r;
}

}  // namespace tripod::analysis
