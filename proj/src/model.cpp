#include "tripod/model.hpp"

#include "tripod/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tripod {

void MediumParams::validate() const {
  if (!(omega > 0)) throw std::invalid_argument("MediumParams: omega must be > 0");
  if (!(gamma >= 0)) throw std::invalid_argument("MediumParams: gamma must be >= 0");
  if (!(optical_density > 0)) throw std::invalid_argument("MediumParams: optical density must be > 0");
  if (!(length > 0)) throw std::invalid_argument("MediumParams: length must be > 0");
  if (!(c > 0)) throw std::invalid_argument("MediumParams: c must be > 0");
  if (!(n1d > 0)) throw std::invalid_argument("MediumParams: n1d must be > 0");
  if (!std::isfinite(beta)) throw std::invalid_argument("MediumParams: beta must be finite");
}

DerivedParams derive_params(const MediumParams& m) {
  m.validate();
  DerivedParams d;
  const double atoms = m.n1d * m.length;
  d.kappa = std::sqrt(m.gamma * m.optical_density * m.c / (2.0 * atoms));
  d.collective = d.kappa * std::sqrt(m.n1d);
  d.theta = std::atan2(d.collective, m.omega);
  const double ratio = m.omega / d.collective;
  d.slow_light_ratio = ratio;
  d.slow_light = ratio < 0.1;
  // cos^2(theta) = 1 / (1 + tan^2) = Omega^2 / (Omega^2 + g^2)
  const double cos2 = (m.omega * m.omega) / (m.omega * m.omega + d.collective * d.collective);
  d.v_g = m.c * cos2;
  d.zeta_L = m.length / d.v_g;
  d.delta_omega_eit = m.gamma > 0 ? m.omega * m.omega / (m.gamma * std::sqrt(m.optical_density))
                                  : std::numeric_limits<double>::infinity();
  const double st = std::sin(d.theta);
  const double sb = std::sin(m.beta);
  const double cb = std::cos(m.beta);
  d.nu_tilde_factor = st * st * sb * sb + cb * cb;
  d.beta_tilde = std::atan(st * std::tan(m.beta));
  return d;
}

void PulseSpec::validate() const {
  if (!(tau_p > 0)) throw std::invalid_argument("PulseSpec: tau_p must be > 0");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("PulseSpec: amplitude must be finite");
  if (shape == PulseShape::Tabulated) {
    if (times.size() < 2 || times.size() != values.size())
      throw std::invalid_argument("PulseSpec: tabulated pulse needs matching times/values (>= 2)");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!std::isfinite(times[i]) || !std::isfinite(values[i].real()) ||
          !std::isfinite(values[i].imag()))
        throw std::invalid_argument("PulseSpec: non-finite tabulated sample");
      if (i > 0 && !(times[i] > times[i - 1]))
        throw std::invalid_argument("PulseSpec: tabulated times must increase");
    }
    if (times.front() < 0) throw std::invalid_argument("PulseSpec: tabulated times must be >= 0");
  }
}

namespace {

cplx envelope(const PulseSpec& p, double tau) {
  if (p.shape == PulseShape::GaussianDifference) {
    const double x = tau / p.tau_p;
    const double c = p.center_offset;
    return p.amplitude * (std::exp(-(x - c) * (x - c)) - std::exp(-(x + c) * (x + c)));
  }
  const auto& t = p.times;
  if (tau < t.front() || tau > t.back()) return 0.0;
  const auto it = std::upper_bound(t.begin(), t.end(), tau);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - t.begin()), t.size() - 1);
  const std::size_t k0 = k - 1;
  const double w = (tau - t[k0]) / (t[k] - t[k0]);
  return p.amplitude * ((1.0 - w) * p.values[k0] + w * p.values[k]);
}

double tabulated_peak(const PulseSpec& p) {
  double peak = 0.0;
  for (const auto& v : p.values) peak = std::max(peak, std::abs(v));
  return peak;
}

}  // namespace

cplx pulse_value(const PulseSpec& p, double nu0, double beta, double tau) {
  if (!(tau > 0)) return 0.0;
  cplx v = envelope(p, tau);
  if (p.detuned_carrier) {
    const double cb = std::cos(beta);
    v *= std::polar(1.0, nu0 * cb * cb * tau);
  }
  return v;
}

double pulse_support_end(const PulseSpec& p) {
  if (p.shape == PulseShape::GaussianDifference) {
    return (p.center_offset + std::sqrt(-std::log(kTailThreshold))) * p.tau_p;
  }
  const double peak = tabulated_peak(p);
  for (std::size_t i = p.values.size(); i-- > 0;) {
    if (std::abs(p.values[i]) >= kTailThreshold * peak) {
      return p.times[std::min(i + 1, p.times.size() - 1)];
    }
  }
  return p.times.front();
}

namespace {

double energy_on(const PulseSpec& p, double t0, double t1) {
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, pulse_support_end(p));
  if (!(t1 > t0)) return 0.0;
  auto f = [&](double t) { return std::norm(envelope(p, t)); };
  std::vector<double> breaks{t0};
  if (p.shape == PulseShape::GaussianDifference) {
    for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const double b = (p.center_offset + k) * p.tau_p;
      if (b > t0 && b < t1) breaks.push_back(b);
    }
  } else {
    for (double t : p.times)
      if (t > t0 && t < t1) breaks.push_back(t);
  }
  breaks.push_back(t1);
  quad::Options opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  return quad::gauss_kronrod(f, breaks, opt).value;
}

}  // namespace

double pulse_energy(const PulseSpec& p) {
  p.validate();
  if (p.shape == PulseShape::Tabulated) {
    const double peak = tabulated_peak(p);
    if (peak > 0 && std::abs(p.values.back()) > kTailThreshold * peak)
      throw std::invalid_argument("pulse_energy: tabulated pulse does not decay within the table");
  }
  return energy_on(p, 0.0, pulse_support_end(p));
}

BoundarySignal::BoundarySignal(PulseSpec spec, double nu0, double beta)
    : spec_(std::move(spec)), nu0_(nu0), beta_(beta) {
  support_end_ = pulse_support_end(spec_);
  energy_ = pulse_energy(spec_);
}

double BoundarySignal::energy_between(double t0, double t1) const {
  if (t0 <= 0.0 && t1 >= support_end_) return energy_;
  return energy_on(spec_, t0, t1);
}

DetuningProfile DetuningProfile::constant(double nu0) {
  DetuningProfile d;
  d.kind_ = Kind::Constant;
  d.initial_ = nu0;
  return d;
}

DetuningProfile DetuningProfile::piecewise(double initial,
                                           std::vector<std::pair<double, double>> switches) {
  for (std::size_t i = 1; i < switches.size(); ++i) {
    if (!(switches[i].first > switches[i - 1].first))
      throw std::invalid_argument("DetuningProfile: switch times must increase");
  }
  DetuningProfile d;
  d.kind_ = Kind::PiecewiseConstant;
  d.initial_ = initial;
  d.points_ = std::move(switches);
  return d;
}

DetuningProfile DetuningProfile::tabulated(std::vector<double> t, std::vector<double> nu) {
  if (t.empty() || t.size() != nu.size())
    throw std::invalid_argument("DetuningProfile: tabulated profile needs matching samples");
  DetuningProfile d;
  d.kind_ = Kind::Tabulated;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && !(t[i] > t[i - 1]))
      throw std::invalid_argument("DetuningProfile: tabulated times must increase");
    d.points_.emplace_back(t[i], nu[i]);
  }
  d.initial_ = nu.front();
  return d;
}

double DetuningProfile::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return initial_;
    case Kind::PiecewiseConstant: {
      double v = initial_;
      for (const auto& [ts, nu] : points_) {
        if (t >= ts) v = nu;
        else break;
      }
      return v;
    }
    case Kind::Tabulated: {
      if (t <= points_.front().first) return points_.front().second;
      if (t >= points_.back().first) return points_.back().second;
      const auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                       [](double x, const auto& p) { return x < p.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (t - lo.first) / (hi.first - lo.first);
      return (1.0 - w) * lo.second + w * hi.second;
    }
  }
  return initial_;
}

void Grid::validate() const {
  if (!(zeta_max >= 0) || !(tau_max >= 0) || !std::isfinite(zeta_max) || !std::isfinite(tau_max))
    throw std::invalid_argument("Grid: extents must be finite and non-negative");
  if ((n_zeta > 0 && !(zeta_max > 0)) || (n_tau > 0 && !(tau_max > 0)))
    throw std::invalid_argument("Grid: spacing must be positive");
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Analytic: return "analytic";
    case Provenance::GoursatPDE: return "goursat";
    case Provenance::MaxwellBloch: return "maxwell-bloch";
  }
  return "unknown";
}

PolaritonField::PolaritonField(const Grid& g, Frame f, Provenance p)
    : grid(g), frame(f), provenance(p) {
  g.validate();
  psi.assign(g.zeta_nodes() * g.tau_nodes(), cplx{});
  upsilon.assign(g.zeta_nodes() * g.tau_nodes(), cplx{});
}

}  // namespace tripod
