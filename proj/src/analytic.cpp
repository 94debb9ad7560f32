#include "tripod/analytic.hpp"

#include "tripod/quadrature.hpp"
#include "tripod/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

namespace tripod::analytic {

double coupling_constant(double nu0, double beta) {
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  if (nu0 == 0.0 || std::abs(sb) < 1e-15 || std::abs(cb) < 1e-15) return 0.0;
  return nu0 * sb * cb;
}

PolaritonField phase_transform(const PolaritonField& field, double nu0, double beta,
                               PhaseDirection direction) {
  const Frame source = direction == PhaseDirection::ToPrimed ? Frame::Unprimed : Frame::Primed;
  if (field.frame != source) throw std::invalid_argument("phase_transform: frame mismatch");
  PolaritonField out = field;
  out.frame = direction == PhaseDirection::ToPrimed ? Frame::Primed : Frame::Unprimed;
  const double sign = direction == PhaseDirection::ToPrimed ? -1.0 : 1.0;
  const double s2 = std::sin(beta) * std::sin(beta);
  const double c2 = std::cos(beta) * std::cos(beta);
  const Grid& g = field.grid;
  for (std::size_t i = 0; i < g.zeta_nodes(); ++i) {
    for (std::size_t j = 0; j < g.tau_nodes(); ++j) {
      const double chi = nu0 * (s2 * g.zeta(i) + c2 * g.tau(j));
      const cplx rot = std::polar(1.0, sign * chi);
      out.psi_at(i, j) *= rot;
      out.upsilon_at(i, j) *= rot;
    }
  }
  return out;
}

namespace {

enum class Kernel { Psi, Upsilon };

// Breakpoints (in tau') where the shifted pulse Psi0(tau - tau') has features.
std::vector<double> pulse_features(const BoundarySignal& s, double tau, double lo, double hi) {
  std::vector<double> pts;
  const PulseSpec& p = s.spec();
  if (p.shape == PulseShape::GaussianDifference) {
    for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0}) pts.push_back(tau - (p.center_offset + k) * p.tau_p);
  } else if (p.times.size() <= 64) {
    for (double t : p.times) pts.push_back(tau - t);
  }
  std::vector<double> out{lo};
  std::sort(pts.begin(), pts.end());
  for (double x : pts)
    if (x > lo && x < hi) out.push_back(x);
  out.push_back(hi);
  return out;
}

// Breakpoints on [0, hi] in pulse time.
std::vector<double> pulse_time_breaks(const BoundarySignal& s, double hi) {
  auto shifted = pulse_features(s, 0.0, -hi, 0.0);
  std::vector<double> out;
  for (auto it = shifted.rbegin(); it != shifted.rend(); ++it) out.push_back(-*it);
  out.front() = 0.0;
  return out;
}

// Integral over tau' in [0, tau] of Psi0(tau - tau') exp(i w tau') K(tau'), with
//   K = sqrt(zeta / tau') J1(2 a sqrt(zeta tau'))   (Psi)
//   K = J0(2 a sqrt(zeta tau'))                     (Upsilon)
PointValue convolution(Kernel kind, double zeta, double tau, const BoundarySignal& s,
                       const ConvolutionQuadrature& q) {
  const double lo = std::max(0.0, tau - s.support_end());
  const double hi = tau;
  if (!(hi > lo)) return {};
  const double a = coupling_constant(s.nu0(), s.beta());
  const double cb = std::cos(s.beta());
  const double w = s.nu0() * cb * cb;
  const double k = 2.0 * a * std::sqrt(zeta);
  const double sqz = std::sqrt(zeta);

  quad::Options opt;
  opt.rel_tol = q.rel_tol;
  opt.abs_tol = 1e-4 * q.rel_tol * std::abs(s.spec().amplitude) * s.spec().tau_p;
  opt.max_intervals = 20000;

  quad::Result<cplx> r;
  if (q.substitution) {
    // tau' = u^2, dtau' = 2u du
    auto f = [&](double u) -> cplx {
      const double tp = u * u;
      const cplx base = s(tau - tp) * std::polar(1.0, w * tp);
      if (kind == Kernel::Psi) return 2.0 * sqz * base * specfun::bessel_j1(k * u);
      return 2.0 * u * base * specfun::bessel_j0(k * u);
    };
    const double u0 = std::sqrt(lo);
    const double u1 = std::sqrt(hi);
    if (q.scheme == ConvolutionQuadrature::Scheme::AdaptiveGK) {
      auto breaks = pulse_features(s, tau, lo, hi);
      for (double& b : breaks) b = std::sqrt(b);
      breaks.front() = u0;
      breaks.back() = u1;
      r = quad::gauss_kronrod(f, breaks, opt);
    } else {
      // panels no wider than 1/8 of the fastest local oscillation period
      const double rate = std::max({2.0 * std::abs(w) * u1, std::abs(k), 4.0 * u1 / s.spec().tau_p});
      const int panels = std::max(8, static_cast<int>(std::ceil(8.0 * (u1 - u0) * rate / (2.0 * std::numbers::pi))));
      r = quad::romberg(f, u0, u1, opt, panels);
    }
  } else {
    auto f = [&](double tp) -> cplx {
      const cplx base = s(tau - tp) * std::polar(1.0, w * tp);
      if (kind == Kernel::Psi) {
        if (tp < 1e-300) return base * (a * zeta);
        return base * std::sqrt(zeta / tp) * specfun::bessel_j1(k * std::sqrt(tp));
      }
      return base * specfun::bessel_j0(k * std::sqrt(tp));
    };
    if (q.scheme == ConvolutionQuadrature::Scheme::AdaptiveGK) {
      r = quad::gauss_kronrod(f, pulse_features(s, tau, lo, hi), opt);
    } else {
      const double rate = std::max({std::abs(w), std::abs(k) / std::max(std::sqrt(lo), 1e-3), 2.0 / s.spec().tau_p});
      const int panels = std::max(8, static_cast<int>(std::ceil(8.0 * (hi - lo) * rate / (2.0 * std::numbers::pi))));
      r = quad::romberg(f, lo, hi, opt, std::min(panels, 1 << 14));
    }
  }
  if (!r.converged) {
    throw QuadratureError("convolution quadrature did not converge at zeta = " + std::to_string(zeta) +
                              ", tau = " + std::to_string(tau),
                          r.error);
  }
  return {r.value, r.error};
}

}  // namespace

PointValue evaluate_psi(double zeta, double tau, const BoundarySignal& signal,
                        const ConvolutionQuadrature& q) {
  if (zeta < 0 || tau < 0) throw std::domain_error("evaluate_psi: zeta and tau must be >= 0");
  const cplx boundary = signal(tau);
  if (zeta == 0.0) return {boundary, 0.0};
  const double sb = std::sin(signal.beta());
  const cplx phase = std::polar(1.0, signal.nu0() * sb * sb * zeta);
  const double a = coupling_constant(signal.nu0(), signal.beta());
  if (a == 0.0) return {phase * boundary, 0.0};
  const PointValue conv = convolution(Kernel::Psi, zeta, tau, signal, q);
  return {phase * (boundary - a * conv.value), std::abs(a) * conv.error};
}

PointValue evaluate_upsilon(double zeta, double tau, const BoundarySignal& signal,
                            const ConvolutionQuadrature& q) {
  if (zeta < 0 || tau < 0) throw std::domain_error("evaluate_upsilon: zeta and tau must be >= 0");
  const double a = coupling_constant(signal.nu0(), signal.beta());
  if (a == 0.0 || tau == 0.0) return {};
  const double sb = std::sin(signal.beta());
  const cplx phase = std::polar(1.0, signal.nu0() * sb * sb * zeta);
  const PointValue conv = convolution(Kernel::Upsilon, zeta, tau, signal, q);
  return {cplx(0.0, a) * phase * conv.value, std::abs(a) * conv.error};
}

PolaritonField field_on_grid(const Grid& grid, const BoundarySignal& signal,
                             const ConvolutionQuadrature& q) {
  PolaritonField field(grid, Frame::Unprimed, Provenance::Analytic);
  const std::size_t rows = grid.zeta_nodes();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), rows));
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < rows; i += workers) {
      for (std::size_t j = 0; j < grid.tau_nodes(); ++j) {
        field.psi_at(i, j) = evaluate_psi(grid.zeta(i), grid.tau(j), signal, q).value;
        field.upsilon_at(i, j) = evaluate_upsilon(grid.zeta(i), grid.tau(j), signal, q).value;
      }
    }
  };
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 1; w < workers; ++w) jobs.push_back(std::async(std::launch::async, work, w));
  work(0);
  for (auto& j : jobs) j.get();
  return field;
}

double upsilon_norm(const BoundarySignal& signal, double zeta_L, double tau,
                    const ConvolutionQuadrature& q) {
  if (coupling_constant(signal.nu0(), signal.beta()) == 0.0 || tau <= 0.0 || zeta_L <= 0.0) return 0.0;
  ConvolutionQuadrature inner = q;
  inner.rel_tol = 0.1 * q.rel_tol;
  auto f = [&](double z) { return std::norm(evaluate_upsilon(z, tau, signal, inner).value); };
  quad::Options opt;
  opt.rel_tol = q.rel_tol;
  opt.abs_tol = 1e-3 * q.rel_tol * signal.energy();
  auto r = quad::gauss_kronrod(f, 0.0, zeta_L, opt);
  if (!r.converged) throw QuadratureError("upsilon_norm: zeta quadrature did not converge", r.error);
  return r.value;
}

double psi_flux(const BoundarySignal& signal, double zeta, double tau,
                const ConvolutionQuadrature& q) {
  if (tau <= 0.0) return 0.0;
  if (zeta == 0.0 || coupling_constant(signal.nu0(), signal.beta()) == 0.0)
    return signal.energy_between(0.0, tau);
  ConvolutionQuadrature inner = q;
  inner.rel_tol = 0.1 * q.rel_tol;
  auto f = [&](double t) { return std::norm(evaluate_psi(zeta, t, signal, inner).value); };
  // a break every tau_p keeps the adaptive scheme from stepping over the pulse
  std::vector<double> breaks{0.0};
  const double step = signal.spec().tau_p;
  for (double t = step; t < tau; t += step) breaks.push_back(t);
  breaks.push_back(tau);
  quad::Options opt;
  opt.rel_tol = q.rel_tol;
  opt.abs_tol = 1e-3 * q.rel_tol * signal.energy();
  auto r = quad::gauss_kronrod(f, breaks, opt);
  if (!r.converged) throw QuadratureError("psi_flux: tau quadrature did not converge", r.error);
  return r.value;
}

double double_integral_upsilon_norm(const BoundarySignal& signal, double zeta_L, double tau,
                                    double rel_tol) {
  const double a = coupling_constant(signal.nu0(), signal.beta());
  if (a == 0.0 || tau <= 0.0 || zeta_L <= 0.0) return 0.0;
  const double cb = std::cos(signal.beta());
  const double w = signal.nu0() * cb * cb;
  const double sqzl = std::sqrt(zeta_L);

  // a^2 times the zeta integral of J0(2a sqrt(zeta p)) J0(2a sqrt(zeta q)) over [0, zeta_L]
  auto kernel = [&](double p, double q) {
    if (std::abs(p - q) <= 1e-6 * (1.0 + p + q)) {
      const double m = 0.5 * (p + q);
      const auto b = specfun::bessel_j01(2.0 * a * std::sqrt(zeta_L * m));
      return a * a * zeta_L * (b.j0 * b.j0 + b.j1 * b.j1);
    }
    const auto bp = specfun::bessel_j01(2.0 * a * sqzl * std::sqrt(p));
    const auto bq = specfun::bessel_j01(2.0 * a * sqzl * std::sqrt(q));
    return a * sqzl * (std::sqrt(q) * bp.j0 * bq.j1 - std::sqrt(p) * bp.j1 * bq.j0) / (q - p);
  };

  const auto edges = pulse_time_breaks(signal, std::min(tau, signal.support_end()));

  quad::Options inner_opt;
  inner_opt.rel_tol = 0.1 * rel_tol;
  inner_opt.abs_tol = 1e-4 * rel_tol * signal.energy();
  auto outer = [&](double t1) -> cplx {
    const cplx f1 = signal(t1) * std::polar(1.0, -w * t1);
    auto inner = [&](double t2) -> cplx {
      return std::conj(signal(t2) * std::polar(1.0, -w * t2)) * kernel(tau - t1, tau - t2);
    };
    return f1 * quad::gauss_kronrod(inner, edges, inner_opt).value;
  };
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-3 * rel_tol * signal.energy();
  auto r = quad::gauss_kronrod(outer, edges, opt);
  if (!r.converged) throw QuadratureError("double_integral_upsilon_norm did not converge", r.error);
  return r.value.real();
}

AsymptoticTail::AsymptoticTail(const BoundarySignal& signal)
    : a_(coupling_constant(signal.nu0(), signal.beta())), tau_p_(signal.spec().tau_p) {
  const double cb = std::cos(signal.beta());
  const double w = signal.nu0() * cb * cb;
  auto f = [&](double t) { return signal(t) * std::polar(1.0, -w * t); };
  quad::Options opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-15 * std::abs(signal.spec().amplitude) * tau_p_;
  const auto pts = pulse_time_breaks(signal, signal.support_end());
  fourier_factor_ = std::norm(quad::gauss_kronrod(f, pts, opt).value);
}

AsymptoticNorm AsymptoticTail::operator()(double zeta_L, double tau) const {
  if (!(tau > 0)) throw std::domain_error("asymptotic_upsilon_norm: tau must be > 0");
  AsymptoticNorm out;
  const double aa = std::abs(a_);
  out.value = aa / std::numbers::pi * std::sqrt(zeta_L / tau) * fourier_factor_;
  out.large_argument = aa * std::sqrt(zeta_L * tau);
  out.narrow_kernel = aa * std::sqrt(zeta_L / tau) * tau_p_;
  out.large_argument_ok = out.large_argument >= 10.0;
  out.narrow_kernel_ok = out.narrow_kernel <= 0.1;
  return out;
}

AsymptoticNorm asymptotic_upsilon_norm(const BoundarySignal& signal, double zeta_L, double tau) {
  return AsymptoticTail(signal)(zeta_L, tau);
}

double sinc_kernel(double x, double b) {
  const double bx = b * x;
  if (std::abs(bx) < 1e-4) return b / std::numbers::pi * (1.0 - bx * bx / 6.0);
  return std::sin(bx) / (std::numbers::pi * x);
}

double sinc_kernel_upsilon_norm(const BoundarySignal& signal, double zeta_L, double tau,
                                double rel_tol) {
  if (!(tau > 0)) throw std::domain_error("sinc_kernel_upsilon_norm: tau must be > 0");
  const double a = coupling_constant(signal.nu0(), signal.beta());
  const double b = std::abs(a) * std::sqrt(zeta_L / tau);
  if (b == 0.0) return 0.0;
  const double cb = std::cos(signal.beta());
  const double w = signal.nu0() * cb * cb;
  const auto edges = pulse_time_breaks(signal, std::min(tau, signal.support_end()));

  quad::Options inner_opt;
  inner_opt.rel_tol = 0.1 * rel_tol;
  inner_opt.abs_tol = 1e-4 * rel_tol * signal.energy();
  auto outer = [&](double t1) -> cplx {
    const cplx f1 = signal(t1) * std::polar(1.0, -w * t1);
    auto inner = [&](double t2) -> cplx {
      return std::conj(signal(t2) * std::polar(1.0, -w * t2)) * sinc_kernel(t1 - t2, b);
    };
    return f1 * quad::gauss_kronrod(inner, edges, inner_opt).value;
  };
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-3 * rel_tol * signal.energy();
  auto r = quad::gauss_kronrod(outer, edges, opt);
  if (!r.converged) throw QuadratureError("sinc_kernel_upsilon_norm did not converge", r.error);
  return r.value.real();
}

}  // namespace tripod::analytic
