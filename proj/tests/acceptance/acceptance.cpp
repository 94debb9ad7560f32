// One PASS/FAIL line per primary acceptance criterion; INFO lines are not gating.
#include "tripod/analysis.hpp"
#include "tripod/analytic.hpp"
#include "tripod/cli/config.hpp"
#include "tripod/cli/experiments.hpp"
#include "tripod/goursat.hpp"
#include "tripod/protocol.hpp"
#include "tripod/specfun.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

using namespace tripod;

namespace {

constexpr double kPi4 = std::numbers::pi / 4;
int failures = 0;

void report(bool pass, const char* name, const std::string& detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const char* name, const std::string& detail) {
  std::printf("INFO  %-28s %s\n", name, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PulseSpec resonant() { return PulseSpec{}; }

PulseSpec detuned() {
  PulseSpec p;
  p.detuned_carrier = true;
  return p;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  return v;
}

void efficiency_maxima() {
  const auto taus = linspace(0.0, 10.0, 201);
  bool ok = true;
  std::string detail;
  for (auto [zl, expected] : {std::pair{1.0, 0.999}, std::pair{0.5, 0.990}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = analysis::efficiency_curve(BoundarySignal(detuned(), 1.0, kPi4), zl, taus);
    const double dt = seconds_since(t0);
    ok = ok && std::abs(c.max() - expected) <= 0.005 && dt < 60.0;
    detail += fmt("zeta_L=%g: max eta=%.5f (want %.3f+-0.005, %.2fs)  ", zl, c.max(), expected, dt);
  }
  report(ok, "efficiency maxima", detail);
  for (double zl : {1.0, 0.5}) {
    const auto c = analysis::efficiency_curve(BoundarySignal(detuned(), 10.0, kPi4), zl, taus);
    info("efficiency maxima nu0=10", fmt("zeta_L=%g: max eta=%.5f at tau=%.2f", zl, c.max(), c.argmax()));
  }
}

void containment() {
  const BoundarySignal s(resonant(), 0.0, kPi4);
  bool ok = true;
  std::string detail;
  for (auto [zl, expected] : {std::pair{1.0, 0.843}, std::pair{0.5, 0.521}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double f = analysis::containment_fraction(s, zl);
    const double dt = seconds_since(t0);
    ok = ok && std::abs(f - expected) <= 0.002 && dt < 1.0;
    detail += fmt("zeta_L=%g: %.5f (want %.3f+-0.002, %.3fs)  ", zl, f, expected, dt);
  }
  report(ok, "containment fractions", detail);
}

void conservation() {
  double worst_analytic = 0.0, worst_goursat = 0.0;
  for (double nu0 : {1.0, 5.0, 10.0})
    for (double zl : {1.0, 0.5, 0.25, 0.1}) {
      const BoundarySignal s(resonant(), nu0, kPi4);
      for (double tau : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0})
        worst_analytic = std::max(worst_analytic, analysis::conservation_residual(s, zl, tau));
      const auto f = pde::solve_goursat(s, DetuningProfile::constant(nu0), kPi4, Grid{1024, 2048, zl, 10.0});
      for (double tau : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0})
        worst_goursat = std::max(worst_goursat, analysis::conservation_residual(f, s, tau));
    }
  report(worst_analytic < 1e-6 && worst_goursat < 1e-4, "conservation law",
         fmt("12 tuples: analytic max %.2e (<1e-6), box scheme 2048x1024 max %.2e (<1e-4)", worst_analytic,
             worst_goursat));
}

void oracle_equivalence() {
  const auto r = cli::run_experiment(cli::preset("convergence"));
  const auto& run = r.summary["runs"][0];
  const double order = run["fitted_order"].get<double>();
  const double plain = run["default_deviation_plain"].get<double>();
  const double rich = run["default_deviation_richardson"].get<double>();
  std::string orders;
  for (const auto& o : run["pairwise_orders"]) orders += fmt("%.3f ", o.get<double>());
  report(std::abs(order - 2.0) <= 0.1 && rich < 1e-4, "oracle equivalence",
         fmt("nu0=5 zeta_L=1: fitted order %.3f (pairwise %s), default grid deviation %.2e of peak "
             "with extrapolation (<1e-4; plain scheme %.2e)",
             order, orders.c_str(), rich, plain));
}

void asymptotic_decay() {
  std::vector<double> taus;
  for (int k = 0; k <= 20; ++k) taus.push_back(100.0 * std::pow(10.0, k / 20.0));
  bool ok = true;
  std::string detail;
  for (double zl : {1.0, 0.5, 0.25, 0.1}) {
    const BoundarySignal s(resonant(), 1.0, kPi4);
    const auto c = analysis::efficiency_curve(s, zl, taus);
    const double slope = analysis::asymptotic_exponent_fit(c, 100.0, 1000.0);
    const analytic::AsymptoticTail tail(s);
    double worst = 0.0;
    for (std::size_t k = 0; k < taus.size(); ++k)
      worst = std::max(worst, std::abs(tail(zl, taus[k]).value / s.energy() - c.eta[k]) / c.eta[k]);
    ok = ok && std::abs(slope + 0.5) <= 0.05 && worst <= 0.1;
    detail += fmt("zeta_L=%g: slope %.4f, closed form %.1f%% (|a|sqrt(zeta_L tau) >= %.2f)  ", zl, slope,
                  100.0 * worst, tail(zl, 100.0).large_argument);
  }
  report(ok, "asymptotic decay", detail);
}

void klein_gordon() {
  analytic::ConvolutionQuadrature q;
  q.rel_tol = 1e-12;
  bool ok = true;
  std::string detail;
  for (double nu0 : {1.0, 5.0, 10.0}) {
    const BoundarySignal s(resonant(), nu0, kPi4);
    const double a = analytic::coupling_constant(nu0, kPi4);
    const double sb = std::sin(kPi4), cb = std::cos(kPi4);
    auto primed = [&](double t, double x) {
      const double z = 0.5 * (t - x), tau = 0.5 * (t + x);
      return std::polar(1.0, -nu0 * (sb * sb * z + cb * cb * tau)) * analytic::evaluate_psi(z, tau, s, q).value;
    };
    const double T = 4.5, X = 3.5;
    auto residual = [&](double h) {
      const cplx c = primed(T, X);
      const cplx dtt = (primed(T + h, X) - 2.0 * c + primed(T - h, X)) / (h * h);
      const cplx dxx = (primed(T, X + h) - 2.0 * c + primed(T, X - h)) / (h * h);
      return std::abs(dtt - dxx + a * a * c);
    };
    const double r1 = residual(0.08), r2 = residual(0.04), r3 = residual(0.02);
    const double p1 = std::log2(r1 / r2), p2 = std::log2(r2 / r3);
    ok = ok && std::abs(p1 - 2.0) <= 0.2 && std::abs(p2 - 2.0) <= 0.2;
    detail += fmt("nu0=%g: orders %.3f %.3f  ", nu0, p1, p2);
  }
  report(ok, "Klein-Gordon residual", detail);
}

void maxwell_bloch() {
  const auto r = cli::run_experiment(cli::preset("maxwell-bloch"));
  const auto& s = r.summary;
  const auto& run = s["runs"][0];
  const double delay_err = s["delay"]["relative_error"].get<double>();
  const double psi_dev = run["psi_max_deviation"].get<double>();
  const double width = s["transparency"]["ratio"].get<double>();
  const double slow = s["derived"]["slow_light_ratio"].get<double>();
  const double in_window = run["regime"]["nu_in_window"].get<double>();
  const double kp = run["regime"]["K_p"].get<double>();
  const bool regime = slow <= 0.1 + 1e-12 && in_window <= 0.1 + 1e-12 && kp >= 50.0 - 1e-9;
  report(regime && delay_err < 0.05 && psi_dev < 0.05 && width >= 0.5 && width <= 2.0, "Maxwell-Bloch validation",
         fmt("delay error %.2f%%, Psi deviation %.2f%%, window width ratio %.3f; regime: Omega/(kappa sqrt n1d)=%.3f, "
             "|nu0|/dw=%.3f, tau_p dw=%.1f",
             100.0 * delay_err, 100.0 * psi_dev, width, slow, in_window, kp));
}

void storage_protocol() {
  protocol::ProtocolSchedule sch;
  const auto rep = protocol::run_protocol(BoundarySignal(detuned(), 1.0, kPi4), 1.0, sch, kPi4, 400, 10.0);
  report(std::abs(rep.efficiency - 0.999) <= 0.005 && rep.unitarity_error <= 1e-12, "storage and retrieval",
         fmt("nu0=1 zeta_L=1: retrieved/input %.5f (want 0.999+-0.005), unitarity error %.1e (<1e-12), "
             "bookkeeping %.1e",
             rep.efficiency, rep.unitarity_error, rep.bookkeeping_residual));
  const auto strong = protocol::run_protocol(BoundarySignal(detuned(), 10.0, kPi4), 1.0, sch, kPi4, 800, 10.0);
  info("storage and retrieval nu0=10",
       fmt("zeta_L=1: retrieved/input %.5f at t_s=%.3f, unitarity error %.1e", strong.efficiency, strong.t_s,
           strong.unitarity_error));
}

void special_functions() {
  using big = boost::multiprecision::cpp_bin_float_50;
  double worst = 0.0;
  bool parity = true;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -20.0 + 0.01 * i;
    const big X = x, q = X * X / 4;
    big t0 = 1, t1 = 1, s0 = 1, s1 = 1;
    for (int k = 1; k < 400; ++k) {
      t0 *= -q / (big(k) * k);
      t1 *= -q / (big(k) * (k + 1));
      s0 += t0;
      s1 += t1;
      if (abs(t0) < big("1e-45") && abs(t1) < big("1e-45")) break;
    }
    const double e0 = s0.convert_to<double>(), e1 = (s1 * X / 2).convert_to<double>();
    worst = std::max(worst, std::abs(specfun::bessel_j0(x) - e0) / std::abs(e0));
    if (x != 0.0) worst = std::max(worst, std::abs(specfun::bessel_j1(x) - e1) / std::abs(e1));
    parity = parity && specfun::bessel_j0(-x) == specfun::bessel_j0(x) && specfun::bessel_j1(-x) == -specfun::bessel_j1(x);
  }
  report(worst <= 1e-12 && parity, "special functions",
         fmt("max relative deviation from 50-digit series on |x|<=20: %.2e (<=1e-12); parity %s", worst,
             parity ? "exact" : "broken"));
}

}  // namespace

int main() {
  efficiency_maxima();
  containment();
  conservation();
  oracle_equivalence();
  asymptotic_decay();
  klein_gordon();
  maxwell_bloch();
  storage_protocol();
  special_functions();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures ? 1 : 0;
}
