#include "doctest.h"
#include "tripod/analysis.hpp"
#include "tripod/goursat.hpp"

#include <cmath>
#include <numbers>

using namespace tripod;
using namespace tripod::analysis;

namespace {

constexpr double kPi4 = std::numbers::pi / 4;

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

std::vector<double> logspace(double a, double b, std::size_t n) {
  auto v = linspace(std::log(a), std::log(b), n);
  for (auto& x : v) x = std::exp(x);
  return v;
}

}  // namespace

TEST_CASE("Upsilon norm of a sampled field") {
  const Grid g{10, 20, 1.0, 10.0};
  PolaritonField f(g, Frame::Unprimed, Provenance::GoursatPDE);
  CHECK(upsilon_norm(f, 5.0) == 0.0);
  for (std::size_t i = 0; i < g.zeta_nodes(); ++i)
    for (std::size_t j = 0; j < g.tau_nodes(); ++j) f.upsilon_at(i, j) = std::sqrt(g.tau(j));
  CHECK(upsilon_norm(f, 0.0) == 0.0);
  CHECK(upsilon_norm(f, 5.0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(upsilon_norm(f, 5.25) == doctest::Approx(5.25).epsilon(1e-14));
  CHECK_THROWS_AS(upsilon_norm(f, 10.5), std::out_of_range);
  CHECK_THROWS_AS(upsilon_norm(f, -0.1), std::out_of_range);
}

TEST_CASE("efficiency curve basics") {
  const BoundarySignal s(detuned(), 5.0, kPi4);
  const auto c = efficiency_curve(s, 1.0, linspace(0.0, 10.0, 41));
  CHECK(c.eta.front() == 0.0);
  CHECK(c.normalization == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-8));
  for (double e : c.eta) {
    CHECK(e >= 0.0);
    CHECK(e <= 1.0 + 1e-6);
  }

  SUBCASE("invariant under amplitude rescaling") {
    PulseSpec p = detuned();
    p.amplitude = 3.5;
    const auto c2 = efficiency_curve(BoundarySignal(p, 5.0, kPi4), 1.0, c.tau);
    for (std::size_t k = 0; k < c.eta.size(); ++k) CHECK(c2.eta[k] == doctest::Approx(c.eta[k]).epsilon(1e-7));
  }
}

TEST_CASE("dimensionless scaling tau_p -> l tau_p, nu0 -> nu0 / l, zeta_L -> l zeta_L") {
  analytic::ConvolutionQuadrature q;
  q.rel_tol = 1e-12;
  const auto taus = linspace(0.5, 9.5, 10);
  const auto base = efficiency_curve(BoundarySignal(detuned(), 5.0, kPi4), 0.5, taus, q);
  PulseSpec p = detuned();
  p.tau_p = 2.0;
  std::vector<double> scaled_taus;
  for (double t : taus) scaled_taus.push_back(2.0 * t);
  const auto scaled = efficiency_curve(BoundarySignal(p, 2.5, kPi4), 1.0, scaled_taus, q);
  for (std::size_t k = 0; k < taus.size(); ++k) CHECK(std::abs(scaled.eta[k] - base.eta[k]) < 1e-10);
}

TEST_CASE("maxima of the detuned-carrier curves") {
  // independent oracle: adaptive quadrature of the closed forms
  struct Case {
    double nu0, zl, expected;
  };
  for (const auto& c : {Case{1.0, 1.0, 0.4201}, Case{1.0, 0.5, 0.2504}, Case{10.0, 1.0, 0.99926},
                        Case{10.0, 0.5, 0.99058}}) {
    const auto curve = efficiency_curve(BoundarySignal(detuned(), c.nu0, kPi4), c.zl, linspace(0.0, 10.0, 401));
    CHECK(curve.max() == doctest::Approx(c.expected).epsilon(2e-4));
  }
}

TEST_CASE("resonant carrier stays below the detuned carrier") {
  for (double zl : {1.0, 0.5}) {
    const auto taus = linspace(0.0, 10.0, 201);
    const auto res = efficiency_curve(BoundarySignal(PulseSpec{}, 1.0, kPi4), zl, taus);
    const auto det = efficiency_curve(BoundarySignal(detuned(), 1.0, kPi4), zl, taus);
    CHECK(res.max() < det.max());
  }
}

TEST_CASE("max efficiency does not grow as the medium gets shorter") {
  for (double nu0 : {1.0, 5.0, 10.0}) {
    double prev = 2.0;
    for (double zl : {1.0, 0.5, 0.25, 0.1}) {
      const auto c = efficiency_curve(BoundarySignal(detuned(), nu0, kPi4), zl, linspace(0.0, 10.0, 201));
      CHECK(c.max() <= prev + 1e-9);
      prev = c.max();
    }
  }
}

TEST_CASE("closed-form and box-scheme efficiencies agree") {
  const BoundarySignal s(PulseSpec{}, 5.0, kPi4);
  const Grid g{512, 1024, 1.0, 10.0};
  pde::GoursatScheme rich;
  rich.richardson = true;
  const auto f = pde::solve_goursat(s, DetuningProfile::constant(5.0), kPi4, g, rich);
  const auto from_field = efficiency_curve(f, s);
  CHECK(from_field.provenance == Provenance::GoursatPDE);
  std::vector<double> taus;
  for (std::size_t j = 0; j < g.tau_nodes(); j += 64) taus.push_back(g.tau(j));
  const auto exact = efficiency_curve(s, 1.0, taus);
  // the zeta trapezoid on the sampled field converges as dzeta^1.5 near the entrance
  for (std::size_t k = 0; k < taus.size(); ++k) CHECK(std::abs(from_field.eta[64 * k] - exact.eta[k]) < 1e-4);
}

TEST_CASE("conservation law") {
  SUBCASE("no detuning") {
    const BoundarySignal s(PulseSpec{}, 0.0, kPi4);
    const auto f = analytic::field_on_grid(Grid{4, 100, 1.0, 20.0}, s);
    CHECK(conservation_residual(f, s, 20.0) == 0.0);
    CHECK(conservation_residual(s, 1.0, 20.0) == 0.0);
  }
  SUBCASE("closed forms") {
    for (double nu0 : {1.0, 5.0, 10.0})
      for (double tau : {3.0, 10.0}) CHECK(conservation_residual(BoundarySignal(PulseSpec{}, nu0, kPi4), 0.5, tau) < 1e-6);
  }
  SUBCASE("box scheme at the default grid") {
    const BoundarySignal s(PulseSpec{}, 10.0, kPi4);
    const auto f = pde::solve_goursat(s, DetuningProfile::constant(10.0), kPi4, Grid{1024, 2048, 1.0, 10.0});
    for (double tau : {3.0, 6.0, 10.0}) CHECK(conservation_residual(f, s, tau) < 1e-4);
  }
}

TEST_CASE("containment fraction") {
  const BoundarySignal s(PulseSpec{}, 0.0, kPi4);
  // |Psi0|^2 is a Gaussian of standard deviation tau_p / 2: a centred window of width w holds erf(w / sqrt(2))
  CHECK(containment_fraction(s, 1.0) == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-6));
  CHECK(containment_fraction(s, 0.5) == doctest::Approx(std::erf(0.5 / std::sqrt(2.0))).epsilon(1e-6));
  CHECK(containment_fraction(s, 50.0) == doctest::Approx(1.0).epsilon(1e-9));
  double prev = 0.0;
  for (double w = 0.05; w < 6.0; w *= 1.3) {
    const double v = containment_fraction(s, w);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(containment_fraction(s, 0.0), std::invalid_argument);
}

TEST_CASE("log-log slope fit") {
  EfficiencyCurve c;
  c.tau = logspace(10.0, 1000.0, 50);
  for (double t : c.tau) c.eta.push_back(0.37 / std::sqrt(t));
  CHECK(asymptotic_exponent_fit(c, 100.0, 1000.0) == doctest::Approx(-0.5).epsilon(1e-12));
  for (auto& e : c.eta) e = 0.2;
  CHECK(std::abs(asymptotic_exponent_fit(c, 100.0, 1000.0)) < 1e-12);
  c.eta[45] = 0.0;
  CHECK_THROWS_AS(asymptotic_exponent_fit(c, 100.0, 1000.0), std::domain_error);

  SUBCASE("long-time decay of the resonant curve") {
    const auto slow = efficiency_curve(BoundarySignal(PulseSpec{}, 1.0, kPi4), 1.0, logspace(100.0, 1000.0, 21));
    CHECK(asymptotic_exponent_fit(slow, 100.0, 1000.0) == doctest::Approx(-0.5).epsilon(0.1));
  }
}

TEST_CASE("delta-kernel limit of the efficiency") {
  const BoundarySignal s(detuned(), 1.0, kPi4);
  CHECK(extremal_efficiency_estimate(s, 0.0) == 0.0);
  CHECK(extremal_efficiency_estimate(s, 100.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(extremal_efficiency_estimate(s, 3.0) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("regime report") {
  SUBCASE("no detuning") {
    RegimeInputs in;
    in.tau = 3.0;
    const auto r = regime_report(in);
    CHECK(r.cond1_value == 0.0);
    CHECK(r.cond2_value == 0.0);
    CHECK_FALSE(r.cond1_ok);
    CHECK_FALSE(r.cond3_value.has_value());
  }
  SUBCASE("nu0 = 10, zeta_L = 1 at tau = 3 tau_p") {
    RegimeInputs in;
    in.nu0 = 10.0;
    in.beta = kPi4;
    in.zeta_L = 1.0;
    in.tau = 3.0;
    const auto r = regime_report(in);
    CHECK(r.cond1_value == doctest::Approx(10.0 * 0.5 * std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r.cond1_value == doctest::Approx(8.66).epsilon(1e-3));
    CHECK_FALSE(r.cond1_ok);
  }
  SUBCASE("large optical depth and long pulses") {
    RegimeInputs in;
    in.nu0 = 0.1;
    in.beta = kPi4;
    in.tau_p = 50.0;
    in.optical_density = 400.0;
    in.delta_omega_eit = 1.0;
    const auto r = regime_report(in);
    CHECK(*r.K_p == doctest::Approx(50.0));
    CHECK(*r.cond4_lhs == doctest::Approx(1000.0));
    CHECK(*r.cond4_rhs == doctest::Approx(100.0));
    CHECK(r.cond4_ok);
    CHECK(*r.nu_in_window == doctest::Approx(0.1));
    CHECK(r.nu_in_window_ok);
    CHECK(*r.cond3_value == doctest::Approx(0.1 * std::sqrt(20.0 * 50.0)));
  }
  SUBCASE("from medium parameters") {
    MediumParams m;
    m.omega = 1.0;
    m.gamma = 1.0;
    m.optical_density = 100.0;
    m.beta = kPi4;
    PulseSpec p;
    p.tau_p = 20.0;
    const auto in = regime_inputs(m, p, 0.01, 60.0);
    CHECK(*in.delta_omega_eit == doctest::Approx(0.1));
    CHECK(in.zeta_L == doctest::Approx(derive_params(m).zeta_L));
    const auto r = regime_report(in);
    CHECK(*r.K_p == doctest::Approx(2.0));
    CHECK_FALSE(r.K_p_ok);
  }
}
