#include "doctest.h"
#include "tripod/analytic.hpp"
#include "tripod/specfun.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace tripod;
using namespace tripod::analytic;

namespace {

constexpr double kPi4 = std::numbers::pi / 4;

PulseSpec fig2_pulse() { return PulseSpec{}; }

PulseSpec fig3_pulse() {
  PulseSpec p;
  p.detuned_carrier = true;
  return p;
}

ConvolutionQuadrature tight() {
  ConvolutionQuadrature q;
  q.rel_tol = 1e-12;
  return q;
}

// Primed fields: multiply by exp(-i chi).
struct Primed {
  BoundarySignal s;
  ConvolutionQuadrature q;
  cplx rot(double z, double t) const {
    const double sb = std::sin(s.beta()), cb = std::cos(s.beta());
    return std::polar(1.0, -s.nu0() * (sb * sb * z + cb * cb * t));
  }
  cplx psi(double z, double t) const { return rot(z, t) * evaluate_psi(z, t, s, q).value; }
  cplx ups(double z, double t) const { return rot(z, t) * evaluate_upsilon(z, t, s, q).value; }
};

}  // namespace

TEST_CASE("coupling constant vanishes exactly on the decoupled lines") {
  CHECK(coupling_constant(0.0, 0.3) == 0.0);
  CHECK(coupling_constant(2.0, 0.0) == 0.0);
  CHECK(coupling_constant(2.0, std::numbers::pi / 2) == 0.0);
  CHECK(coupling_constant(2.0, -std::numbers::pi / 2) == 0.0);
  CHECK(coupling_constant(1.0, kPi4) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(coupling_constant(-1.0, kPi4) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("phase transformation") {
  Grid g{1, 1, 1.0, 2.0};
  PolaritonField f(g, Frame::Unprimed, Provenance::Analytic);
  for (auto& v : f.psi) v = 1.0;
  for (auto& v : f.upsilon) v = 1.0;

  SUBCASE("nu0 = 0 is the identity") {
    const auto p = phase_transform(f, 0.0, kPi4, PhaseDirection::ToPrimed);
    CHECK(p.frame == Frame::Primed);
    for (std::size_t k = 0; k < f.psi.size(); ++k) CHECK(p.psi[k] == f.psi[k]);
  }
  SUBCASE("chi = cos^2(beta) tau at zeta = 0") {
    const auto p = phase_transform(f, 1.0, kPi4, PhaseDirection::ToPrimed);
    CHECK(std::arg(p.psi_at(0, 1)) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::arg(p.upsilon_at(0, 1)) == doctest::Approx(-1.0).epsilon(1e-15));
  }
  SUBCASE("round trip on a random field") {
    Grid big{7, 9, 1.3, 4.0};
    PolaritonField r(big, Frame::Unprimed, Provenance::Analytic);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    for (auto& v : r.psi) v = {n(rng), n(rng)};
    for (auto& v : r.upsilon) v = {n(rng), n(rng)};
    const auto back = phase_transform(phase_transform(r, 3.7, 0.4, PhaseDirection::ToPrimed), 3.7, 0.4,
                                      PhaseDirection::FromPrimed);
    CHECK(back.frame == Frame::Unprimed);
    for (std::size_t k = 0; k < r.psi.size(); ++k) {
      CHECK(std::abs(back.psi[k] - r.psi[k]) <= 1e-15 * (1 + std::abs(r.psi[k])) * 4);
      CHECK(std::abs(back.upsilon[k] - r.upsilon[k]) <= 1e-15 * (1 + std::abs(r.upsilon[k])) * 4);
    }
  }
  SUBCASE("frame mismatch") {
    CHECK_THROWS_AS(phase_transform(f, 1.0, kPi4, PhaseDirection::FromPrimed), std::invalid_argument);
  }
}

TEST_CASE("boundary data are reproduced exactly") {
  const BoundarySignal s(fig3_pulse(), 5.0, kPi4);
  for (double tau : {0.0, 0.3, 2.9, 3.0, 6.5, 12.0}) {
    CHECK(evaluate_psi(0.0, tau, s).value == s(tau));
  }
  for (double zeta : {0.0, 0.1, 1.0, 3.0}) CHECK(evaluate_upsilon(zeta, 0.0, s).value == cplx(0.0));
}

TEST_CASE("no coupling without detuning") {
  const BoundarySignal s(fig2_pulse(), 0.0, kPi4);
  for (double zeta : {0.0, 0.5, 1.0})
    for (double tau : {0.5, 3.0, 5.0}) {
      CHECK(evaluate_psi(zeta, tau, s).value == s(tau));
      CHECK(evaluate_upsilon(zeta, tau, s).value == cplx(0.0));
    }
}

TEST_CASE("quadrature schemes agree") {
  const BoundarySignal s(fig2_pulse(), 5.0, kPi4);
  ConvolutionQuadrature gk;
  ConvolutionQuadrature trap;
  trap.scheme = ConvolutionQuadrature::Scheme::RegularizedTrapezoid;
  ConvolutionQuadrature raw;
  raw.substitution = false;
  for (double zeta : {0.25, 1.0})
    for (double tau : {1.0, 3.0, 7.5}) {
      const cplx a = evaluate_psi(zeta, tau, s, gk).value;
      CHECK(std::abs(evaluate_psi(zeta, tau, s, trap).value - a) < 1e-7);
      CHECK(std::abs(evaluate_psi(zeta, tau, s, raw).value - a) < 1e-7);
      const cplx u = evaluate_upsilon(zeta, tau, s, gk).value;
      CHECK(std::abs(evaluate_upsilon(zeta, tau, s, trap).value - u) < 1e-7);
      CHECK(std::abs(evaluate_upsilon(zeta, tau, s, raw).value - u) < 1e-7);
    }
}

TEST_CASE("tightening the tolerance moves results by less than the error estimate") {
  const BoundarySignal s(fig3_pulse(), 5.0, kPi4);
  ConvolutionQuadrature q;
  q.rel_tol = 1e-6;
  ConvolutionQuadrature q2 = q;
  q2.rel_tol = 0.5e-6;
  for (double tau : {2.0, 4.0, 8.0}) {
    const auto a = evaluate_upsilon(1.0, tau, s, q);
    const auto b = evaluate_upsilon(1.0, tau, s, q2);
    CHECK(std::abs(a.value - b.value) <= std::max(a.error, 1e-15));
    const auto c = evaluate_psi(1.0, tau, s, q);
    const auto d = evaluate_psi(1.0, tau, s, q2);
    CHECK(std::abs(c.value - d.value) <= std::max(c.error, 1e-15));
  }
}

TEST_CASE("Klein-Gordon residual vanishes at second order") {
  // (d^2/dT^2 - d^2/dX^2) Psi' + a^2 Psi' = 0 with zeta = (T - X) / 2, tau = (T + X) / 2
  const Primed f{BoundarySignal(fig2_pulse(), 5.0, kPi4), tight()};
  const double a = coupling_constant(5.0, kPi4);
  const double T = 4.5, X = 3.5;
  auto at = [&](double t, double x) { return f.psi(0.5 * (t - x), 0.5 * (t + x)); };
  auto residual = [&](double h) {
    const cplx c = at(T, X);
    const cplx dtt = (at(T + h, X) - 2.0 * c + at(T - h, X)) / (h * h);
    const cplx dxx = (at(T, X + h) - 2.0 * c + at(T, X - h)) / (h * h);
    return std::abs(dtt - dxx + a * a * c);
  };
  const double r1 = residual(0.08), r2 = residual(0.04), r3 = residual(0.02);
  CHECK(r1 > r2);
  CHECK(r2 > r3);
  CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(r2 / r3) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(r3 < 1e-3 * a * a);
}

TEST_CASE("cross derivatives of the primed fields") {
  const Primed f{BoundarySignal(fig3_pulse(), 5.0, kPi4), tight()};
  const cplx ia(0.0, coupling_constant(5.0, kPi4));
  const double z = 0.6, t = 3.2;
  auto err_zeta = [&](double h) {
    const cplx d = (f.psi(z + h, t) - f.psi(z - h, t)) / (2 * h);
    return std::abs(d - ia * f.ups(z, t));
  };
  auto err_tau = [&](double h) {
    const cplx d = (f.ups(z, t + h) - f.ups(z, t - h)) / (2 * h);
    return std::abs(d - ia * f.psi(z, t));
  };
  CHECK(std::log2(err_zeta(0.04) / err_zeta(0.02)) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(err_tau(0.04) / err_tau(0.02)) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(err_zeta(0.02) < 1e-3);
  CHECK(err_tau(0.02) < 1e-3);
}

TEST_CASE("sign symmetry under nu0 -> -nu0 with the carrier conjugated") {
  for (bool detuned : {false, true}) {
    PulseSpec p;
    p.detuned_carrier = detuned;
    const BoundarySignal plus(p, 5.0, kPi4), minus(p, -5.0, kPi4);
    for (double tau : {1.5, 3.0, 6.0}) {
      CHECK(std::abs(minus(tau) - std::conj(plus(tau))) < 1e-15);
      CHECK(std::abs(evaluate_upsilon(0.7, tau, minus).value) ==
            doctest::Approx(std::abs(evaluate_upsilon(0.7, tau, plus).value)).epsilon(1e-9));
      CHECK(std::abs(evaluate_psi(0.7, tau, minus).value) ==
            doctest::Approx(std::abs(evaluate_psi(0.7, tau, plus).value)).epsilon(1e-9));
      CHECK(upsilon_norm(minus, 1.0, tau) == doctest::Approx(upsilon_norm(plus, 1.0, tau)).epsilon(1e-8));
    }
  }
}

TEST_CASE("field_on_grid") {
  const BoundarySignal s(fig3_pulse(), 5.0, kPi4);
  SUBCASE("single node at the entrance") {
    const Grid g{0, 0, 0.0, 3.0};
    const auto f = field_on_grid(g, s);
    REQUIRE(f.psi.size() == 1);
    CHECK(f.psi[0] == s(3.0));
    CHECK(f.upsilon[0] == evaluate_upsilon(0.0, 3.0, s).value);
    CHECK(f.provenance == Provenance::Analytic);
  }
  SUBCASE("matches point evaluation") {
    const Grid g{4, 6, 1.0, 6.0};
    const auto f = field_on_grid(g, s);
    for (std::size_t i = 0; i < g.zeta_nodes(); ++i)
      for (std::size_t j = 0; j < g.tau_nodes(); ++j) {
        CHECK(f.psi_at(i, j) == evaluate_psi(g.zeta(i), g.tau(j), s).value);
        CHECK(f.upsilon_at(i, j) == evaluate_upsilon(g.zeta(i), g.tau(j), s).value);
      }
    for (std::size_t i = 0; i < g.zeta_nodes(); ++i) CHECK(f.upsilon_at(i, 0) == cplx(0.0));
  }
  SUBCASE("no detuning") {
    const BoundarySignal z(fig2_pulse(), 0.0, kPi4);
    const Grid g{3, 5, 1.0, 6.0};
    const auto f = field_on_grid(g, z);
    for (std::size_t i = 0; i < g.zeta_nodes(); ++i)
      for (std::size_t j = 0; j < g.tau_nodes(); ++j) {
        CHECK(f.psi_at(i, j) == z(g.tau(j)));
        CHECK(f.upsilon_at(i, j) == cplx(0.0));
      }
  }
}

TEST_CASE("double integral with the zeta integral in closed form") {
  for (double nu0 : {1.0, 5.0})
    for (double zl : {1.0, 0.5}) {
      const BoundarySignal s(fig3_pulse(), nu0, kPi4);
      for (double tau : {2.0, 5.0, 9.0}) {
        const double direct = upsilon_norm(s, zl, tau);
        CHECK(double_integral_upsilon_norm(s, zl, tau) == doctest::Approx(direct).epsilon(1e-6));
      }
    }
}

TEST_CASE("long-time asymptote") {
  const BoundarySignal fig2a(fig2_pulse(), 1.0, kPi4);
  SUBCASE("one over sqrt(tau)") {
    const AsymptoticTail tail(fig2a);
    CHECK(tail(1.0, 400.0).value == doctest::Approx(0.5 * tail(1.0, 100.0).value).epsilon(1e-14));
  }
  SUBCASE("no detuning") { CHECK(asymptotic_upsilon_norm(BoundarySignal(fig2_pulse(), 0.0, kPi4), 1.0, 50.0).value == 0.0); }
  SUBCASE("tau = 0 is rejected") { CHECK_THROWS_AS(asymptotic_upsilon_norm(fig2a, 1.0, 0.0), std::domain_error); }
  SUBCASE("validity indicators") {
    const auto r = asymptotic_upsilon_norm(fig2a, 1.0, 400.0);
    CHECK(r.large_argument == doctest::Approx(0.5 * 20.0));
    CHECK(r.narrow_kernel == doctest::Approx(0.5 / 20.0));
    CHECK(r.large_argument_ok);
    CHECK(r.narrow_kernel_ok);
  }
  SUBCASE("detuned carrier maximises the Fourier factor") {
    const AsymptoticTail det(BoundarySignal(fig3_pulse(), 1.0, kPi4));
    const AsymptoticTail res(fig2a);
    PulseSpec p;
    const BoundarySignal mod(p, 0.0, kPi4);
    const AsymptoticTail bound(mod);  // |int |Psi0||^2 for a real, positive pulse
    CHECK(det.fourier_factor() == doctest::Approx(bound.fourier_factor()).epsilon(1e-10));
    CHECK(res.fourier_factor() < det.fourier_factor());
  }
  SUBCASE("agrees with the exact norm at tau = 100") {
    const double exact = double_integral_upsilon_norm(fig2a, 1.0, 100.0);
    CHECK(asymptotic_upsilon_norm(fig2a, 1.0, 100.0).value == doctest::Approx(exact).epsilon(0.1));
  }
}

TEST_CASE("sinc-kernel approximation") {
  SUBCASE("finite limit on the diagonal") {
    CHECK(sinc_kernel(0.0, 0.7) == doctest::Approx(0.7 / std::numbers::pi).epsilon(1e-15));
    CHECK(sinc_kernel(1e-9, 0.7) == doctest::Approx(0.7 / std::numbers::pi).epsilon(1e-12));
    CHECK(sinc_kernel(2.0, 0.7) == doctest::Approx(std::sin(1.4) / (2.0 * std::numbers::pi)).epsilon(1e-15));
  }
  SUBCASE("bounded by the pulse energy") {
    PulseSpec narrow;
    narrow.tau_p = 0.05;
    const BoundarySignal s(narrow, 10.0, kPi4);
    const double v = sinc_kernel_upsilon_norm(s, 1.0, 50.0);
    CHECK(v > 0.0);
    CHECK(v <= s.energy() * (1 + 1e-9));
  }
  SUBCASE("nu0 = 1, zeta_L = 1 is outside the large-argument regime") {
    const double cond = std::abs(coupling_constant(1.0, kPi4)) * std::sqrt(1.0 * 6.0);
    CHECK(cond < 10.0);
  }
  SUBCASE("within 5% of the exact norm when the large-argument condition holds") {
    const BoundarySignal s(fig3_pulse(), 10.0, kPi4);
    const double cond = std::abs(coupling_constant(10.0, kPi4)) * std::sqrt(1.0 * 6.0);
    REQUIRE(cond > 10.0);
    const double exact = double_integral_upsilon_norm(s, 1.0, 6.0);
    CHECK(sinc_kernel_upsilon_norm(s, 1.0, 6.0) == doctest::Approx(exact).epsilon(0.05));
  }
}
