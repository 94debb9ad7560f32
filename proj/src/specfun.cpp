#include "tripod/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tripod::specfun {

namespace detail {

BesselPair series(double x) {
  // J0 = sum (-q)^k / (k!)^2, J1 = (x/2) sum (-q)^k / (k! (k+1)!), q = x^2/4
  const long double q = 0.25L * static_cast<long double>(x) * x;
  long double t0 = 1.0L;
  long double t1 = 1.0L;
  long double s0 = 1.0L;
  long double s1 = 1.0L;
  for (int k = 1; k < 200; ++k) {
    t0 *= -q / (static_cast<long double>(k) * k);
    t1 *= -q / (static_cast<long double>(k) * (k + 1));
    s0 += t0;
    s1 += t1;
    if (std::fabs(t0) < 1e-22L * std::fabs(s0) + 1e-300L &&
        std::fabs(t1) < 1e-22L * std::fabs(s1) + 1e-300L && k > 2) {
      break;
    }
  }
  return {static_cast<double>(s0), static_cast<double>(0.5L * x * s1)};
}

BesselPair miller(double x) {
  const long double ax = std::fabs(static_cast<long double>(x));
  int m = static_cast<int>(ax + 30.0L + 10.0L * std::cbrt(ax));
  if (m % 2) ++m;

  long double next = 0.0L;  // J_{n+1}
  long double cur = 1e-30L;  // J_n
  long double norm = 0.0L;
  long double j1 = 0.0L;
  for (int n = m; n > 0; --n) {
    const long double prev = (2.0L * n / ax) * cur - next;  // J_{n-1}
    next = cur;
    cur = prev;
    if (n - 1 == 1) j1 = cur;
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0L * cur;
    if (std::fabs(cur) > 1e200L) {
      next *= 1e-200L;
      cur *= 1e-200L;
      norm *= 1e-200L;
      j1 *= 1e-200L;
    }
  }
  norm += cur;
  const double r0 = static_cast<double>(cur / norm);
  const double r1 = static_cast<double>(j1 / norm);
  return {r0, x < 0 ? -r1 : r1};
}

namespace {

// P_nu, Q_nu of the Hankel expansion, mu = 4 nu^2.
void hankel_pq(double mu, double x, double& p, double& q) {
  p = 1.0;
  q = 0.0;
  double term = 1.0;
  double last = 1e300;
  const double inv8x = 1.0 / (8.0 * x);
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) * inv8x / k;
    const double mag = std::fabs(term);
    if (mag > last) break;  // optimal truncation
    last = mag;
    // k odd -> Q, signs alternate in pairs: +Q1, -P2, -Q3, +P4, ...
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (mag < 1e-18) break;
  }
}

}  // namespace

BesselPair hankel(double x) {
  const double ax = std::fabs(x);
  double p0, q0, p1, q1;
  hankel_pq(0.0, ax, p0, q0);
  hankel_pq(4.0, ax, p1, q1);
  // cos(x - pi/4) = (cos x + sin x)/sqrt2, sin(x - pi/4) = (sin x - cos x)/sqrt2
  // cos(x - 3pi/4) = (sin x - cos x)/sqrt2, sin(x - 3pi/4) = -(cos x + sin x)/sqrt2
  const double c = std::cos(ax);
  const double s = std::sin(ax);
  const double amp = std::sqrt(1.0 / (std::numbers::pi * ax));  // sqrt(2/(pi x)) / sqrt2
  const double j0 = amp * (p0 * (c + s) - q0 * (s - c));
  const double j1 = amp * (p1 * (s - c) + q1 * (c + s));
  return {j0, x < 0 ? -j1 : j1};
}

}  // namespace detail

BesselPair bessel_j01(double x) {
  if (!std::isfinite(x)) throw std::domain_error("bessel: non-finite argument");
  const double ax = std::fabs(x);
  if (ax <= detail::kSeriesCutoff) {
    // series is even/odd by construction; evaluate on |x| and reflect
    auto r = detail::series(ax);
    return {r.j0, x < 0 ? -r.j1 : r.j1};
  }
  if (ax < detail::kAsymptoticCutoff) return detail::miller(x);
  return detail::hankel(x);
}

double bessel_j0(double x) { return bessel_j01(x).j0; }

double bessel_j1(double x) { return bessel_j01(x).j1; }

}  // namespace tripod::specfun
