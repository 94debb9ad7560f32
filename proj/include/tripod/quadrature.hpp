#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <type_traits>
#include <vector>

namespace tripod::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  bool converged = true;
  int evaluations = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, magnitude(kron - gauss)};
}

}  // namespace detail

/// Globally adaptive 7/15 Gauss–Kronrod integration. Works for real and
/// complex integrands. Converged when the summed error estimate is below
/// max(abs_tol, rel_tol * |value|).
template <class F>
auto gauss_kronrod(F&& f, double a, double b, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  Result<T> out;
  if (a == b) return out;
  std::priority_queue<detail::Segment<T>> heap;
  auto first = detail::gk15<T>(f, a, b);
  out.evaluations = 15;
  T total = first.value;
  double err = first.error;
  heap.push(first);
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total)); };
  while (err > target()) {
    if (static_cast<int>(heap.size()) >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      out.converged = false;
      heap.push(worst);
      break;
    }
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // resum to shed accumulated round-off from the running updates
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = esum;
  return out;
}

/// Integrates f over consecutive breakpoints, summing results.
template <class F>
auto gauss_kronrod(F&& f, const std::vector<double>& breaks, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(breaks.front()))>> {
  using T = std::decay_t<decltype(f(breaks.front()))>;
  Result<T> out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto r = gauss_kronrod(f, breaks[i], breaks[i + 1], opt);
    out.value += r.value;
    out.error += r.error;
    out.converged = out.converged && r.converged;
    out.evaluations += r.evaluations;
  }
  return out;
}

/// Trapezoid rule with Romberg extrapolation, doubling the panel count
/// until successive extrapolants agree to the tolerance.
template <class F>
auto romberg(F&& f, double a, double b, const Options& opt = {}, int min_panels = 8,
             int max_levels = 18) -> Result<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  Result<T> out;
  if (a == b) return out;
  std::vector<T> prev, cur;
  int n = min_panels;
  double h = (b - a) / n;
  T sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  out.evaluations = n + 1;
  prev.push_back(sum * h);
  for (int level = 1; level < max_levels; ++level) {
    T mids{};
    for (int i = 0; i < n; ++i) mids += f(a + (i + 0.5) * h);
    out.evaluations += n;
    sum += mids;
    n *= 2;
    h *= 0.5;
    cur.assign(1, sum * h);
    double factor = 4.0;
    for (std::size_t k = 1; k <= prev.size(); ++k) {
      cur.push_back(cur[k - 1] + (cur[k - 1] - prev[k - 1]) / (factor - 1.0));
      factor *= 4.0;
    }
    const double diff = detail::magnitude(cur.back() - prev.back());
    out.value = cur.back();
    out.error = diff;
    if (level >= 2 && diff <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(cur.back()))) {
      return out;
    }
    prev.swap(cur);
  }
  out.converged = false;
  return out;
}

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Trapezoid rule over samples with uniform spacing h.
template <class T>
T trapezoid(const std::vector<T>& y, double h) {
  if (y.size() < 2) return T{};
  T s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

/// Golden-section maximization of a unimodal function on [a, b].
template <class F>
double golden_max(F&& f, double a, double b, double xtol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace tripod::quad
