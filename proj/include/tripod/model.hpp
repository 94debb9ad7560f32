#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tripod {

using cplx = std::complex<double>;

/// Physical parameters of the tripod medium and its control fields.
/// Only the Maxwell–Bloch solver needs these; the reduced-model solvers
/// work with (nu0, beta, zeta_L) in units of the pulse duration.
struct MediumParams {
  double omega = 1.0;            ///< total control Rabi frequency
  double beta = 0.0;             ///< control partition angle, Omega1 = Omega cos(beta)
  double gamma = 1.0;            ///< radiative decay rate of the excited state
  double optical_density = 1.0;  ///< resonant intensity optical density s
  double length = 1.0;           ///< sample length L
  double c = 1.0;                ///< signal phase-front speed
  double n1d = 1.0;              ///< linear atomic density N / L

  void validate() const;
};

struct DerivedParams {
  double kappa = 0.0;            ///< single-atom coupling sqrt(gamma s c / (2N))
  double collective = 0.0;       ///< kappa sqrt(n1d)
  double theta = 0.0;            ///< mixing angle, tan(theta) = kappa sqrt(n1d) / Omega
  double v_g = 0.0;              ///< group velocity c cos^2(theta)
  double zeta_L = 0.0;           ///< L / v_g
  double delta_omega_eit = 0.0;  ///< Omega^2 / (gamma sqrt(s))
  double nu_tilde_factor = 1.0;  ///< sin^2(theta) sin^2(beta) + cos^2(beta)
  double beta_tilde = 0.0;       ///< atan(sin(theta) tan(beta))
  double slow_light_ratio = 0.0; ///< Omega / (kappa sqrt(n1d))
  bool slow_light = false;       ///< slow_light_ratio < 0.1
};

DerivedParams derive_params(const MediumParams& m);

enum class PulseShape { GaussianDifference, Tabulated };

/// Boundary signal envelope Psi0(tau) at the medium entrance.
///
/// GaussianDifference:
///   A { exp[-(tau - c tau_p)^2 / tau_p^2] - exp[-(tau + c tau_p)^2 / tau_p^2] },
/// zero for tau <= 0; the subtracted mirror Gaussian makes Psi0(0) = 0.
/// Tabulated: linear interpolation of (times, values), zero outside.
struct PulseSpec {
  PulseShape shape = PulseShape::GaussianDifference;
  double amplitude = 1.0;
  double tau_p = 1.0;
  double center_offset = 3.0;
  bool detuned_carrier = false;  ///< multiply by exp(i nu0 cos^2(beta) tau)
  std::vector<double> times;     ///< Tabulated only, strictly increasing, >= 0
  std::vector<cplx> values;      ///< Tabulated only

  void validate() const;
};

/// Relative envelope level below which pulse tails are dropped from
/// integrals over [0, inf).
inline constexpr double kTailThreshold = 1e-8;

cplx pulse_value(const PulseSpec& p, double nu0, double beta, double tau);

/// Integral of |Psi0|^2 over [0, inf), truncated where the envelope drops
/// below kTailThreshold of its peak. Throws for non-normalizable tables.
double pulse_energy(const PulseSpec& p);

/// End of the support of the pulse under the tail threshold.
double pulse_support_end(const PulseSpec& p);

/// Pulse bound to the detuning and control angle it is evaluated with.
class BoundarySignal {
 public:
  BoundarySignal(PulseSpec spec, double nu0, double beta);

  cplx operator()(double tau) const { return pulse_value(spec_, nu0_, beta_, tau); }
  const PulseSpec& spec() const { return spec_; }
  double nu0() const { return nu0_; }
  double beta() const { return beta_; }
  double support_end() const { return support_end_; }
  double energy() const { return energy_; }
  /// Integral of |Psi0|^2 over [t0, t1] (clipped to the support).
  double energy_between(double t0, double t1) const;

 private:
  PulseSpec spec_;
  double nu0_;
  double beta_;
  double support_end_;
  double energy_;
};

/// Two-photon detuning nu(t) as a function of lab time.
class DetuningProfile {
 public:
  enum class Kind { Constant, PiecewiseConstant, Tabulated };

  static DetuningProfile constant(double nu0);
  /// nu = initial for t < first switch; each (t_k, nu_k) applies on [t_k, t_{k+1}).
  static DetuningProfile piecewise(double initial, std::vector<std::pair<double, double>> switches);
  /// Linear interpolation, clamped at both ends.
  static DetuningProfile tabulated(std::vector<double> t, std::vector<double> nu);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  double initial() const { return initial_; }
  const std::vector<std::pair<double, double>>& switches() const { return points_; }

 private:
  Kind kind_ = Kind::Constant;
  double initial_ = 0.0;
  std::vector<std::pair<double, double>> points_;
};

/// Uniform grid on [0, zeta_max] x [0, tau_max]; counts are intervals.
/// A zero count collapses that axis to a single node at its max extent.
struct Grid {
  std::size_t n_zeta = 1;
  std::size_t n_tau = 1;
  double zeta_max = 1.0;
  double tau_max = 1.0;

  void validate() const;
  double dzeta() const { return n_zeta ? zeta_max / static_cast<double>(n_zeta) : 0.0; }
  double dtau() const { return n_tau ? tau_max / static_cast<double>(n_tau) : 0.0; }
  double zeta(std::size_t i) const {
    return n_zeta ? zeta_max * static_cast<double>(i) / static_cast<double>(n_zeta) : zeta_max;
  }
  double tau(std::size_t j) const {
    return n_tau ? tau_max * static_cast<double>(j) / static_cast<double>(n_tau) : tau_max;
  }
  std::size_t zeta_nodes() const { return n_zeta + 1; }
  std::size_t tau_nodes() const { return n_tau + 1; }
};

enum class Frame { Unprimed, Primed };
enum class Provenance { Analytic, GoursatPDE, MaxwellBloch };

const char* to_string(Provenance p);

/// Psi and Upsilon sampled on a grid, stored zeta-major.
struct PolaritonField {
  Grid grid;
  std::vector<cplx> psi;
  std::vector<cplx> upsilon;
  Frame frame = Frame::Unprimed;
  Provenance provenance = Provenance::Analytic;

  PolaritonField() = default;
  PolaritonField(const Grid& g, Frame f, Provenance p);

  std::size_t index(std::size_t i_zeta, std::size_t j_tau) const {
    return i_zeta * grid.tau_nodes() + j_tau;
  }
  cplx& psi_at(std::size_t i, std::size_t j) { return psi[index(i, j)]; }
  cplx psi_at(std::size_t i, std::size_t j) const { return psi[index(i, j)]; }
  cplx& upsilon_at(std::size_t i, std::size_t j) { return upsilon[index(i, j)]; }
  cplx upsilon_at(std::size_t i, std::size_t j) const { return upsilon[index(i, j)]; }
};

}  // namespace tripod
