#pragma once

#include "tripod/model.hpp"

#include <stdexcept>

namespace tripod::analytic {

/// How the convolution integrals over tau' are evaluated.
struct ConvolutionQuadrature {
  enum class Scheme { RegularizedTrapezoid, AdaptiveGK };
  Scheme scheme = Scheme::AdaptiveGK;
  double rel_tol = 1e-8;
  /// Integrate in u = sqrt(tau') so the kernel is smooth at tau' = 0.
  bool substitution = true;
};

/// Thrown when a quadrature fails to reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// a = nu0 sin(beta) cos(beta), the Klein–Gordon mass-like coupling.
/// Exactly zero when nu0 = 0 or beta sits on a multiple of pi/2.
double coupling_constant(double nu0, double beta);

enum class PhaseDirection { ToPrimed, FromPrimed };

/// Multiplies both fields by exp(-+i chi), chi = nu0 (sin^2(beta) zeta + cos^2(beta) tau).
PolaritonField phase_transform(const PolaritonField& field, double nu0, double beta,
                               PhaseDirection direction);

struct PointValue {
  cplx value;
  double error = 0.0;  ///< quadrature error estimate (absolute)
};

/// Closed-form Psi(zeta, tau) for constant detuning.
PointValue evaluate_psi(double zeta, double tau, const BoundarySignal& signal,
                        const ConvolutionQuadrature& q = {});
/// Closed-form Upsilon(zeta, tau) for constant detuning.
PointValue evaluate_upsilon(double zeta, double tau, const BoundarySignal& signal,
                            const ConvolutionQuadrature& q = {});

inline PointValue evaluate_psi(double zeta, double tau, const PulseSpec& pulse, double nu0,
                               double beta, const ConvolutionQuadrature& q = {}) {
  return evaluate_psi(zeta, tau, BoundarySignal(pulse, nu0, beta), q);
}
inline PointValue evaluate_upsilon(double zeta, double tau, const PulseSpec& pulse, double nu0,
                                   double beta, const ConvolutionQuadrature& q = {}) {
  return evaluate_upsilon(zeta, tau, BoundarySignal(pulse, nu0, beta), q);
}

/// Evaluates both closed forms on every grid node (rows in parallel).
PolaritonField field_on_grid(const Grid& grid, const BoundarySignal& signal,
                             const ConvolutionQuadrature& q = {});

/// Integral over [0, zeta_L] of |Upsilon(zeta, tau)|^2 from the closed form,
/// by adaptive quadrature in zeta.
double upsilon_norm(const BoundarySignal& signal, double zeta_L, double tau,
                    const ConvolutionQuadrature& q = {});

/// Integral over [0, tau] of |Psi(zeta, tau')|^2 from the closed form.
double psi_flux(const BoundarySignal& signal, double zeta, double tau,
                const ConvolutionQuadrature& q = {});

/// The same norm as a double integral over (tau1, tau2) with the zeta
/// integral done in closed form (Lommel's integral of two J0).
double double_integral_upsilon_norm(const BoundarySignal& signal, double zeta_L, double tau,
                                    double rel_tol = 1e-8);

/// Long-time value with its validity indicators attached.
struct AsymptoticNorm {
  double value = 0.0;
  double large_argument = 0.0;  ///< |a| sqrt(zeta_L tau), should be >> 1
  double narrow_kernel = 0.0;   ///< |a| sqrt(zeta_L / tau) tau_p, should be << 1
  bool large_argument_ok = false;
  bool narrow_kernel_ok = false;
};

/// 1/sqrt(tau) tail of the Upsilon norm:
///   (|a| / pi) sqrt(zeta_L / tau) |int Psi0(t) exp(-i nu0 cos^2(beta) t) dt|^2.
/// The Fourier factor is computed once at construction.
class AsymptoticTail {
 public:
  explicit AsymptoticTail(const BoundarySignal& signal);
  AsymptoticNorm operator()(double zeta_L, double tau) const;
  double fourier_factor() const { return fourier_factor_; }

 private:
  double a_;
  double tau_p_;
  double fourier_factor_;
};

AsymptoticNorm asymptotic_upsilon_norm(const BoundarySignal& signal, double zeta_L, double tau);

/// Kernel sin(b x) / (pi x), b = |a| sqrt(zeta_L / tau); finite limit b / pi at x = 0.
double sinc_kernel(double x, double b);

/// Large-argument approximation of the Upsilon norm: the double integral of
/// Psi0(t1) Psi0*(t2) exp(-i nu0 cos^2(beta) (t1 - t2)) sinc_kernel(t1 - t2).
double sinc_kernel_upsilon_norm(const BoundarySignal& signal, double zeta_L, double tau,
                                double rel_tol = 1e-8);

}  // namespace tripod::analytic
