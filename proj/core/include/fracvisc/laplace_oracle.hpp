#ifndef FRACVISC_LAPLACE_ORACLE_HPP
#define FRACVISC_LAPLACE_ORACLE_HPP

#include "fracvisc/modal_system.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace fracvisc
{

/// Q(s) = rho s^2 I + diag(lambda) - sum_i B_i gamma_i / ((tau_i s)^alpha_i + 1),
/// principal branch for the fractional power.
Eigen::MatrixXcd transfer_matrix(const ModalSystem &sys, std::complex<double> s);

struct TransformOptions
{
   /// Skip the Re(s) > max_i 1/tau_i check (contour evaluation).
   bool on_contour = false;
};

/// D_hat(s) = Q(s)^{-1} (F_hat(s) + rho s d0 + rho v0).
///
/// Throws ValidationError if the load has no closed-form transform,
/// DomainError if s is outside the guaranteed region and not on_contour,
/// NumericalError if Q(s) is numerically singular.
Eigen::VectorXcd solve_transform(const ModalSystem &sys, std::complex<double> s,
                                 TransformOptions opts = {});

struct TalbotContour
{
   int talbot_M = 32;
};

/// Fixed-Talbot inversion of a scalar transform at t > 0.
double talbot_invert(const std::function<std::complex<double>(std::complex<double>)> &F, double t,
                     TalbotContour contour = {});

/// Upper bound on |Im| of the poles of D_hat: max(sqrt(max lambda / rho),
/// sinusoidal load frequencies).
double oscillation_bound(const ModalSystem &sys);

/// Modal displacement d(t) by fixed-Talbot inversion of solve_transform.
///
/// The contour radius is r = 2M/(5t). Accuracy degrades as t -> 0 and for
/// large t, where poles near the imaginary axis escape the contour. Throws
/// NumericalError when oscillation_bound(sys) / r > 1 (pole not safely
/// enclosed) or the quadrature is not finite.
Eigen::VectorXd invert(const ModalSystem &sys, double t, TalbotContour contour = {});

} // namespace fracvisc

#endif // FRACVISC_LAPLACE_ORACLE_HPP
