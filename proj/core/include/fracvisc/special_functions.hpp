#ifndef FRACVISC_SPECIAL_FUNCTIONS_HPP
#define FRACVISC_SPECIAL_FUNCTIONS_HPP

namespace fracvisc
{

/// Controls how the one-parameter Mittag-Leffler function is evaluated on the
/// negative real axis.
///
/// Three regimes are used:
///  - the Taylor series while |z| <= crossover_argument and the series does not
///    suffer from cancellation (largest term below 1e2);
///  - the algebraic asymptotic expansion for |z| > crossover_argument when its
///    smallest term is below 1e-14;
///  - otherwise a bounded integral representation on [0, alpha*pi] evaluated
///    by tanh-sinh quadrature.
struct MLEvalPolicy
{
   int series_max_terms = 250;
   double series_abs_tol = 1e-16;
   double crossover_argument = 8.0;
   int asymptotic_terms = 60;
   /// Relative tolerance requested from the quadrature in the integral regime.
   double quadrature_rel_tol = 1e-14;

   /// Throws ValidationError if a field is out of range.
   void validate() const;
};

/// Gamma function by the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula for x < 1/2. Throws DomainError at 0, -1, -2, ...
double gamma_fn(double x);

/// log|Gamma(x)| for x > 0. Thread-safe replacement for std::lgamma.
double log_gamma_fn(double x);

/// 1/Gamma(x) for any finite x (zero at the poles of Gamma).
double rgamma_fn(double x);

/// E_alpha(z) for alpha in (0, 1] and z <= 0.
double ml(double alpha, double z, const MLEvalPolicy &policy = {});

/// dE_alpha/dz for alpha in (0, 1] and z <= 0. Strictly positive.
double ml_deriv(double alpha, double z, const MLEvalPolicy &policy = {});

} // namespace fracvisc

#endif // FRACVISC_SPECIAL_FUNCTIONS_HPP
