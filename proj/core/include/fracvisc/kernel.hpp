#ifndef FRACVISC_KERNEL_HPP
#define FRACVISC_KERNEL_HPP

#include "fracvisc/special_functions.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracvisc
{

/// One fractional relaxation kernel of Mittag-Leffler type:
///
///   beta(t) = -gamma d/dt E_alpha(-(t/tau)^alpha),
///   xi(t)   = gamma - int_0^t beta = gamma E_alpha(-(t/tau)^alpha).
///
/// alpha = 1 is the exponential (standard linear solid) limit.
class KernelParams
{
public:
   /// Throws ValidationError unless 0 < gamma < 1, tau > 0 and 0 < alpha <= 1.
   KernelParams(double gamma, double tau, double alpha);

   /// Same as the constructor but admits gamma in (0, 1e-6] and gamma == 0;
   /// used for the memoryless limit and for linearity checks.
   static KernelParams unchecked_strength(double gamma, double tau, double alpha);

   double gamma() const { return gamma_; }
   double tau() const { return tau_; }
   double alpha() const { return alpha_; }

   bool smooth() const { return alpha_ == 1.0; }

   bool operator==(const KernelParams &) const = default;

private:
   KernelParams() = default;
   double gamma_ = 0.0;
   double tau_ = 1.0;
   double alpha_ = 1.0;
};

double beta_eval(const KernelParams &k, double t, const MLEvalPolicy &p = {});
double xi_eval(const KernelParams &k, double t, const MLEvalPolicy &p = {});

/// int_{t0}^{t1} beta = xi(t0) - xi(t1). Throws ValidationError if t1 < t0.
double beta_integral(const KernelParams &k, double t0, double t1,
                     const MLEvalPolicy &p = {});

/// gamma / ((tau s)^alpha + 1). Throws DomainError for s <= 1/tau.
double beta_laplace(const KernelParams &k, double s);

/// Principal-branch continuation of the transform to complex s off the
/// negative real axis. No region check: callers on a contour own validity.
std::complex<double> beta_laplace(const KernelParams &k, std::complex<double> s);

/// j-th derivative of beta at t = 0 for the smooth (alpha = 1) kernel.
double beta_derivative_at_zero(const KernelParams &k, int j);

enum class ConvolutionKind
{
   product_integration, ///< exact kernel moments, interval-midpoint value of u
   product_linear,      ///< exact kernel moments, piecewise-linear u
   cq_bdf1,
   cq_bdf2
};

std::string_view to_string(ConvolutionKind kind);
/// Throws ValidationError on unknown names.
ConvolutionKind convolution_kind_from_string(std::string_view name);

/// Discrete convolution rule on a uniform grid t_j = j dt.
///
/// `weights` holds the per-lag table: for the product rules weights[l] is the
/// kernel mass on the lag interval [l dt, (l+1) dt]; for CQ rules it is the
/// CQ weight multiplying u(t_{n-l}).
///
/// Every rule is applied the same way through `sample_weights` and
/// `start_correction`:
///
///   (beta * u)(t_n) ~ sum_{l=0}^{n} sample_weights[l] u_{n-l} - start_correction[n] u_0.
class ConvolutionRule
{
public:
   ConvolutionKind kind = ConvolutionKind::product_integration;
   double dt = 0.0;
   std::size_t n_steps = 0;
   std::vector<double> weights;
   std::vector<double> sample_weights;
   std::vector<double> start_correction;

   /// Weight multiplying the newest sample u_n.
   double newest_weight() const { return sample_weights.front(); }

   /// Scalar convolution at step n from samples u_0..u_n.
   double apply(std::span<const double> u, std::size_t n) const;

   /// Writes `lag_index,weight` rows.
   void write_csv(std::ostream &os) const;
};

/// Product integration with exact moments from xi; n + 1 lag intervals.
ConvolutionRule product_weights(const KernelParams &k, double dt, std::size_t n,
                                ConvolutionKind kind = ConvolutionKind::product_integration,
                                const MLEvalPolicy &p = {});

/// Lubich convolution quadrature weights w_0..w_n of beta_hat(delta(zeta)/dt)
/// for BDF1 (order 1) or BDF2 (order 2).
ConvolutionRule cq_weights(const KernelParams &k, double dt, std::size_t n, int order);

/// Dispatches on kind.
ConvolutionRule make_rule(const KernelParams &k, double dt, std::size_t n,
                          ConvolutionKind kind, const MLEvalPolicy &p = {});

// ---------------------------------------------------------------------------
// Diagnostics

struct UniformGrid
{
   double t0 = 0.0;
   double dt = 0.0;
   std::size_t n_points = 0;
   double at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

struct PositiveTypeReport
{
   double min_quadratic_form = 0.0;
   double min_normalized_form = 0.0; ///< min over trials of Q(phi) / ||phi||^2
   double tolerance = 0.0;
   std::size_t trials = 0;
   bool passed = false;
};

/// Discrete form sum_n sum_{m<=n} xi(t_n - t_m) phi_n phi_m dt^2.
double positive_type_form(const KernelParams &k, const UniformGrid &grid,
                          std::span<const double> phi, const MLEvalPolicy &p = {});

/// Evaluates the form for `trials` random grid functions (uniform in [-1, 1]).
/// Passes if every form is >= -1e-10 ||phi||^2.
PositiveTypeReport positive_type_check(const KernelParams &k, const UniformGrid &grid,
                                       std::size_t trials, std::uint64_t rng_seed,
                                       const MLEvalPolicy &p = {});

struct MonotonicityReport
{
   int order = 0;
   double worst_signed_difference = 0.0; ///< min over points of (-1)^j Delta^j xi
   double tolerance = 0.0;
   bool passed = false;
};

/// Checks (-1)^j Delta^j xi >= -tol at interior points, with Delta^j the j-th
/// central difference (undivided) on the grid spacing.
MonotonicityReport monotonicity_check(const KernelParams &k, int order_j,
                                      const UniformGrid &grid, double tol = 1e-8,
                                      const MLEvalPolicy &p = {});

struct BetaConditionReport
{
   double sum_integrals = 0.0;
   double max_integral = 0.0;
   bool sum_condition = false;
   bool max_condition = false;
   bool satisfied = false;
};

struct QuadratureCheck
{
   double quadrature = 0.0;
   double closed_form = 0.0;
   double abs_gap = 0.0;
   double rel_gap = 0.0;
};

/// int_0^T beta by tanh-sinh on the singular head and Gauss-Kronrod on
/// geometric panels, against gamma (1 - E_alpha(-(T/tau)^alpha)).
QuadratureCheck beta_l1_check(const KernelParams &k, double T, const MLEvalPolicy &p = {});

/// int_0^inf exp(-s t) beta(t) dt by quadrature against the closed-form
/// transform. Requires s > 1/tau.
QuadratureCheck beta_laplace_check(const KernelParams &k, double s, const MLEvalPolicy &p = {});

/// Regularity hypothesis: sum_i int_0^T beta_i < 1 or int_0^T max_i beta_i < 1/2.
BetaConditionReport beta_condition(std::span<const KernelParams> kernels, double T,
                                   const MLEvalPolicy &p = {});

} // namespace fracvisc

#endif // FRACVISC_KERNEL_HPP
