#include "fracvisc/kernel.hpp"

#include "fracvisc/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace fracvisc
{

namespace
{

void check_params(double gamma, double tau, double alpha, bool strict_gamma)
{
   std::ostringstream os;
   if (strict_gamma ? !(gamma > 0.0 && gamma < 1.0) : !(gamma >= 0.0 && gamma < 1.0))
   {
      os << "KernelParams: gamma must lie in (0, 1), got " << gamma;
   }
   else if (!(tau > 0.0) || !std::isfinite(tau))
   {
      os << "KernelParams: tau must be positive, got " << tau;
   }
   else if (!(alpha > 0.0 && alpha <= 1.0))
   {
      os << "KernelParams: alpha must lie in (0, 1], got " << alpha;
   }
   else
   {
      return;
   }
   throw ValidationError(os.str());
}

std::size_t next_pow2(std::size_t n)
{
   std::size_t p = 1;
   while (p < n) { p <<= 1; }
   return p;
}

// int_a^b xi(s) ds for the piecewise-linear product rule.
double xi_interval_integral(const KernelParams &k, double a, double b, std::size_t lag,
                            const MLEvalPolicy &p)
{
   using namespace boost::math::quadrature;
   auto xi = [&](double s) { return xi_eval(k, s, p); };
   if (k.smooth() || lag >= 32)
   {
      return gauss<double, 7>::integrate(xi, a, b);
   }
   if (lag == 0)
   {
      // xi(s) - gamma ~ s^alpha at the origin
      tanh_sinh<double> ts;
      return ts.integrate(xi, a, b, 1e-13);
   }
   return gauss_kronrod<double, 15>::integrate(xi, a, b, 10, 1e-13);
}

} // namespace

KernelParams::KernelParams(double gamma, double tau, double alpha)
   : gamma_(gamma), tau_(tau), alpha_(alpha)
{
   check_params(gamma, tau, alpha, true);
}

KernelParams KernelParams::unchecked_strength(double gamma, double tau, double alpha)
{
   check_params(gamma, tau, alpha, false);
   KernelParams k;
   k.gamma_ = gamma;
   k.tau_ = tau;
   k.alpha_ = alpha;
   return k;
}

double beta_eval(const KernelParams &k, double t, const MLEvalPolicy &p)
{
   if (k.smooth())
   {
      if (!(t >= 0.0)) { throw DomainError("beta_eval: t must be >= 0"); }
      return k.gamma() / k.tau() * std::exp(-t / k.tau());
   }
   if (!(t > 0.0))
   {
      throw DomainError("beta_eval: kernel is singular at t = 0; t must be > 0");
   }
   if (std::isinf(t)) { return 0.0; }
   const double r = t / k.tau();
   const double x = std::pow(r, k.alpha());
   return k.gamma() * k.alpha() / k.tau() * std::pow(r, k.alpha() - 1.0) *
          ml_deriv(k.alpha(), -x, p);
}

double xi_eval(const KernelParams &k, double t, const MLEvalPolicy &p)
{
   if (!(t >= 0.0)) { throw DomainError("xi_eval: t must be >= 0"); }
   if (std::isinf(t)) { return 0.0; }
   const double x = std::pow(t / k.tau(), k.alpha());
   return k.gamma() * ml(k.alpha(), -x, p);
}

double beta_integral(const KernelParams &k, double t0, double t1, const MLEvalPolicy &p)
{
   if (!(t0 >= 0.0)) { throw DomainError("beta_integral: t0 must be >= 0"); }
   if (!(t1 >= t0))
   {
      throw ValidationError("beta_integral: interval end precedes its start");
   }
   if (t0 == t1) { return 0.0; }
   return xi_eval(k, t0, p) - xi_eval(k, t1, p);
}

double beta_laplace(const KernelParams &k, double s)
{
   if (!(s > 1.0 / k.tau()))
   {
      std::ostringstream os;
      os << "beta_laplace: s = " << s << " outside Re(s) > 1/tau = " << 1.0 / k.tau();
      throw DomainError(os.str());
   }
   return k.gamma() / (std::pow(k.tau() * s, k.alpha()) + 1.0);
}

std::complex<double> beta_laplace(const KernelParams &k, std::complex<double> s)
{
   const std::complex<double> ts = k.tau() * s;
   const std::complex<double> powed = k.smooth() ? ts : std::pow(ts, k.alpha());
   return k.gamma() / (powed + 1.0);
}

double beta_derivative_at_zero(const KernelParams &k, int j)
{
   if (!k.smooth())
   {
      throw SingularKernelError(
         "beta_derivative_at_zero: derivatives at t = 0 exist only for alpha = 1");
   }
   if (j < 0) { throw ValidationError("beta_derivative_at_zero: negative order"); }
   return k.gamma() / k.tau() * std::pow(-1.0 / k.tau(), j);
}

std::string_view to_string(ConvolutionKind kind)
{
   switch (kind)
   {
      case ConvolutionKind::product_integration: return "product_integration";
      case ConvolutionKind::product_linear: return "product_linear";
      case ConvolutionKind::cq_bdf1: return "cq_bdf1";
      case ConvolutionKind::cq_bdf2: return "cq_bdf2";
   }
   return "unknown";
}

ConvolutionKind convolution_kind_from_string(std::string_view name)
{
   for (auto kind : {ConvolutionKind::product_integration, ConvolutionKind::product_linear,
                     ConvolutionKind::cq_bdf1, ConvolutionKind::cq_bdf2})
   {
      if (name == to_string(kind)) { return kind; }
   }
   throw ValidationError("unknown convolution kind '" + std::string(name) + "'");
}

double ConvolutionRule::apply(std::span<const double> u, std::size_t n) const
{
   if (n >= sample_weights.size() || u.size() <= n)
   {
      throw ValidationError("ConvolutionRule::apply: step outside the weight table");
   }
   double acc = 0.0;
   for (std::size_t l = 0; l <= n; ++l)
   {
      acc += sample_weights[l] * u[n - l];
   }
   return acc - start_correction[n] * u[0];
}

void ConvolutionRule::write_csv(std::ostream &os) const
{
   const auto old_prec = os.precision(17);
   os << "lag_index,weight\n";
   for (std::size_t l = 0; l < weights.size(); ++l)
   {
      os << l << ',' << weights[l] << '\n';
   }
   os.precision(old_prec);
}

ConvolutionRule product_weights(const KernelParams &k, double dt, std::size_t n,
                                ConvolutionKind kind, const MLEvalPolicy &p)
{
   if (!(dt > 0.0) || n == 0)
   {
      throw ValidationError("product_weights: need dt > 0 and n >= 1");
   }
   if (kind != ConvolutionKind::product_integration && kind != ConvolutionKind::product_linear)
   {
      throw ValidationError("product_weights: not a product-integration kind");
   }
   ConvolutionRule rule;
   rule.kind = kind;
   rule.dt = dt;
   rule.n_steps = n;

   std::vector<double> xi(n + 2);
   for (std::size_t l = 0; l < xi.size(); ++l)
   {
      xi[l] = xi_eval(k, static_cast<double>(l) * dt, p);
   }
   rule.weights.resize(n + 1);
   for (std::size_t l = 0; l <= n; ++l)
   {
      rule.weights[l] = xi[l] - xi[l + 1];
   }

   // newer/older endpoint weights of each lag interval
   std::vector<double> newer(n + 1), older(n + 1);
   if (kind == ConvolutionKind::product_integration)
   {
      for (std::size_t l = 0; l <= n; ++l)
      {
         newer[l] = older[l] = 0.5 * rule.weights[l];
      }
   }
   else
   {
      for (std::size_t l = 0; l <= n; ++l)
      {
         const double a = static_cast<double>(l) * dt;
         const double mean = xi_interval_integral(k, a, a + dt, l, p) / dt;
         newer[l] = xi[l] - mean;
         older[l] = mean - xi[l + 1];
      }
   }

   rule.sample_weights.resize(n + 1);
   rule.start_correction.resize(n + 1);
   rule.sample_weights[0] = newer[0];
   for (std::size_t l = 1; l <= n; ++l)
   {
      rule.sample_weights[l] = newer[l] + older[l - 1];
   }
   for (std::size_t l = 0; l <= n; ++l)
   {
      rule.start_correction[l] = newer[l];
   }
   return rule;
}

ConvolutionRule cq_weights(const KernelParams &k, double dt, std::size_t n, int order)
{
   if (!(dt > 0.0) || n == 0)
   {
      throw ValidationError("cq_weights: need dt > 0 and n >= 1");
   }
   if (order != 1 && order != 2)
   {
      throw ValidationError("cq_weights: order must be 1 or 2");
   }
   using cplx = std::complex<double>;
   const std::size_t count = n + 1;
   const std::size_t L = next_pow2(2 * count);
   const double radius = std::pow(1e-15, 1.0 / static_cast<double>(L));

   std::vector<cplx> symbol(L);
   for (std::size_t l = 0; l < L; ++l)
   {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(L);
      const cplx zeta = std::polar(radius, angle);
      const cplx one_minus = 1.0 - zeta;
      const cplx delta = order == 1 ? one_minus : one_minus + 0.5 * one_minus * one_minus;
      symbol[l] = beta_laplace(k, delta / dt);
   }
   Eigen::FFT<double> fft;
   std::vector<cplx> coeff;
   fft.fwd(coeff, symbol);

   ConvolutionRule rule;
   rule.kind = order == 1 ? ConvolutionKind::cq_bdf1 : ConvolutionKind::cq_bdf2;
   rule.dt = dt;
   rule.n_steps = n;
   rule.weights.resize(count);
   double scale = 1.0 / static_cast<double>(L);
   for (std::size_t j = 0; j < count; ++j)
   {
      rule.weights[j] = coeff[j].real() * scale;
      scale /= radius;
   }
   rule.sample_weights = rule.weights;
   rule.start_correction.assign(count, 0.0);
   return rule;
}

ConvolutionRule make_rule(const KernelParams &k, double dt, std::size_t n, ConvolutionKind kind,
                          const MLEvalPolicy &p)
{
   switch (kind)
   {
      case ConvolutionKind::cq_bdf1: return cq_weights(k, dt, n, 1);
      case ConvolutionKind::cq_bdf2: return cq_weights(k, dt, n, 2);
      default: return product_weights(k, dt, n, kind, p);
   }
}

double positive_type_form(const KernelParams &k, const UniformGrid &grid,
                          std::span<const double> phi, const MLEvalPolicy &p)
{
   if (phi.size() != grid.n_points)
   {
      throw ValidationError("positive_type_form: phi does not match the grid");
   }
   std::vector<double> xi(grid.n_points);
   for (std::size_t l = 0; l < grid.n_points; ++l)
   {
      xi[l] = xi_eval(k, static_cast<double>(l) * grid.dt, p);
   }
   double form = 0.0;
   for (std::size_t n = 0; n < grid.n_points; ++n)
   {
      double inner = 0.0;
      for (std::size_t m = 0; m <= n; ++m)
      {
         inner += xi[n - m] * phi[m];
      }
      form += phi[n] * inner;
   }
   return form * grid.dt * grid.dt;
}

PositiveTypeReport positive_type_check(const KernelParams &k, const UniformGrid &grid,
                                       std::size_t trials, std::uint64_t rng_seed,
                                       const MLEvalPolicy &p)
{
   if (grid.n_points < 4 || !(grid.dt > 0.0))
   {
      throw ValidationError("positive_type_check: grid needs >= 4 points and dt > 0");
   }
   constexpr double rel_tol = 1e-10;
   std::mt19937_64 rng(rng_seed);
   std::uniform_real_distribution<double> dist(-1.0, 1.0);

   PositiveTypeReport report;
   report.trials = trials;
   report.min_quadratic_form = std::numeric_limits<double>::infinity();
   report.min_normalized_form = std::numeric_limits<double>::infinity();
   report.passed = true;
   std::vector<double> phi(grid.n_points);
   for (std::size_t trial = 0; trial < trials; ++trial)
   {
      double norm2 = 0.0;
      for (auto &v : phi)
      {
         v = dist(rng);
         norm2 += v * v;
      }
      const double form = positive_type_form(k, grid, phi, p);
      report.min_quadratic_form = std::min(report.min_quadratic_form, form);
      if (norm2 > 0.0)
      {
         report.min_normalized_form = std::min(report.min_normalized_form, form / norm2);
      }
      if (form < -rel_tol * norm2) { report.passed = false; }
   }
   if (trials == 0)
   {
      report.min_quadratic_form = 0.0;
      report.min_normalized_form = 0.0;
   }
   report.tolerance = rel_tol;
   return report;
}

MonotonicityReport monotonicity_check(const KernelParams &k, int order_j, const UniformGrid &grid,
                                      double tol, const MLEvalPolicy &p)
{
   if (order_j < 1 || order_j > 4)
   {
      throw ValidationError("monotonicity_check: order must be 1..4");
   }
   static constexpr int binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
   const double h = grid.dt;
   const double half_span = 0.5 * order_j * h;
   const double sign = (order_j % 2 == 0) ? 1.0 : -1.0;

   MonotonicityReport report;
   report.order = order_j;
   report.tolerance = tol;
   report.worst_signed_difference = std::numeric_limits<double>::infinity();
   std::size_t checked = 0;
   for (std::size_t i = 0; i < grid.n_points; ++i)
   {
      const double t = grid.at(i);
      if (t - half_span < 0.0) { continue; }
      double diff = 0.0;
      for (int m = 0; m <= order_j; ++m)
      {
         const double c = (m % 2 == 0 ? 1.0 : -1.0) * binom[order_j][m];
         diff += c * xi_eval(k, t + half_span - m * h, p);
      }
      report.worst_signed_difference = std::min(report.worst_signed_difference, sign * diff);
      ++checked;
   }
   if (checked == 0)
   {
      throw ValidationError("monotonicity_check: no grid point admits the stencil");
   }
   report.passed = report.worst_signed_difference >= -tol;
   return report;
}

namespace
{

// int_0^T f for f ~ t^(alpha - 1) at the origin and smooth elsewhere.
template <class F>
double singular_head_integral(F &&f, double T, double head)
{
   using namespace boost::math::quadrature;
   head = std::min(head, T);
   tanh_sinh<double> ts;
   double total = ts.integrate(f, 0.0, head, 1e-13);
   double a = head;
   while (a < T)
   {
      const double b = std::min(T, a * 4.0);
      total += gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13);
      a = b;
   }
   return total;
}

QuadratureCheck finish_check(double quad, double exact)
{
   QuadratureCheck c;
   c.quadrature = quad;
   c.closed_form = exact;
   c.abs_gap = std::abs(quad - exact);
   c.rel_gap = exact != 0.0 ? c.abs_gap / std::abs(exact) : c.abs_gap;
   return c;
}

} // namespace

QuadratureCheck beta_l1_check(const KernelParams &k, double T, const MLEvalPolicy &p)
{
   if (!(T > 0.0)) { throw ValidationError("beta_l1_check: T must be positive"); }
   // integrate in r = t / tau so the panel layout does not depend on tau
   auto beta = [&](double r) { return k.tau() * beta_eval(k, k.tau() * r, p); };
   const double quad = singular_head_integral(beta, T / k.tau(), 1e-2);
   const double exact = k.gamma() * (1.0 - ml(k.alpha(), -std::pow(T / k.tau(), k.alpha()), p));
   return finish_check(quad, exact);
}

QuadratureCheck beta_laplace_check(const KernelParams &k, double s, const MLEvalPolicy &p)
{
   const double exact = beta_laplace(k, s);
   const double tau = k.tau();
   auto integrand = [&](double r) { return tau * std::exp(-s * tau * r) * beta_eval(k, tau * r, p); };
   // exp(-s t) < 1e-20 beyond t = 46/s
   const double quad = singular_head_integral(integrand, 46.0 / (s * tau), 1e-2);
   return finish_check(quad, exact);
}

BetaConditionReport beta_condition(std::span<const KernelParams> kernels, double T,
                                   const MLEvalPolicy &p)
{
   if (!(T > 0.0)) { throw ValidationError("beta_condition: T must be positive"); }
   if (kernels.empty()) { throw ValidationError("beta_condition: no kernels"); }
   BetaConditionReport report;
   for (const auto &k : kernels)
   {
      report.sum_integrals += beta_integral(k, 0.0, T, p);
   }
   if (kernels.size() == 1)
   {
      report.max_integral = report.sum_integrals;
   }
   else
   {
      using namespace boost::math::quadrature;
      auto pointwise_max = [&](double t) {
         double m = 0.0;
         for (const auto &k : kernels) { m = std::max(m, beta_eval(k, t, p)); }
         return m;
      };
      double tau_min = kernels.front().tau();
      for (const auto &k : kernels) { tau_min = std::min(tau_min, k.tau()); }
      // singular head by tanh-sinh, smooth remainder on log-spaced panels
      const double head = std::min(T, 1e-3 * tau_min);
      tanh_sinh<double> ts;
      double total = ts.integrate(pointwise_max, 0.0, head, 1e-12);
      double a = head;
      while (a < T)
      {
         const double b = std::min(T, a * 4.0);
         total += gauss_kronrod<double, 31>::integrate(pointwise_max, a, b, 12, 1e-12);
         a = b;
      }
      report.max_integral = total;
   }
   report.sum_condition = report.sum_integrals < 1.0;
   report.max_condition = report.max_integral < 0.5;
   report.satisfied = report.sum_condition || report.max_condition;
   return report;
}

} // namespace fracvisc
