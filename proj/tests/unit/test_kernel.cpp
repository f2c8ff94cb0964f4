#include "doctest.h"
#include "oracles.hpp"

#include "fracvisc/errors.hpp"
#include "fracvisc/kernel.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace fracvisc;

TEST_CASE("parameter validation")
{
   CHECK_THROWS_AS(KernelParams(0.0, 1.0, 0.5), ValidationError);
   CHECK_THROWS_AS(KernelParams(1.0, 1.0, 0.5), ValidationError);
   CHECK_THROWS_AS(KernelParams(0.5, 0.0, 0.5), ValidationError);
   CHECK_THROWS_AS(KernelParams(0.5, 1.0, 0.0), ValidationError);
   CHECK_THROWS_AS(KernelParams(0.5, 1.0, 1.5), ValidationError);
   CHECK_NOTHROW(KernelParams::unchecked_strength(0.0, 1.0, 0.5));
   CHECK(KernelParams(0.5, 1.0, 1.0).smooth());
}

TEST_CASE("beta is the negative derivative of xi")
{
   const KernelParams k(0.4, 2.0, 0.6);
   for (double t : {0.01, 0.3, 1.0, 4.0, 25.0})
   {
      const double h = 1e-5 * t;
      const double fd = -(xi_eval(k, t + h) - xi_eval(k, t - h)) / (2.0 * h);
      CHECK(beta_eval(k, t) == doctest::Approx(fd).epsilon(1e-7));
   }
   CHECK_THROWS_AS(beta_eval(k, 0.0), DomainError);
   CHECK(xi_eval(k, 0.0) == doctest::Approx(0.4));
}

TEST_CASE("alpha = 1 is the exponential kernel")
{
   const KernelParams k(0.3, 0.5, 1.0);
   for (double t : {0.0, 0.2, 1.0, 3.0})
   {
      CHECK(beta_eval(k, t) == doctest::Approx(0.3 / 0.5 * std::exp(-t / 0.5)).epsilon(1e-14));
   }
   CHECK(beta_derivative_at_zero(k, 0) == doctest::Approx(0.6));
   CHECK(beta_derivative_at_zero(k, 3) == doctest::Approx(0.6 * -8.0));
   CHECK_THROWS_AS(beta_derivative_at_zero(KernelParams(0.3, 0.5, 0.7), 0), SingularKernelError);
}

TEST_CASE("interval integral against independent quadrature")
{
   for (double alpha : {0.25, 0.5, 0.9, 1.0})
   {
      const KernelParams k(0.5, 1.5, alpha);
      for (double T : {0.1, 1.0, 15.0})
      {
         CAPTURE(alpha);
         CAPTURE(T);
         CHECK(std::abs(beta_integral(k, 0.0, T) - oracle::beta_integral(k, T)) <= 1e-10);
      }
   }
   const KernelParams k(0.5, 1.0, 0.5);
   CHECK(beta_integral(k, 2.0, 2.0) == 0.0);
   CHECK_THROWS_AS(beta_integral(k, 2.0, 1.0), ValidationError);
}

TEST_CASE("Laplace transform: closed form, region and complex branch")
{
   const KernelParams k(0.5, 2.0, 0.5);
   CHECK_THROWS_AS(beta_laplace(k, 0.5), DomainError);
   for (double s : {0.75, 1.5, 5.0})
   {
      const double ref = oracle::beta_laplace(k, s);
      CHECK(beta_laplace(k, s) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(beta_laplace(k, std::complex<double>(s, 0.0)).real() ==
            doctest::Approx(beta_laplace(k, s)).epsilon(1e-15));
   }
   // conjugate symmetry of the principal branch
   const std::complex<double> s{0.3, 2.0};
   CHECK(std::abs(beta_laplace(k, std::conj(s)) - std::conj(beta_laplace(k, s))) < 1e-15);
}

TEST_CASE("library quadrature checks agree with closed forms")
{
   for (double alpha : {0.3, 0.5, 0.8, 1.0})
   {
      const KernelParams k(0.6, 0.7, alpha);
      CHECK(beta_l1_check(k, 7.0).abs_gap <= 1e-10);
      CHECK(beta_laplace_check(k, 3.0 / 0.7).rel_gap <= 1e-9);
   }
}

TEST_CASE("product weights telescope to the kernel mass")
{
   const KernelParams k(0.45, 1.0, 0.4);
   const double dt = 0.01;
   const std::size_t n = 300;
   for (auto kind : {ConvolutionKind::product_integration, ConvolutionKind::product_linear})
   {
      const ConvolutionRule rule = product_weights(k, dt, n, kind);
      double sum = 0.0;
      for (double w : rule.weights) { sum += w; }
      CHECK(sum == doctest::Approx(0.45 - xi_eval(k, (n + 1) * dt)).epsilon(1e-13));
      // constant input: conv(n) = int_0^{t_n} beta
      std::vector<double> ones(n + 1, 1.0);
      for (std::size_t m : {std::size_t{1}, std::size_t{10}, n})
      {
         CHECK(rule.apply(ones, m) == doctest::Approx(beta_integral(k, 0.0, m * dt)).epsilon(1e-12));
      }
      for (std::size_t l = 0; l < rule.weights.size(); ++l) { CHECK(rule.weights[l] > 0.0); }
   }
}

TEST_CASE("BDF1 convolution quadrature weights for the exponential kernel")
{
   // beta_hat((1 - zeta)/dt) = gamma dt / (tau + dt) * sum_j (tau / (tau + dt))^j zeta^j
   const double gamma = 0.5, tau = 0.8, dt = 0.05;
   const KernelParams k(gamma, tau, 1.0);
   const ConvolutionRule rule = cq_weights(k, dt, 200, 1);
   for (std::size_t j = 0; j <= 200; j += 17)
   {
      const double ref = gamma * dt / (tau + dt) * std::pow(tau / (tau + dt), static_cast<double>(j));
      CHECK(std::abs(rule.weights[j] - ref) <= 1e-12);
   }
}

TEST_CASE("convolution rules converge on a smooth input")
{
   // (beta * sin)(T) for alpha = 1 in closed form
   const double gamma = 0.5, tau = 1.0, T = 1.0;
   const KernelParams k(gamma, tau, 1.0);
   auto exact = [&](double t) {
      // (gamma / tau) int_0^t e^{-(t-s)/tau} sin s ds
      const double a = 1.0 / tau;
      return gamma * a * (a * std::sin(t) - std::cos(t) + std::exp(-a * t)) / (a * a + 1.0);
   };
   auto error = [&](ConvolutionKind kind, std::size_t n) {
      const double dt = T / static_cast<double>(n);
      const ConvolutionRule rule = make_rule(k, dt, n, kind);
      std::vector<double> u(n + 1);
      for (std::size_t i = 0; i <= n; ++i) { u[i] = std::sin(i * dt); }
      return std::abs(rule.apply(u, n) - exact(T));
   };
   const double p_pi = std::log2(error(ConvolutionKind::product_integration, 100) /
                                 error(ConvolutionKind::product_integration, 200));
   const double p_cq1 = std::log2(error(ConvolutionKind::cq_bdf1, 100) / error(ConvolutionKind::cq_bdf1, 200));
   const double p_cq2 = std::log2(error(ConvolutionKind::cq_bdf2, 100) / error(ConvolutionKind::cq_bdf2, 200));
   CHECK(p_pi == doctest::Approx(2.0).epsilon(0.05));
   CHECK(p_cq1 == doctest::Approx(1.0).epsilon(0.05));
   CHECK(p_cq2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("weight table CSV")
{
   const ConvolutionRule rule = product_weights(KernelParams(0.5, 1.0, 0.5), 0.1, 3);
   std::ostringstream os;
   rule.write_csv(os);
   const std::string text = os.str();
   CHECK(text.rfind("lag_index,weight\n", 0) == 0);
   CHECK(std::count(text.begin(), text.end(), '\n') == 5);
   CHECK(convolution_kind_from_string("cq_bdf2") == ConvolutionKind::cq_bdf2);
   CHECK_THROWS_AS(convolution_kind_from_string("trapezoid"), ValidationError);
}

TEST_CASE("positive type and monotonicity diagnostics")
{
   for (double alpha : {0.3, 0.6, 1.0})
   {
      const KernelParams k(0.7, 1.0, alpha);
      const UniformGrid grid{0.0, 0.05, 48};
      const PositiveTypeReport pt = positive_type_check(k, grid, 50, 3);
      CHECK(pt.passed);
      CHECK(pt.trials == 50);
      for (int j = 1; j <= 4; ++j) { CHECK(monotonicity_check(k, j, grid).passed); }
   }
   // same seed, same answer
   const KernelParams k(0.5, 1.0, 0.5);
   const UniformGrid grid{0.0, 0.1, 20};
   CHECK(positive_type_check(k, grid, 10, 99).min_quadratic_form ==
         positive_type_check(k, grid, 10, 99).min_quadratic_form);
   CHECK_THROWS_AS(monotonicity_check(k, 5, grid), ValidationError);
}

TEST_CASE("positive-type form by an independent symmetric double sum")
{
   const KernelParams k(0.6, 1.0, 0.45);
   const UniformGrid grid{0.0, 0.1, 30};
   std::mt19937_64 rng(5);
   std::uniform_real_distribution<double> U(-1.0, 1.0);
   std::vector<double> phi(grid.n_points);
   for (auto &p : phi) { p = U(rng); }
   double full = 0.0, diag = 0.0;
   for (std::size_t n = 0; n < phi.size(); ++n)
   {
      for (std::size_t m = 0; m < phi.size(); ++m)
      {
         const double lag = std::abs(static_cast<double>(n) - static_cast<double>(m)) * grid.dt;
         full += xi_eval(k, lag) * phi[n] * phi[m];
      }
      diag += xi_eval(k, 0.0) * phi[n] * phi[n];
   }
   const double h2 = grid.dt * grid.dt;
   CHECK(full > 0.0);
   CHECK(positive_type_form(k, grid, phi) == doctest::Approx(0.5 * (full + diag) * h2).epsilon(1e-12));
}

TEST_CASE("beta condition")
{
   const KernelParams a(0.3, 1.0, 0.5), b(0.4, 2.0, 0.7);
   const std::vector<KernelParams> ks{a, b};
   const BetaConditionReport rep = beta_condition(ks, 50.0);
   CHECK(rep.sum_integrals == doctest::Approx(beta_integral(a, 0.0, 50.0) + beta_integral(b, 0.0, 50.0)));
   CHECK(rep.sum_condition);
   CHECK(rep.satisfied);
   CHECK(rep.max_integral >= std::max(beta_integral(a, 0, 50.0), beta_integral(b, 0, 50.0)));

   const KernelParams c(0.8, 1.0, 0.5);
   const std::vector<KernelParams> strong{c, c};
   const BetaConditionReport bad = beta_condition(strong, 1e4);
   CHECK_FALSE(bad.sum_condition);
   CHECK_FALSE(bad.max_condition);
   CHECK_FALSE(bad.satisfied);
}
