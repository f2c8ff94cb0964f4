#include "doctest.h"
#include "oracles.hpp"

#include "fracvisc/errors.hpp"
#include "fracvisc/special_functions.hpp"

#include <cmath>
#include <numbers>

using namespace fracvisc;

TEST_CASE("gamma matches 50-digit reference")
{
   for (double x : {0.1, 0.5, 1.0, 1.5, 2.5, 4.7, 10.3, 30.0, -0.5, -1.3, -3.7})
   {
      const double ref = oracle::gamma50(x);
      CHECK(gamma_fn(x) == doctest::Approx(ref).epsilon(2e-14));
      CHECK(rgamma_fn(x) == doctest::Approx(1.0 / ref).epsilon(2e-14));
   }
   CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
   CHECK(log_gamma_fn(100.0) == doctest::Approx(std::lgamma(100.0)).epsilon(1e-14));
}

TEST_CASE("gamma poles")
{
   CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
   CHECK_THROWS_AS(gamma_fn(-2.0), DomainError);
   CHECK(rgamma_fn(-3.0) == 0.0);
   CHECK_THROWS_AS(log_gamma_fn(-1.0), DomainError);
}

TEST_CASE("alpha = 1 reduces to the exponential")
{
   for (double z = -50.0; z <= 0.0; z += 0.37)
   {
      CHECK(std::abs(ml(1.0, z) - std::exp(z)) <= 1e-14);
      CHECK(std::abs(ml_deriv(1.0, z) - std::exp(z)) <= 1e-14);
   }
}

TEST_CASE("alpha = 1/2 against exp(x^2) erfc(x)")
{
   for (double x = 0.0; x <= 5.0; x += 0.125)
   {
      const double ref = oracle::exp_erfc(x);
      CHECK(std::abs(ml(0.5, -x) - ref) <= 1e-12);
      // d/dz E_{1/2}(z) at z = -x equals 2/sqrt(pi) - 2 x exp(x^2) erfc(x)
      const double dref = 2.0 / std::sqrt(std::numbers::pi) - 2.0 * x * ref;
      CHECK(std::abs(ml_deriv(0.5, -x) - dref) <= 1e-11);
   }
}

TEST_CASE("frozen high-precision reference across regimes")
{
   struct Row
   {
      double alpha, x, value, deriv;
   };
   static const Row table[] = {
#include "ml_reference.inc"
   };
   for (const Row &r : table)
   {
      CAPTURE(r.alpha);
      CAPTURE(r.x);
      CHECK(std::abs(ml(r.alpha, -r.x) - r.value) <= 1e-12);
      CHECK(std::abs(ml_deriv(r.alpha, -r.x) - r.deriv) <= 1e-11);
   }
}

TEST_CASE("50-digit series where it converges")
{
   for (double alpha : {0.5, 0.75, 0.95})
   {
      for (double x : {0.01, 0.5, 2.0, 5.0, 7.9})
      {
         CAPTURE(alpha);
         CAPTURE(x);
         CHECK(std::abs(ml(alpha, -x) - oracle::ml_series(alpha, -x)) <= 1e-12);
         CHECK(std::abs(ml_deriv(alpha, -x) - oracle::ml_series(alpha, -x, 1)) <= 1e-11);
      }
   }
}

TEST_CASE("complete monotonicity on the negative axis")
{
   for (double alpha : {0.2, 0.5, 0.9})
   {
      double prev = ml(alpha, 0.0);
      CHECK(prev == 1.0);
      for (double x = 0.05; x < 200.0; x *= 1.3)
      {
         const double e = ml(alpha, -x);
         CHECK(e > 0.0);
         CHECK(e < prev);
         CHECK(ml_deriv(alpha, -x) > 0.0);
         prev = e;
      }
   }
}

TEST_CASE("large-argument tail follows the leading asymptotic term")
{
   const double alpha = 0.4, x = 1e6;
   const double lead = 1.0 / (x * oracle::gamma50(1.0 - alpha));
   CHECK(ml(alpha, -x) == doctest::Approx(lead).epsilon(1e-5));
}

TEST_CASE("argument validation")
{
   CHECK_THROWS_AS(ml(0.0, -1.0), DomainError);
   CHECK_THROWS_AS(ml(1.2, -1.0), DomainError);
   CHECK_THROWS_AS(ml(0.5, 1.0), DomainError);
   MLEvalPolicy bad;
   bad.series_max_terms = 0;
   CHECK_THROWS_AS(bad.validate(), ValidationError);
}
