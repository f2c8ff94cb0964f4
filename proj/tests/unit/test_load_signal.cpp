#include "doctest.h"

#include "fracvisc/errors.hpp"
#include "fracvisc/load_signal.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

using namespace fracvisc;

namespace
{

double numeric_laplace(const LoadDescriptor &d, double s)
{
   // split at a step so both pieces are smooth
   double a = 0.0, head = 0.0;
   if (const auto *st = std::get_if<load::Step>(&d.variant())) { a = st->t_on; }
   auto f = [&](double t) { return std::exp(-s * t) * d.value(t); };
   if (a > 0.0) { head = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, a, 5, 1e-13); }
   boost::math::quadrature::exp_sinh<double> es;
   return head + es.integrate(f, a, std::numeric_limits<double>::infinity(), 1e-12);
}

} // namespace

TEST_CASE("descriptor values")
{
   CHECK(LoadDescriptor(load::Constant{2.5}).value(7.0) == 2.5);
   const LoadDescriptor step(load::Step{3.0, 1.0});
   CHECK(step.value(0.5) == 0.0);
   CHECK(step.value(1.0) == 3.0);
   const LoadDescriptor sn(load::Sinusoid{2.0, 3.0, 0.25});
   CHECK(sn.value(0.4) == doctest::Approx(2.0 * std::sin(1.2 + 0.25)));
   const LoadDescriptor ex(load::Exponential{1.5, 0.5});
   CHECK(ex.value(2.0) == doctest::Approx(1.5 * std::exp(-1.0)));
   const LoadDescriptor tab(load::Table{{0.0, 1.0, 3.0}, {0.0, 2.0, -2.0}});
   CHECK(tab.value(0.5) == doctest::Approx(1.0));
   CHECK(tab.value(2.0) == doctest::Approx(0.0));
   CHECK(tab.value(10.0) == doctest::Approx(-2.0));
   CHECK(LoadDescriptor().is_zero());
}

TEST_CASE("table validation")
{
   CHECK_THROWS_AS(LoadDescriptor(load::Table{{}, {}}), ValidationError);
   CHECK_THROWS_AS(LoadDescriptor(load::Table{{0.0, 1.0}, {1.0}}), ValidationError);
   CHECK_THROWS_AS(LoadDescriptor(load::Table{{0.0, 0.0}, {1.0, 2.0}}), ValidationError);
   CHECK_THROWS_AS(LoadDescriptor(load::Step{1.0, -1.0}), ValidationError);
}

TEST_CASE("derivatives at zero")
{
   const LoadDescriptor sn(load::Sinusoid{2.0, 3.0, 0.25});
   CHECK(sn.derivative_at_zero(1) == doctest::Approx(6.0 * std::cos(0.25)));
   CHECK(sn.derivative_at_zero(2) == doctest::Approx(-18.0 * std::sin(0.25)));
   const LoadDescriptor ex(load::Exponential{1.5, 0.5});
   CHECK(ex.derivative_at_zero(3) == doctest::Approx(1.5 * -0.125));
   CHECK_THROWS_AS(ex.derivative_at_zero(-1), ValidationError);
}

TEST_CASE("closed-form transforms against quadrature")
{
   const double s = 1.7;
   for (const LoadDescriptor &d :
        {LoadDescriptor(load::Constant{2.0}), LoadDescriptor(load::Step{1.0, 0.5}),
         LoadDescriptor(load::Sinusoid{1.0, 2.0, 0.3}), LoadDescriptor(load::Exponential{2.0, 0.7})})
   {
      const auto F = d.laplace({s, 0.0});
      REQUIRE(F.has_value());
      CHECK(F->real() == doctest::Approx(numeric_laplace(d, s)).epsilon(1e-9));
      CHECK(std::abs(F->imag()) < 1e-15);
   }
   CHECK_FALSE(LoadDescriptor(load::Table{{0.0, 1.0}, {0.0, 1.0}}).laplace({1.0, 0.0}).has_value());
}

TEST_CASE("signal sums volume and surface channels")
{
   LoadSignal sig({LoadDescriptor(load::Constant{1.0}), LoadDescriptor()},
                  {LoadDescriptor(load::Constant{0.5}), LoadDescriptor(load::Exponential{1.0, 1.0})});
   const Eigen::VectorXd v = sig.value(0.0);
   CHECK(v[0] == doctest::Approx(1.5));
   CHECK(v[1] == doctest::Approx(1.0));
   CHECK(sig.transformable());
   CHECK_FALSE(sig.is_zero());
   CHECK(LoadSignal::zero(3).is_zero());
   CHECK_THROWS_AS(LoadSignal({LoadDescriptor()}, {}), ValidationError);
}
