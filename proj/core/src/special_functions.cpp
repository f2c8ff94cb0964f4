#include "fracvisc/special_functions.hpp"

#include "fracvisc/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracvisc
{

namespace
{

constexpr double pi = std::numbers::pi;
constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_coef = {
   0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
   771.32342877765313,      -176.61502916214059,   12.507343278686905,
   -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double x)
{
   return x <= 0.0 && x == std::floor(x);
}

// sin(pi*x) with exact argument reduction.
double sin_pi(double x)
{
   const double r = x - 2.0 * std::round(0.5 * x);
   if (r == 0.0 || std::abs(r) == 1.0) { return 0.0; }
   return std::sin(pi * r);
}

// Lanczos sum for Gamma(y + 1), y >= -1/2.
double lanczos_sum(double y)
{
   double a = lanczos_coef[0];
   for (std::size_t i = 1; i < lanczos_coef.size(); ++i)
   {
      a += lanczos_coef[i] / (y + static_cast<double>(i));
   }
   return a;
}

void check_ml_args(double alpha, double z, const char *who)
{
   if (!(alpha > 0.0 && alpha <= 1.0))
   {
      std::ostringstream os;
      os << who << ": alpha must lie in (0, 1], got " << alpha;
      throw DomainError(os.str());
   }
   if (!(z <= 0.0) || !std::isfinite(z))
   {
      std::ostringstream os;
      os << who << ": argument must be finite and <= 0, got " << z;
      throw DomainError(os.str());
   }
}

// Largest tolerated series term; beyond this cancellation costs more than
// the 1e-10 absolute budget allows.
constexpr double series_max_magnitude = 1e2;
constexpr double asymptotic_accept = 1e-14;

// Term-wise series. `order` 0 gives E, 1 gives E'. Returns false if the
// series is unusable (cancellation or not converged).
bool ml_series(double alpha, double x, int order, const MLEvalPolicy &p,
               double &out)
{
   double sum = 0.0;
   double max_term = 0.0;
   double prev_mag = std::numeric_limits<double>::infinity();
   const double logx = x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
   for (int n = order; n < order + p.series_max_terms; ++n)
   {
      double mag;
      const int power = n - order;
      const double garg = 1.0 + n * alpha;
      const double coeff = order == 0 ? 1.0 : static_cast<double>(n);
      if (power == 0)
      {
         mag = coeff / gamma_fn(garg);
      }
      else if (garg < 150.0)
      {
         mag = coeff * std::pow(x, power) / gamma_fn(garg);
      }
      else
      {
         mag = coeff * std::exp(power * logx - log_gamma_fn(garg));
      }
      const double term = (power % 2 == 0) ? mag : -mag;
      sum += term;
      max_term = std::max(max_term, mag);
      if (max_term > series_max_magnitude) { return false; }
      if (mag <= p.series_abs_tol && mag <= prev_mag && power > 0)
      {
         out = sum;
         return true;
      }
      prev_mag = mag;
   }
   return false;
}

// Asymptotic expansion for E (order 0) or E' (order 1) at -x, truncated at the
// smallest envelope term.
bool ml_asymptotic(double alpha, double x, int order, const MLEvalPolicy &p,
                   double &out)
{
   double sum = 0.0;
   double prev_env = std::numeric_limits<double>::infinity();
   const double logx = std::log(x);
   for (int k = 1; k <= p.asymptotic_terms; ++k)
   {
      // |1/Gamma(1 - k alpha)| <= Gamma(k alpha)/pi
      const double power = (order == 0) ? k : k + 1;
      const double coeff = (order == 0) ? 1.0 : static_cast<double>(k);
      const double env = coeff * std::exp(-power * logx + log_gamma_fn(k * alpha)) / pi;
      if (env > prev_env) { break; }
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      sum += sign * coeff * std::exp(-power * logx) * rgamma_fn(1.0 - k * alpha);
      prev_env = env;
      if (env < 1e-3 * asymptotic_accept) { break; }
   }
   if (prev_env < asymptotic_accept)
   {
      out = sum;
      return true;
   }
   return false;
}

// For 0 < alpha < 1, x > 0:
//   E(-x)  = 1/(alpha pi) int_0^{alpha pi} exp(-w(psi)) dpsi
//   E'(-x) = 1/(alpha^2 pi x) int_0^{alpha pi} w exp(-w) dpsi
// with w = (x sin(psi) / sin(alpha pi - psi))^{1/alpha}.
double ml_integral(double alpha, double x, int order, const MLEvalPolicy &p)
{
   const double theta = alpha * pi;
   const double s = std::sin(theta);
   const double c = std::cos(theta);
   const double inv_alpha = 1.0 / alpha;

   auto integrand = [=](double psi) {
      const double u = x * std::sin(psi) / std::sin(theta - psi);
      if (!(u < std::numeric_limits<double>::max())) { return 0.0; }
      const double w = std::pow(u, inv_alpha);
      return order == 0 ? std::exp(-w) : w * std::exp(-w);
   };

   // w = 1 and w = 45 mark the transition and the negligible tail.
   const double psi_1 = std::atan2(s, x + c);
   const double u_cut = std::pow(45.0, alpha) / x;
   const double psi_2 = std::max(psi_1, std::atan2(u_cut * s, 1.0 + u_cut * c));

   // the integrand behaves like exp(-c psi^{1/alpha}) at the origin, so a
   // double-exponential rule is used on both panels
   thread_local boost::math::quadrature::tanh_sinh<double> rule;
   double total = rule.integrate(integrand, 0.0, psi_1, p.quadrature_rel_tol);
   if (psi_2 > psi_1)
   {
      total += rule.integrate(integrand, psi_1, psi_2, p.quadrature_rel_tol);
   }
   return order == 0 ? total / theta : total / (alpha * theta * x);
}

double ml_dispatch(double alpha, double z, int order, const MLEvalPolicy &policy)
{
   const double x = -z;
   if (alpha == 1.0) { return std::exp(z); }
   if (x == 0.0) { return order == 0 ? 1.0 : 1.0 / gamma_fn(1.0 + alpha); }

   double value = 0.0;
   if (x <= policy.crossover_argument && ml_series(alpha, x, order, policy, value))
   {
      return value;
   }
   if (x > policy.crossover_argument && ml_asymptotic(alpha, x, order, policy, value))
   {
      return value;
   }
   return ml_integral(alpha, x, order, policy);
}

} // namespace

void MLEvalPolicy::validate() const
{
   if (series_max_terms <= 0 || asymptotic_terms <= 0)
   {
      throw ValidationError("MLEvalPolicy: term counts must be positive");
   }
   if (!(series_abs_tol > 0.0) || !(crossover_argument > 0.0) ||
       !(quadrature_rel_tol > 0.0))
   {
      throw ValidationError("MLEvalPolicy: tolerances and crossover must be positive");
   }
}

double gamma_fn(double x)
{
   if (std::isnan(x) || is_nonpositive_integer(x))
   {
      std::ostringstream os;
      os << "gamma_fn: pole at x = " << x;
      throw DomainError(os.str());
   }
   if (x < 0.5)
   {
      return pi / (sin_pi(x) * gamma_fn(1.0 - x));
   }
   const double y = x - 1.0;
   const double t = y + lanczos_g + 0.5;
   // t^(y+1/2) split in two halves to delay overflow
   const double half = std::pow(t, 0.5 * (y + 0.5));
   return std::sqrt(2.0 * pi) * half * (half * std::exp(-t)) * lanczos_sum(y);
}

double log_gamma_fn(double x)
{
   if (!(x > 0.0))
   {
      throw DomainError("log_gamma_fn: argument must be positive");
   }
   if (x < 0.5)
   {
      return std::log(pi / std::abs(sin_pi(x))) - log_gamma_fn(1.0 - x);
   }
   if (x < 30.0)
   {
      return std::log(gamma_fn(x));
   }
   const double y = x - 1.0;
   const double t = y + lanczos_g + 0.5;
   return 0.5 * std::log(2.0 * pi) + (y + 0.5) * std::log(t) - t + std::log(lanczos_sum(y));
}

double rgamma_fn(double x)
{
   if (is_nonpositive_integer(x)) { return 0.0; }
   if (x >= 0.5)
   {
      return x < 170.0 ? 1.0 / gamma_fn(x) : std::exp(-log_gamma_fn(x));
   }
   // 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi
   const double y = 1.0 - x;
   if (y < 170.0) { return gamma_fn(y) * sin_pi(x) / pi; }
   const double sp = sin_pi(x);
   return std::copysign(std::exp(log_gamma_fn(y) + std::log(std::abs(sp)) - std::log(pi)), sp);
}

double ml(double alpha, double z, const MLEvalPolicy &policy)
{
   check_ml_args(alpha, z, "ml");
   return ml_dispatch(alpha, z, 0, policy);
}

double ml_deriv(double alpha, double z, const MLEvalPolicy &policy)
{
   check_ml_args(alpha, z, "ml_deriv");
   return ml_dispatch(alpha, z, 1, policy);
}

} // namespace fracvisc
