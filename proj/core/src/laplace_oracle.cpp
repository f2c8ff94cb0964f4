#include "fracvisc/laplace_oracle.hpp"

#include "fracvisc/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fracvisc
{

namespace
{

using cplx = std::complex<double>;

constexpr double max_pole_angle = 1.0;

// Talbot nodes s_k = r theta (cot theta + i) and the weights
// (1 + i sigma) with sigma = theta + (theta cot theta - 1) cot theta.
template <class Accumulate>
void talbot_nodes(double t, int M, Accumulate &&acc)
{
   if (!(t > 0.0)) { throw DomainError("talbot: t must be > 0"); }
   if (M < 16) { throw ValidationError("talbot: at least 16 contour points are required"); }
   const double r = 2.0 * M / (5.0 * t);
   acc(cplx{r, 0.0}, cplx{0.5 * std::exp(r * t), 0.0});
   for (int k = 1; k < M; ++k)
   {
      const double theta = k * std::numbers::pi / M;
      const double cot = 1.0 / std::tan(theta);
      const cplx s{r * theta * cot, r * theta};
      const double sigma = theta + (theta * cot - 1.0) * cot;
      acc(s, std::exp(t * s) * cplx{1.0, sigma});
   }
}

} // namespace

Eigen::MatrixXcd transfer_matrix(const ModalSystem &sys, cplx s)
{
   const auto m = static_cast<Eigen::Index>(sys.modes());
   Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(m, m);
   Q.diagonal() = sys.lambda().cast<cplx>();
   Q.diagonal().array() += sys.rho() * s * s;
   for (std::size_t i = 0; i < sys.kernels().size(); ++i)
   {
      Q -= beta_laplace(sys.kernels()[i], s) * sys.couplings()[i].cast<cplx>();
   }
   return Q;
}

Eigen::VectorXcd solve_transform(const ModalSystem &sys, cplx s, TransformOptions opts)
{
   if (!opts.on_contour)
   {
      double bound = 0.0;
      for (const auto &k : sys.kernels()) { bound = std::max(bound, 1.0 / k.tau()); }
      if (!(s.real() > bound))
      {
         std::ostringstream os;
         os << "solve_transform: Re(s) = " << s.real() << " must exceed " << bound;
         throw DomainError(os.str());
      }
   }
   const auto load = sys.load().laplace(s);
   if (!load)
   {
      throw ValidationError("solve_transform: load has no closed-form Laplace transform");
   }
   Eigen::VectorXcd rhs = *load;
   rhs += sys.rho() * s * sys.d0().cast<cplx>() + sys.rho() * sys.v0().cast<cplx>();

   const Eigen::MatrixXcd Q = transfer_matrix(sys, s);
   Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Q);
   const double rcond = lu.rcond();
   if (!(rcond > 1e-13))
   {
      std::ostringstream os;
      os << "solve_transform: Q(s) is singular at s = " << s << " (condition estimate "
         << (rcond > 0.0 ? 1.0 / rcond : INFINITY) << ")";
      throw NumericalError(os.str());
   }
   return lu.solve(rhs);
}

double talbot_invert(const std::function<cplx(cplx)> &F, double t, TalbotContour contour)
{
   double sum = 0.0;
   talbot_nodes(t, contour.talbot_M, [&](cplx s, cplx w) { sum += (w * F(s)).real(); });
   const double r = 2.0 * contour.talbot_M / (5.0 * t);
   const double out = r / contour.talbot_M * sum;
   if (!std::isfinite(out))
   {
      throw NumericalError("talbot_invert: contour quadrature is not finite");
   }
   return out;
}

double oscillation_bound(const ModalSystem &sys)
{
   double omega = std::sqrt(sys.lambda().maxCoeff() / sys.rho());
   for (const auto *channel : {&sys.load().volume(), &sys.load().surface()})
   {
      for (const auto &d : *channel)
      {
         if (const auto *sn = std::get_if<load::Sinusoid>(&d.variant()))
         {
            omega = std::max(omega, std::abs(sn->omega));
         }
      }
   }
   return omega;
}

Eigen::VectorXd invert(const ModalSystem &sys, double t, TalbotContour contour)
{
   if (!sys.load().transformable())
   {
      throw ValidationError("invert: load has no closed-form Laplace transform");
   }
   const double r = 2.0 * contour.talbot_M / (5.0 * t);
   // The contour reaches height r*theta at real part r*theta*cot(theta); poles
   // near +-i*omega are enclosed with margin only while omega/r stays well
   // below pi/2.
   const double omega = oscillation_bound(sys);
   if (omega / r > max_pole_angle)
   {
      std::ostringstream os;
      os << "invert: at t = " << t << " the Talbot contour (M = " << contour.talbot_M
         << ") does not enclose poles near |Im s| = " << omega << "; increase talbot_M";
      throw NumericalError(os.str());
   }
   Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.modes()));
   talbot_nodes(t, contour.talbot_M, [&](cplx s, cplx w) {
      const Eigen::VectorXcd D = solve_transform(sys, s, {.on_contour = true});
      sum += (w * D).real();
   });
   Eigen::VectorXd out = (r / contour.talbot_M) * sum;
   if (!out.allFinite())
   {
      throw NumericalError("invert: Talbot quadrature is not finite");
   }
   return out;
}

} // namespace fracvisc
