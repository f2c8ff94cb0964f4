#include "fracvisc/modal_system.hpp"

#include "fracvisc/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fracvisc
{

namespace
{

constexpr double symmetry_tol = 1e-10;
constexpr double split_tol = 1e-10;

std::string describe(const char *what, double value)
{
   std::ostringstream os;
   os << what << " (" << value << ")";
   return os.str();
}

} // namespace

Eigen::MatrixXd ModalSystem::B2() const
{
   if (couplings_.size() > 1) { return couplings_[1]; }
   return Eigen::MatrixXd::Zero(lambda_.size(), lambda_.size());
}

double ModalSystem::gamma_bar() const
{
   double g = 0.0;
   for (const auto &k : kernels_) { g = std::max(g, k.gamma()); }
   return g;
}

double ModalSystem::gamma_underline() const
{
   double g = kernels_.empty() ? 0.0 : kernels_.front().gamma();
   for (const auto &k : kernels_) { g = std::min(g, k.gamma()); }
   return g;
}

bool ModalSystem::operator==(const ModalSystem &o) const
{
   if (rho_ != o.rho_ || lambda_ != o.lambda_ || kernels_ != o.kernels_ ||
       d0_ != o.d0_ || v0_ != o.v0_ || couplings_.size() != o.couplings_.size())
   {
      return false;
   }
   for (std::size_t i = 0; i < couplings_.size(); ++i)
   {
      if (couplings_[i] != o.couplings_[i]) { return false; }
   }
   return true;
}

ModalSystem assemble_general(double rho, Eigen::VectorXd lambda,
                             std::vector<Eigen::MatrixXd> couplings,
                             std::vector<KernelParams> kernels, LoadSignal load,
                             Eigen::VectorXd d0, Eigen::VectorXd v0)
{
   const Eigen::Index m = lambda.size();
   if (m == 0) { throw ValidationError("assemble_general: no modes"); }
   if (!(rho > 0.0)) { throw ValidationError(describe("assemble_general: rho must be positive", rho)); }
   if (kernels.empty() || kernels.size() > 2)
   {
      throw ValidationError("assemble_general: one or two kernels are required");
   }
   if (couplings.size() != kernels.size())
   {
      throw ValidationError("assemble_general: one coupling matrix per kernel is required");
   }
   if (d0.size() == 0) { d0 = Eigen::VectorXd::Zero(m); }
   if (v0.size() == 0) { v0 = Eigen::VectorXd::Zero(m); }
   if (d0.size() != m || v0.size() != m)
   {
      throw ValidationError("assemble_general: initial data length differs from mode count");
   }
   if (load.modes() == 0) { load = LoadSignal::zero(static_cast<std::size_t>(m)); }
   if (load.modes() != static_cast<std::size_t>(m))
   {
      throw ValidationError("assemble_general: load channel count differs from mode count");
   }
   for (Eigen::Index k = 0; k < m; ++k)
   {
      if (!(lambda[k] >= 0.0) || !std::isfinite(lambda[k]))
      {
         throw ValidationError(describe("assemble_general: negative or non-finite eigenvalue", lambda[k]));
      }
   }

   ModalSystem sys;
   const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
   for (std::size_t i = 0; i < couplings.size(); ++i)
   {
      const auto &B = couplings[i];
      if (B.rows() != m || B.cols() != m)
      {
         throw ValidationError("assemble_general: coupling matrix shape mismatch");
      }
      const double asym = (B - B.transpose()).cwiseAbs().maxCoeff();
      if (asym > symmetry_tol * scale)
      {
         throw ValidationError(describe("assemble_general: coupling matrix is not symmetric", asym));
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B, Eigen::EigenvaluesOnly);
      const double min_eig = eig.eigenvalues().minCoeff();
      if (min_eig < -symmetry_tol * scale)
      {
         throw ValidationError(describe("assemble_general: coupling matrix is indefinite", min_eig));
      }
      // a_i(v, v) <= a(v, v): B_i <= diag(lambda) in the Loewner order
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gap(
         Eigen::MatrixXd(lambda.asDiagonal()) - B, Eigen::EigenvaluesOnly);
      if (gap.eigenvalues().minCoeff() < -symmetry_tol * scale)
      {
         sys.warnings_.push_back("coupling " + std::to_string(i + 1) +
                                 " is not dominated by diag(lambda)");
      }
   }
   if (!std::is_sorted(lambda.begin(), lambda.end()))
   {
      sys.warnings_.push_back("eigenvalues are not sorted in non-decreasing order");
   }
   {
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
      for (const auto &B : couplings) { sum += B; }
      const double dev = (sum - Eigen::MatrixXd(lambda.asDiagonal())).cwiseAbs().maxCoeff();
      if (dev > split_tol * scale)
      {
         sys.warnings_.push_back(describe("sum of coupling matrices differs from diag(lambda) by", dev));
      }
   }
   for (auto &B : couplings) { B = 0.5 * (B + B.transpose()).eval(); }

   sys.rho_ = rho;
   sys.lambda_ = std::move(lambda);
   sys.couplings_ = std::move(couplings);
   sys.kernels_ = std::move(kernels);
   sys.load_ = std::move(load);
   sys.d0_ = std::move(d0);
   sys.v0_ = std::move(v0);
   return sys;
}

ModalSystem assemble_bar(const BarSpec &spec)
{
   if (spec.n_modes == 0) { throw ValidationError("assemble_bar: n_modes must be positive"); }
   if (!(spec.length > 0.0) || !(spec.wave_modulus > 0.0) || !(spec.rho > 0.0))
   {
      throw ValidationError("assemble_bar: length, wave modulus and rho must be positive");
   }
   if (spec.kernels.empty() || spec.kernels.size() > 2)
   {
      throw ValidationError("assemble_bar: one or two kernels are required");
   }
   const auto [c1, c2] = spec.kernel_split;
   if (c1 < 0.0 || c2 < 0.0 || std::abs(c1 + c2 - 1.0) > 1e-12)
   {
      throw ValidationError("assemble_bar: kernel split must be non-negative and sum to 1");
   }

   const auto m = static_cast<Eigen::Index>(spec.n_modes);
   Eigen::VectorXd lambda(m);
   for (Eigen::Index k = 0; k < m; ++k)
   {
      const double wave = static_cast<double>(k + 1) * std::numbers::pi / spec.length;
      lambda[k] = spec.wave_modulus * wave * wave;
   }
   const Eigen::MatrixXd diag = lambda.asDiagonal();

   std::vector<KernelParams> kernels{spec.kernels.front()};
   std::vector<Eigen::MatrixXd> couplings{c1 * diag};
   if (c2 > 0.0 || spec.kernels.size() == 2)
   {
      kernels.push_back(spec.kernels.size() == 2 ? spec.kernels[1] : spec.kernels.front());
      couplings.push_back(c2 * diag);
   }
   return assemble_general(spec.rho, lambda, std::move(couplings), std::move(kernels), spec.load,
                           spec.d0, spec.v0);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd>
project_initial(const std::function<double(double)> &u0, const std::function<double(double)> &v0,
                const SineBasis &basis)
{
   if (basis.n_modes == 0 || !(basis.length > 0.0))
   {
      throw ValidationError("project_initial: basis needs modes and a positive length");
   }
   using boost::math::quadrature::gauss_kronrod;
   const double L = basis.length;
   const double factor = basis.normalization == SineNormalization::orthonormal
                            ? std::sqrt(2.0 / L)
                            : 2.0 / L;
   const auto m = static_cast<Eigen::Index>(basis.n_modes);
   auto project = [&](const std::function<double(double)> &fn) {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
      if (!fn) { return out; }
      for (Eigen::Index k = 0; k < m; ++k)
      {
         const double wave = static_cast<double>(k + 1) * std::numbers::pi / L;
         auto integrand = [&](double x) { return fn(x) * std::sin(wave * x); };
         double err = 0.0;
         double l1 = 0.0;
         // one panel per half-wave keeps the oscillation resolved
         const int panels = static_cast<int>(k + 1);
         double total = 0.0;
         for (int p = 0; p < panels; ++p)
         {
            const double a = L * p / panels;
            const double b = L * (p + 1) / panels;
            double e = 0.0, l = 0.0;
            total += gauss_kronrod<double, 31>::integrate(integrand, a, b, 12, 1e-12, &e, &l);
            err += e;
            l1 += l;
         }
         if (!std::isfinite(total) || (err > 1e-9 * std::max(l1, 1e-300) && err > 1e-14))
         {
            std::ostringstream os;
            os << "project_initial: quadrature did not converge for mode " << (k + 1)
               << " (error estimate " << err << ")";
            throw NumericalError(os.str());
         }
         out[k] = factor * total;
      }
      return out;
   };
   return {project(u0), project(v0)};
}

std::vector<Eigen::VectorXd> compatibility_sequence(const ModalSystem &sys,
                                                    const std::vector<Eigen::VectorXd> &f_derivs_at_0,
                                                    int r)
{
   if (r < 0) { throw ValidationError("compatibility_sequence: r must be >= 0"); }
   if (r >= 3)
   {
      for (const auto &k : sys.kernels())
      {
         if (!k.smooth())
         {
            throw SingularKernelError(
               "compatibility_sequence: r >= 3 needs kernels smooth at t = 0 (alpha = 1)");
         }
      }
   }
   if (r >= 2 && f_derivs_at_0.size() < static_cast<std::size_t>(r - 1))
   {
      throw ValidationError("compatibility_sequence: not enough load derivatives for order r");
   }
   for (const auto &f : f_derivs_at_0)
   {
      if (f.size() != static_cast<Eigen::Index>(sys.modes()))
      {
         throw ValidationError("compatibility_sequence: load derivative length mismatch");
      }
   }

   std::vector<Eigen::VectorXd> seq;
   seq.push_back(sys.d0());
   if (r >= 1) { seq.push_back(sys.v0()); }
   for (int q = 2; q <= r; ++q)
   {
      Eigen::VectorXd rhs = f_derivs_at_0[static_cast<std::size_t>(q - 2)] -
                            sys.lambda().cwiseProduct(seq[static_cast<std::size_t>(q - 2)]);
      for (int j = 0; j <= q - 3; ++j)
      {
         for (std::size_t i = 0; i < sys.kernels().size(); ++i)
         {
            rhs += beta_derivative_at_zero(sys.kernels()[i], j) *
                   (sys.couplings()[i] * seq[static_cast<std::size_t>(q - 3 - j)]);
         }
      }
      seq.push_back(rhs / sys.rho());
   }
   return seq;
}

std::vector<Eigen::VectorXd> compatibility_sequence(const ModalSystem &sys, int r)
{
   std::vector<Eigen::VectorXd> derivs;
   for (int k = 0; k + 2 <= r; ++k)
   {
      derivs.push_back(sys.load().derivative_at_zero(k));
   }
   return compatibility_sequence(sys, derivs, r);
}

} // namespace fracvisc
