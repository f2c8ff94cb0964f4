#ifndef FRACVISC_MODAL_SYSTEM_HPP
#define FRACVISC_MODAL_SYSTEM_HPP

#include "fracvisc/kernel.hpp"
#include "fracvisc/load_signal.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace fracvisc
{

/// Semi-discrete Galerkin system in an orthonormal eigenbasis:
///
///   rho d'' + Lambda d - sum_i B_i (beta_i * d) = F(t),  d(0) = d0, d'(0) = v0.
///
/// Immutable once assembled. One coupling matrix per kernel (one or two).
class ModalSystem
{
public:
   double rho() const { return rho_; }
   std::size_t modes() const { return static_cast<std::size_t>(lambda_.size()); }
   const Eigen::VectorXd &lambda() const { return lambda_; }
   const std::vector<KernelParams> &kernels() const { return kernels_; }
   const std::vector<Eigen::MatrixXd> &couplings() const { return couplings_; }
   /// B_1 and B_2; B_2 is the zero matrix for single-kernel systems.
   const Eigen::MatrixXd &B1() const { return couplings_.front(); }
   Eigen::MatrixXd B2() const;
   const LoadSignal &load() const { return load_; }
   const Eigen::VectorXd &d0() const { return d0_; }
   const Eigen::VectorXd &v0() const { return v0_; }
   /// Soft invariant violations found at assembly.
   const std::vector<std::string> &warnings() const { return warnings_; }

   /// max_i gamma_i
   double gamma_bar() const;
   /// min_i gamma_i
   double gamma_underline() const;

   bool operator==(const ModalSystem &o) const;

private:
   friend ModalSystem assemble_general(double, Eigen::VectorXd, std::vector<Eigen::MatrixXd>,
                                       std::vector<KernelParams>, LoadSignal, Eigen::VectorXd,
                                       Eigen::VectorXd);
   ModalSystem() = default;

   double rho_ = 1.0;
   Eigen::VectorXd lambda_;
   std::vector<KernelParams> kernels_;
   std::vector<Eigen::MatrixXd> couplings_;
   LoadSignal load_;
   Eigen::VectorXd d0_;
   Eigen::VectorXd v0_;
   std::vector<std::string> warnings_;
};

/// Validating constructor for arbitrary modal data.
///
/// Errors (ValidationError): shape mismatch, rho <= 0, negative lambda,
/// asymmetric coupling (beyond 1e-10 relative), indefinite coupling, kernel
/// count not 1 or 2. Warnings: lambda not sorted, sum of couplings differs
/// from diag(lambda), B_i not dominated by diag(lambda).
ModalSystem assemble_general(double rho, Eigen::VectorXd lambda,
                             std::vector<Eigen::MatrixXd> couplings,
                             std::vector<KernelParams> kernels, LoadSignal load,
                             Eigen::VectorXd d0, Eigen::VectorXd v0);

struct BarSpec
{
   std::size_t n_modes = 1;
   double length = 1.0;
   double wave_modulus = 1.0; ///< c^2
   double rho = 1.0;
   std::vector<KernelParams> kernels; ///< one (synchronous) or two
   std::pair<double, double> kernel_split{1.0, 0.0};
   LoadSignal load;          ///< empty means zero load
   Eigen::VectorXd d0, v0;   ///< empty means zero
};

/// Fixed-end bar in the commuting setting: lambda_k = c^2 (k pi / L)^2 and
/// B_i = c_i diag(lambda). With a single kernel and c_2 > 0 the kernel is
/// reused for the second channel.
ModalSystem assemble_bar(const BarSpec &spec);

enum class SineNormalization
{
   orthonormal,   ///< coefficients against sqrt(2/L) sin(k pi x / L)
   sine_amplitude ///< amplitudes b_k of u = sum b_k sin(k pi x / L)
};

struct SineBasis
{
   std::size_t n_modes = 1;
   double length = 1.0;
   SineNormalization normalization = SineNormalization::orthonormal;
};

/// Modal coefficients of u0 and v0 against the bar sine basis by adaptive
/// quadrature. Throws NumericalError when the quadrature error estimate
/// exceeds 1e-9 (relative).
std::pair<Eigen::VectorXd, Eigen::VectorXd>
project_initial(const std::function<double(double)> &u0, const std::function<double(double)> &v0,
                const SineBasis &basis);

/// Initial time derivatives u_0..u_r of the solution implied by the equation:
/// u_0 = d0, u_1 = v0, u_2 = (f(0) - Lambda d0)/rho and for r >= 3
///
///   u_r = (f^{(r-2)}(0) - Lambda u_{r-2}
///          + sum_{j=0}^{r-3} sum_i beta_i^{(j)}(0) B_i u_{r-3-j}) / rho.
///
/// `f_derivs_at_0[k]` is the k-th derivative of the modal load at 0 and must
/// hold at least r - 1 entries when r >= 2. Throws SingularKernelError if
/// r >= 3 and some kernel has alpha < 1.
std::vector<Eigen::VectorXd> compatibility_sequence(const ModalSystem &sys,
                                                    const std::vector<Eigen::VectorXd> &f_derivs_at_0,
                                                    int r);

/// Same, taking load derivatives from the system's descriptors.
std::vector<Eigen::VectorXd> compatibility_sequence(const ModalSystem &sys, int r);

} // namespace fracvisc

#endif // FRACVISC_MODAL_SYSTEM_HPP
