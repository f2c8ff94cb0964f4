#ifndef FRACVISC_INTEGRATOR_HPP
#define FRACVISC_INTEGRATOR_HPP

#include "fracvisc/kernel.hpp"
#include "fracvisc/modal_system.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <vector>

namespace fracvisc
{

enum class TimeScheme
{
   newmark_average_acceleration
};

struct IntegratorConfig
{
   double dt = 1e-3;
   double T = 1.0;
   TimeScheme scheme = TimeScheme::newmark_average_acceleration;
   ConvolutionKind convolution = ConvolutionKind::product_integration;
   /// Fold the newest convolution weight into the effective stiffness (true)
   /// or lag it by one step (false).
   bool implicit_lag = true;
   std::size_t max_steps = 10'000'000;
   MLEvalPolicy ml_policy{};

   /// Number of steps covering [0, T].
   std::size_t steps() const;
   /// Throws ValidationError.
   void validate() const;
};

struct EnergySample
{
   double kinetic = 0.0; ///< rho |v|^2
   double elastic = 0.0; ///< (1 - gamma_bar) sum lambda_k d_k^2
   double total = 0.0;
};

/// Row n of d, v, a holds the modal state at times[n].
struct Trajectory
{
   std::vector<double> times;
   Eigen::MatrixXd d;
   Eigen::MatrixXd v;
   Eigen::MatrixXd a;
   std::vector<EnergySample> energy;
   /// Per kernel: row n is the discrete (beta_i * d)(t_n).
   std::vector<Eigen::MatrixXd> memory;

   std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
   std::size_t modes() const { return static_cast<std::size_t>(d.cols()); }

   /// Header `t,d_1..d_m,v_1..v_m,E_kin,E_el,E_tot`, values with 17 significant digits.
   void write_csv(std::ostream &os) const;
};

EnergySample energy(const ModalSystem &sys, const Eigen::Ref<const Eigen::VectorXd> &d,
                    const Eigen::Ref<const Eigen::VectorXd> &v);

/// March the modal Volterra system with Newmark average acceleration
/// (beta = 1/4, gamma = 1/2). Throws NumericalError if the effective matrix
/// is singular, ValidationError on bad input or when max_steps is exceeded.
Trajectory solve(const ModalSystem &sys, const IntegratorConfig &cfg);

struct DataNorms
{
   double u0_V = 0.0;  ///< sqrt(sum lambda d0^2)
   double v0_H = 0.0;  ///< |v0|
   double f_L2 = 0.0;  ///< L2(0, T) norm of the volume channel
   double g_W11 = 0.0; ///< W^1_1(0, T) norm of the surface channel

   double aggregate() const { return u0_V + v0_H + f_L2 + g_W11; }
};

/// Data norms sampled on the trajectory grid (trapezoidal rule, finite
/// differences for the surface channel derivative).
DataNorms data_norms(const ModalSystem &sys, const Trajectory &traj);

struct AprioriReport
{
   double sup_u_V = 0.0;
   double sup_v_H = 0.0;
   double data_aggregate = 0.0;
   /// (sup_u_V + sup_v_H) / data_aggregate; 0 when the data vanish.
   double bound_ratio = 0.0;
   /// sup over [T/2, T] of |u|_V + |v| divided by the sup over [0, T/2].
   double late_growth = 0.0;
   /// max_t E_total(t) / (rho |v0|^2); only meaningful for u0 = 0, F = 0.
   std::optional<double> energy_to_initial_kinetic;
   bool bounded = true;
};

AprioriReport apriori_monitor(const ModalSystem &sys, const Trajectory &traj,
                              const DataNorms &norms, double growth_factor = 10.0);

} // namespace fracvisc

#endif // FRACVISC_INTEGRATOR_HPP
