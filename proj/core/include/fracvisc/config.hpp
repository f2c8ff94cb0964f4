#ifndef FRACVISC_CONFIG_HPP
#define FRACVISC_CONFIG_HPP

#include "fracvisc/integrator.hpp"
#include "fracvisc/modal_system.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracvisc
{

enum class Scenario
{
   relaxation,
   free_vibration,
   forced,
   convergence_study,
   kernel_check,
   oracle_compare
};

std::string_view to_string(Scenario s);
/// Throws ValidationError for unknown names.
Scenario scenario_from_string(std::string_view name);

enum class ReferenceKind
{
   automatic, ///< oracle when the load is transformable, else finest grid
   oracle,
   finest_grid
};

struct OutputPaths
{
   std::string trajectory_csv = "trajectory.csv";
   std::string summary_json = "summary.json";
   /// Written by oracle_compare only.
   std::string comparison_csv = "comparison.csv";
   /// Optional weight table of the first kernel; empty disables it.
   std::string weights_csv;
};

struct ConvergenceSettings
{
   std::vector<double> dt_list;
   ReferenceKind reference = ReferenceKind::automatic;
   /// Errors are measured on [window_start * T, T].
   double window_start = 0.0;
};

struct KernelCheckSettings
{
   /// Horizon of the L1 check as a multiple of tau.
   double l1_horizon = 10.0;
   double l1_tol = 1e-8;
   double laplace_tol = 1e-6;
   std::size_t positive_type_trials = 200;
   std::size_t grid_points = 64;
   /// Grid spacing as a multiple of tau.
   double grid_dt = 0.05;
   double monotonicity_tol = 1e-8;
   /// Horizon of beta_condition as a multiple of the largest tau.
   double condition_horizon = 100.0;
};

struct OracleSettings
{
   int talbot_M = 32;
   std::size_t samples = 50;
   /// Comparison window [window_start * T, T].
   double window_start = 0.1;
   /// Relative sup gap accepted by oracle_compare.
   double tol = 1e-3;
};

struct SimulationConfig
{
   Scenario scenario = Scenario::free_vibration;
   /// Absent only for kernel_check configs without a system block.
   std::optional<ModalSystem> system;
   std::vector<KernelParams> kernels;
   IntegratorConfig integrator;
   OutputPaths outputs;
   std::uint64_t rng_seed = 0;
   ConvergenceSettings convergence;
   KernelCheckSettings kernel_check;
   OracleSettings oracle;
};

/// Parse and validate a JSON config document. Relative table files are
/// resolved against `base_dir`. Throws ValidationError on any schema or
/// range violation.
SimulationConfig parse_config(std::string_view json_text,
                              const std::filesystem::path &base_dir = {});

/// Read and parse a config file. Throws ValidationError if unreadable.
SimulationConfig load_config(const std::filesystem::path &path);

} // namespace fracvisc

#endif // FRACVISC_CONFIG_HPP
