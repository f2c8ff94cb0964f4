#ifndef FRACVISC_HARNESS_HPP
#define FRACVISC_HARNESS_HPP

#include "fracvisc/config.hpp"
#include "fracvisc/integrator.hpp"
#include "fracvisc/laplace_oracle.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracvisc
{

enum ExitCode : int
{
   exit_ok = 0,
   exit_usage = 1,
   exit_schema = 2,
   exit_numerical = 3,
   exit_diagnostics = 4
};

struct RunOptions
{
   std::filesystem::path out_dir = ".";
   std::optional<std::uint64_t> seed;
   bool quiet = false;
};

struct RunOutcome
{
   int exit_code = exit_ok;
   /// Summary document as written to disk (empty if the run aborted).
   std::string summary;
   std::vector<std::filesystem::path> written;
   /// Error text for exit codes 2 and 3.
   std::string message;
};

/// Execute a parsed config and write its artifacts under opts.out_dir.
/// Numerical failures are reported through the exit code, not thrown.
RunOutcome run(const SimulationConfig &cfg, const RunOptions &opts = {});

/// Load, validate and execute a config file. Progress goes to `log` unless
/// quiet; errors always go to `err`.
int run(const std::filesystem::path &config_path, const RunOptions &opts, std::ostream &log,
        std::ostream &err);

/// Talbot M large enough that the contour encloses the poles up to t_max
/// with the default margin, or nullopt when that exceeds `cap`.
std::optional<int> talbot_points_for(const ModalSystem &sys, double t_max, int requested,
                                     int cap = 64);

struct ConvergenceResult
{
   std::vector<double> dt_list;
   /// "laplace_oracle" or "finest_grid".
   std::string reference;
   /// Oracle reference: sup error of every run. Finest-grid reference:
   /// sup difference between consecutive runs (one fewer entry).
   std::vector<double> errors;
   /// log(e_i / e_{i+1}) / log(dt_i / dt_{i+1}) on `errors`.
   std::vector<double> orders;
   /// Self-convergence order of every consecutive triple of runs.
   std::vector<double> richardson_orders;
   bool monotone = true;
   /// Present when the oracle was requested but could not be used.
   std::string note;
   /// Trajectory of the finest run.
   Trajectory finest;
};

struct ConvergenceOptions
{
   ReferenceKind reference = ReferenceKind::automatic;
   /// Errors measured on [window_start * T, T].
   double window_start = 0.0;
   OracleSettings oracle{};
   /// Cap on the number of comparison times per run (evenly strided).
   std::size_t max_samples = 400;
};

/// Runs `base` at every dt and measures errors on the coarsest grid. dt_list
/// must decrease geometrically with an integer ratio. A non-monotone error
/// sequence is flagged in `monotone`, never thrown.
ConvergenceResult convergence_study(const ModalSystem &sys, const IntegratorConfig &base,
                                    const std::vector<double> &dt_list,
                                    const ConvergenceOptions &opts = {});

struct OracleComparison
{
   std::vector<double> times;
   Eigen::MatrixXd stepper; ///< row per time
   Eigen::MatrixXd oracle;
   /// max |stepper - oracle| / max |oracle| over the samples.
   double relative_gap = 0.0;
   double absolute_gap = 0.0;
   int talbot_M = 0;
};

/// Samples `traj` at `samples` evenly spaced grid times in [window_start T, T]
/// and compares with the Talbot-inverted transform solution.
OracleComparison compare_with_oracle(const ModalSystem &sys, const Trajectory &traj,
                                     const OracleSettings &settings);

/// Cubic Hermite interpolation of mode k of the trajectory at time t.
double interpolate_displacement(const Trajectory &traj, std::size_t mode, double t);

} // namespace fracvisc

#endif // FRACVISC_HARNESS_HPP
