#include "fracvisc/config.hpp"

#include "fracvisc/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace fracvisc
{

namespace
{

using json = nlohmann::json;

[[noreturn]] void fail(const std::string &where, const std::string &what)
{
   throw ValidationError("config: " + where + ": " + what);
}

void allow_keys(const json &obj, const std::string &where, std::initializer_list<const char *> keys)
{
   if (!obj.is_object()) { fail(where, "expected an object"); }
   const std::set<std::string> allowed(keys.begin(), keys.end());
   for (const auto &item : obj.items())
   {
      if (!allowed.count(item.key())) { fail(where, "unknown key '" + item.key() + "'"); }
   }
}

double number(const json &obj, const char *key, const std::string &where)
{
   if (!obj.contains(key)) { fail(where, std::string("missing '") + key + "'"); }
   const json &v = obj.at(key);
   if (!v.is_number()) { fail(where, std::string("'") + key + "' must be a number"); }
   const double x = v.get<double>();
   if (!std::isfinite(x)) { fail(where, std::string("'") + key + "' must be finite"); }
   return x;
}

double number_or(const json &obj, const char *key, double fallback, const std::string &where)
{
   return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::size_t count_or(const json &obj, const char *key, std::size_t fallback,
                     const std::string &where)
{
   if (!obj.contains(key)) { return fallback; }
   const json &v = obj.at(key);
   if (!v.is_number_integer() || v.get<long long>() < 0)
   {
      fail(where, std::string("'") + key + "' must be a non-negative integer");
   }
   return v.get<std::size_t>();
}

std::string string_or(const json &obj, const char *key, const std::string &fallback,
                      const std::string &where)
{
   if (!obj.contains(key)) { return fallback; }
   if (!obj.at(key).is_string()) { fail(where, std::string("'") + key + "' must be a string"); }
   return obj.at(key).get<std::string>();
}

std::vector<double> number_array(const json &v, const std::string &where)
{
   if (!v.is_array()) { fail(where, "expected an array of numbers"); }
   std::vector<double> out;
   out.reserve(v.size());
   for (const auto &x : v)
   {
      if (!x.is_number() || !std::isfinite(x.get<double>()))
      {
         fail(where, "expected finite numbers");
      }
      out.push_back(x.get<double>());
   }
   return out;
}

Eigen::VectorXd vector_of(const json &v, const std::string &where)
{
   const auto xs = number_array(v, where);
   return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Eigen::MatrixXd matrix_of(const json &v, std::size_t m, const std::string &where)
{
   if (!v.is_array() || v.size() != m) { fail(where, "expected " + std::to_string(m) + " rows"); }
   Eigen::MatrixXd out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
   for (std::size_t r = 0; r < m; ++r)
   {
      const auto row = number_array(v[r], where);
      if (row.size() != m) { fail(where, "row " + std::to_string(r) + " has wrong length"); }
      for (std::size_t c = 0; c < m; ++c)
      {
         out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
      }
   }
   return out;
}

KernelParams kernel_of(const json &v, const std::string &where)
{
   allow_keys(v, where, {"gamma", "tau", "alpha"});
   const double gamma = number(v, "gamma", where);
   const double tau = number(v, "tau", where);
   const double alpha = number(v, "alpha", where);
   try
   {
      // gamma = 0 is accepted to switch the memory off
      return gamma == 0.0 ? KernelParams::unchecked_strength(gamma, tau, alpha)
                          : KernelParams(gamma, tau, alpha);
   }
   catch (const ValidationError &e)
   {
      fail(where, e.what());
   }
}

LoadDescriptor descriptor_of(const json &v, const std::string &where,
                             const std::filesystem::path &base_dir)
{
   if (!v.is_object() || !v.contains("type") || !v.at("type").is_string())
   {
      fail(where, "load descriptor needs a string 'type'");
   }
   const std::string type = v.at("type").get<std::string>();
   try
   {
      if (type == "zero")
      {
         allow_keys(v, where, {"type", "modes"});
         return LoadDescriptor(load::Zero{});
      }
      if (type == "constant")
      {
         allow_keys(v, where, {"type", "modes", "c"});
         return LoadDescriptor(load::Constant{number(v, "c", where)});
      }
      if (type == "step")
      {
         allow_keys(v, where, {"type", "modes", "c", "t_on"});
         return LoadDescriptor(
            load::Step{number(v, "c", where), number_or(v, "t_on", 0.0, where)});
      }
      if (type == "sinusoid")
      {
         allow_keys(v, where, {"type", "modes", "amplitude", "omega", "phase"});
         return LoadDescriptor(load::Sinusoid{number(v, "amplitude", where),
                                              number(v, "omega", where),
                                              number_or(v, "phase", 0.0, where)});
      }
      if (type == "exponential")
      {
         allow_keys(v, where, {"type", "modes", "amplitude", "rate"});
         return LoadDescriptor(
            load::Exponential{number(v, "amplitude", where), number(v, "rate", where)});
      }
      if (type == "table")
      {
         allow_keys(v, where, {"type", "modes", "times", "values", "file"});
         load::Table table;
         if (v.contains("file"))
         {
            if (v.contains("times") || v.contains("values"))
            {
               fail(where, "give either 'file' or 'times'/'values'");
            }
            const std::filesystem::path file = base_dir / v.at("file").get<std::string>();
            std::ifstream in(file);
            if (!in) { fail(where, "cannot open table file " + file.string()); }
            std::string line;
            while (std::getline(in, line))
            {
               if (line.empty() || line[0] == '#') { continue; }
               for (char &ch : line)
               {
                  if (ch == ',') { ch = ' '; }
               }
               std::istringstream row(line);
               double t = 0.0, y = 0.0;
               if (!(row >> t >> y))
               {
                  // header line
                  if (table.times.empty()) { continue; }
                  fail(where, "malformed row in " + file.string());
               }
               table.times.push_back(t);
               table.values.push_back(y);
            }
         }
         else
         {
            if (!v.contains("times") || !v.contains("values"))
            {
               fail(where, "table needs 'times' and 'values' or 'file'");
            }
            table.times = number_array(v.at("times"), where + ".times");
            table.values = number_array(v.at("values"), where + ".values");
         }
         return LoadDescriptor(std::move(table));
      }
   }
   catch (const ValidationError &e)
   {
      const std::string msg = e.what();
      if (msg.rfind("config:", 0) == 0) { throw; }
      fail(where, msg);
   }
   fail(where, "unknown load type '" + type + "'");
}

// A channel is either an array of per-mode descriptors or one descriptor
// applied to the (1-based) "modes" it lists, all modes by default.
std::vector<LoadDescriptor> channel_of(const json &v, std::size_t m, const std::string &where,
                                       const std::filesystem::path &base_dir)
{
   std::vector<LoadDescriptor> out(m);
   if (v.is_array())
   {
      if (v.size() > m) { fail(where, "more descriptors than modes"); }
      for (std::size_t k = 0; k < v.size(); ++k)
      {
         out[k] = descriptor_of(v[k], where + "[" + std::to_string(k) + "]", base_dir);
      }
      return out;
   }
   const LoadDescriptor d = descriptor_of(v, where, base_dir);
   if (v.contains("modes"))
   {
      for (const auto &idx : v.at("modes"))
      {
         if (!idx.is_number_integer() || idx.get<long long>() < 1 ||
             idx.get<std::size_t>() > m)
         {
            fail(where, "'modes' entries must be integers in [1, " + std::to_string(m) + "]");
         }
         out[idx.get<std::size_t>() - 1] = d;
      }
   }
   else
   {
      std::fill(out.begin(), out.end(), d);
   }
   return out;
}

LoadSignal load_of(const json &root, std::size_t m, const std::filesystem::path &base_dir)
{
   if (!root.contains("load")) { return LoadSignal::zero(m); }
   const json &v = root.at("load");
   if (v.is_object() && !v.contains("type"))
   {
      allow_keys(v, "load", {"volume", "surface"});
      std::vector<LoadDescriptor> vol(m), surf(m);
      if (v.contains("volume")) { vol = channel_of(v.at("volume"), m, "load.volume", base_dir); }
      if (v.contains("surface"))
      {
         surf = channel_of(v.at("surface"), m, "load.surface", base_dir);
      }
      return LoadSignal(std::move(vol), std::move(surf));
   }
   return LoadSignal(channel_of(v, m, "load", base_dir), std::vector<LoadDescriptor>(m));
}

// Initial displacement or velocity: an explicit modal vector, or a profile on
// the bar projected onto the sine basis.
Eigen::VectorXd initial_of(const json &root, const char *key, const char *profile_key,
                           std::size_t m, const std::optional<SineBasis> &basis)
{
   const bool has_vec = root.contains(key);
   const bool has_profile = root.contains(profile_key);
   if (has_vec && has_profile)
   {
      fail(key, std::string("give either '") + key + "' or '" + profile_key + "'");
   }
   if (has_vec)
   {
      Eigen::VectorXd v = vector_of(root.at(key), key);
      if (static_cast<std::size_t>(v.size()) != m)
      {
         fail(key, "length " + std::to_string(v.size()) + " differs from mode count " +
                      std::to_string(m));
      }
      return v;
   }
   if (!has_profile) { return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m)); }
   if (!basis) { fail(profile_key, "profiles require a 'bar' system"); }

   const json &p = root.at(profile_key);
   const std::string where = profile_key;
   if (!p.is_object() || !p.contains("type") || !p.at("type").is_string())
   {
      fail(where, "profile needs a string 'type'");
   }
   const std::string type = p.at("type").get<std::string>();
   const double L = basis->length;
   std::function<double(double)> f;
   if (type == "sine_mode")
   {
      allow_keys(p, where, {"type", "mode", "amplitude"});
      const double k = static_cast<double>(count_or(p, "mode", 1, where));
      const double A = number(p, "amplitude", where);
      f = [=](double x) { return A * std::sin(k * std::numbers::pi * x / L); };
   }
   else if (type == "parabola")
   {
      allow_keys(p, where, {"type", "amplitude"});
      const double A = number(p, "amplitude", where);
      f = [=](double x) { return A * 4.0 * x * (L - x) / (L * L); };
   }
   else if (type == "plucked")
   {
      allow_keys(p, where, {"type", "amplitude", "peak"});
      const double A = number(p, "amplitude", where);
      const double x0 = number(p, "peak", where);
      if (!(x0 > 0.0 && x0 < L)) { fail(where, "'peak' must lie inside the bar"); }
      f = [=](double x) { return x <= x0 ? A * x / x0 : A * (L - x) / (L - x0); };
   }
   else
   {
      fail(where, "unknown profile type '" + type + "'");
   }
   auto zero = [](double) { return 0.0; };
   return project_initial(f, zero, *basis).first;
}

IntegratorConfig integrator_of(const json &root)
{
   IntegratorConfig cfg;
   if (!root.contains("integrator")) { fail("integrator", "missing"); }
   const json &v = root.at("integrator");
   allow_keys(v, "integrator", {"dt", "T", "convolution", "implicit_lag", "max_steps", "scheme"});
   cfg.dt = number(v, "dt", "integrator");
   cfg.T = number(v, "T", "integrator");
   const std::string scheme = string_or(v, "scheme", "newmark_average_acceleration", "integrator");
   if (scheme != "newmark_average_acceleration")
   {
      fail("integrator", "unknown scheme '" + scheme + "'");
   }
   try
   {
      cfg.convolution = convolution_kind_from_string(
         string_or(v, "convolution", "product_integration", "integrator"));
   }
   catch (const ValidationError &e)
   {
      fail("integrator", e.what());
   }
   if (v.contains("implicit_lag"))
   {
      if (!v.at("implicit_lag").is_boolean()) { fail("integrator", "'implicit_lag' must be a bool"); }
      cfg.implicit_lag = v.at("implicit_lag").get<bool>();
   }
   cfg.max_steps = count_or(v, "max_steps", cfg.max_steps, "integrator");
   try
   {
      cfg.validate();
   }
   catch (const ValidationError &e)
   {
      fail("integrator", e.what());
   }
   return cfg;
}

std::optional<ModalSystem> system_of(const json &root, const std::vector<KernelParams> &kernels,
                                     const std::filesystem::path &base_dir)
{
   const bool has_bar = root.contains("bar");
   const bool has_general = root.contains("general");
   if (has_bar && has_general) { fail("system", "give either 'bar' or 'general'"); }
   if (!has_bar && !has_general) { return std::nullopt; }

   const double rho = number_or(root, "rho", 1.0, "rho");
   if (!(rho > 0.0)) { fail("rho", "must be positive"); }

   try
   {
      if (has_bar)
      {
         const json &b = root.at("bar");
         allow_keys(b, "bar", {"n_modes", "length", "c2", "normalization"});
         BarSpec spec;
         spec.n_modes = count_or(b, "n_modes", 1, "bar");
         spec.length = number_or(b, "length", 1.0, "bar");
         spec.wave_modulus = number_or(b, "c2", 1.0, "bar");
         if (spec.n_modes == 0) { fail("bar", "'n_modes' must be >= 1"); }
         if (!(spec.length > 0.0) || !(spec.wave_modulus > 0.0))
         {
            fail("bar", "'length' and 'c2' must be positive");
         }
         const std::string norm = string_or(b, "normalization", "sine_amplitude", "bar");
         SineBasis basis{spec.n_modes, spec.length, SineNormalization::sine_amplitude};
         if (norm == "orthonormal") { basis.normalization = SineNormalization::orthonormal; }
         else if (norm != "sine_amplitude") { fail("bar", "unknown normalization '" + norm + "'"); }

         spec.rho = rho;
         spec.kernels = kernels;
         if (root.contains("kernel_split"))
         {
            const auto split = number_array(root.at("kernel_split"), "kernel_split");
            if (split.size() != 2) { fail("kernel_split", "expected [c1, c2]"); }
            spec.kernel_split = {split[0], split[1]};
         }
         else if (kernels.size() == 2)
         {
            spec.kernel_split = {0.5, 0.5};
         }
         spec.load = load_of(root, spec.n_modes, base_dir);
         spec.d0 = initial_of(root, "d0", "u0_profile", spec.n_modes, basis);
         spec.v0 = initial_of(root, "v0", "v0_profile", spec.n_modes, basis);
         return assemble_bar(spec);
      }

      const json &g = root.at("general");
      allow_keys(g, "general", {"lambda", "B1", "B2"});
      if (!g.contains("lambda") || !g.contains("B1")) { fail("general", "needs 'lambda' and 'B1'"); }
      Eigen::VectorXd lambda = vector_of(g.at("lambda"), "general.lambda");
      const auto m = static_cast<std::size_t>(lambda.size());
      if (m == 0) { fail("general", "'lambda' must be non-empty"); }
      if (root.contains("kernel_split")) { fail("kernel_split", "only valid for 'bar' systems"); }
      std::vector<Eigen::MatrixXd> couplings{matrix_of(g.at("B1"), m, "general.B1")};
      if (g.contains("B2")) { couplings.push_back(matrix_of(g.at("B2"), m, "general.B2")); }
      if (couplings.size() != kernels.size())
      {
         fail("general", "one coupling matrix per kernel is required");
      }
      return assemble_general(rho, std::move(lambda), std::move(couplings), kernels,
                              load_of(root, m, base_dir),
                              initial_of(root, "d0", "u0_profile", m, std::nullopt),
                              initial_of(root, "v0", "v0_profile", m, std::nullopt));
   }
   catch (const ValidationError &e)
   {
      const std::string msg = e.what();
      if (msg.rfind("config:", 0) == 0) { throw; }
      fail("system", msg);
   }
}

} // namespace

std::string_view to_string(Scenario s)
{
   switch (s)
   {
      case Scenario::relaxation: return "relaxation";
      case Scenario::free_vibration: return "free_vibration";
      case Scenario::forced: return "forced";
      case Scenario::convergence_study: return "convergence_study";
      case Scenario::kernel_check: return "kernel_check";
      case Scenario::oracle_compare: return "oracle_compare";
   }
   return "unknown";
}

Scenario scenario_from_string(std::string_view name)
{
   for (auto s : {Scenario::relaxation, Scenario::free_vibration, Scenario::forced,
                  Scenario::convergence_study, Scenario::kernel_check, Scenario::oracle_compare})
   {
      if (name == to_string(s)) { return s; }
   }
   throw ValidationError("config: unknown scenario '" + std::string(name) + "'");
}

namespace
{

SimulationConfig parse_root(const json &root, const std::filesystem::path &base_dir)
{
   allow_keys(root, "root",
              {"scenario", "rho", "bar", "general", "kernels", "kernel_split", "load", "d0", "v0",
               "u0_profile", "v0_profile", "integrator", "outputs", "rng_seed", "convergence",
               "kernel_check", "oracle", "description"});

   SimulationConfig cfg;
   if (!root.contains("scenario") || !root.at("scenario").is_string())
   {
      fail("scenario", "missing or not a string");
   }
   cfg.scenario = scenario_from_string(root.at("scenario").get<std::string>());

   if (!root.contains("kernels") || !root.at("kernels").is_array() ||
       root.at("kernels").empty() || root.at("kernels").size() > 2)
   {
      fail("kernels", "expected an array of one or two kernels");
   }
   for (std::size_t i = 0; i < root.at("kernels").size(); ++i)
   {
      cfg.kernels.push_back(kernel_of(root.at("kernels")[i], "kernels[" + std::to_string(i) + "]"));
   }

   if (root.contains("rng_seed"))
   {
      const json &s = root.at("rng_seed");
      if (!s.is_number_unsigned()) { fail("rng_seed", "must be a non-negative integer"); }
      cfg.rng_seed = s.get<std::uint64_t>();
   }

   if (root.contains("outputs"))
   {
      const json &o = root.at("outputs");
      allow_keys(o, "outputs", {"trajectory_csv", "summary_json", "comparison_csv", "weights_csv"});
      cfg.outputs.trajectory_csv = string_or(o, "trajectory_csv", cfg.outputs.trajectory_csv, "outputs");
      cfg.outputs.summary_json = string_or(o, "summary_json", cfg.outputs.summary_json, "outputs");
      cfg.outputs.comparison_csv = string_or(o, "comparison_csv", cfg.outputs.comparison_csv, "outputs");
      cfg.outputs.weights_csv = string_or(o, "weights_csv", "", "outputs");
   }

   if (root.contains("kernel_check"))
   {
      const json &k = root.at("kernel_check");
      auto &s = cfg.kernel_check;
      allow_keys(k, "kernel_check",
                 {"l1_horizon", "l1_tol", "laplace_tol", "positive_type_trials", "grid_points",
                  "grid_dt", "monotonicity_tol", "condition_horizon"});
      s.l1_horizon = number_or(k, "l1_horizon", s.l1_horizon, "kernel_check");
      s.l1_tol = number_or(k, "l1_tol", s.l1_tol, "kernel_check");
      s.laplace_tol = number_or(k, "laplace_tol", s.laplace_tol, "kernel_check");
      s.positive_type_trials = count_or(k, "positive_type_trials", s.positive_type_trials, "kernel_check");
      s.grid_points = count_or(k, "grid_points", s.grid_points, "kernel_check");
      s.grid_dt = number_or(k, "grid_dt", s.grid_dt, "kernel_check");
      s.monotonicity_tol = number_or(k, "monotonicity_tol", s.monotonicity_tol, "kernel_check");
      s.condition_horizon = number_or(k, "condition_horizon", s.condition_horizon, "kernel_check");
      if (!(s.l1_horizon > 0.0) || !(s.grid_dt > 0.0) || !(s.condition_horizon > 0.0) ||
          s.grid_points < 9 || s.positive_type_trials == 0)
      {
         fail("kernel_check", "horizons and grid_dt must be positive, grid_points >= 9, trials >= 1");
      }
   }

   if (root.contains("oracle"))
   {
      const json &o = root.at("oracle");
      auto &s = cfg.oracle;
      allow_keys(o, "oracle", {"talbot_M", "samples", "window_start", "tol"});
      s.talbot_M = static_cast<int>(count_or(o, "talbot_M", 32, "oracle"));
      s.samples = count_or(o, "samples", s.samples, "oracle");
      s.window_start = number_or(o, "window_start", s.window_start, "oracle");
      s.tol = number_or(o, "tol", s.tol, "oracle");
      if (s.talbot_M < 16 || s.talbot_M > 128) { fail("oracle", "'talbot_M' must lie in [16, 128]"); }
      if (s.samples < 2 || !(s.window_start > 0.0 && s.window_start < 1.0) || !(s.tol > 0.0))
      {
         fail("oracle", "need samples >= 2, window_start in (0, 1), tol > 0");
      }
   }

   cfg.system = system_of(root, cfg.kernels, base_dir);
   if (cfg.scenario != Scenario::kernel_check)
   {
      if (!cfg.system) { fail("system", "a 'bar' or 'general' block is required"); }
      cfg.integrator = integrator_of(root);
   }
   else if (root.contains("integrator"))
   {
      cfg.integrator = integrator_of(root);
   }

   if (root.contains("convergence"))
   {
      const json &c = root.at("convergence");
      allow_keys(c, "convergence", {"dt_list", "reference", "window_start"});
      if (c.contains("dt_list"))
      {
         cfg.convergence.dt_list = number_array(c.at("dt_list"), "convergence.dt_list");
      }
      const std::string ref = string_or(c, "reference", "auto", "convergence");
      if (ref == "auto") { cfg.convergence.reference = ReferenceKind::automatic; }
      else if (ref == "oracle") { cfg.convergence.reference = ReferenceKind::oracle; }
      else if (ref == "finest_grid") { cfg.convergence.reference = ReferenceKind::finest_grid; }
      else { fail("convergence", "unknown reference '" + ref + "'"); }
      cfg.convergence.window_start =
         number_or(c, "window_start", cfg.convergence.window_start, "convergence");
      if (!(cfg.convergence.window_start >= 0.0 && cfg.convergence.window_start < 1.0))
      {
         fail("convergence", "'window_start' must lie in [0, 1)");
      }
   }
   if (cfg.scenario == Scenario::convergence_study)
   {
      const auto &dts = cfg.convergence.dt_list;
      if (dts.size() < 3) { fail("convergence", "at least three dt values are required"); }
      for (std::size_t i = 0; i < dts.size(); ++i)
      {
         if (!(dts[i] > 0.0)) { fail("convergence", "dt values must be positive"); }
         if (i > 0 && !(dts[i] < dts[i - 1]))
         {
            fail("convergence", "dt values must be strictly decreasing");
         }
      }
      const double q = dts[0] / dts[1];
      for (std::size_t i = 1; i + 1 < dts.size(); ++i)
      {
         if (std::abs(dts[i] / dts[i + 1] - q) > 1e-9 * q)
         {
            fail("convergence", "dt values must form a geometric progression");
         }
      }
      if (std::abs(q - std::round(q)) > 1e-9)
      {
         fail("convergence", "the dt ratio must be an integer so grids nest");
      }
   }
   return cfg;
}

} // namespace

SimulationConfig parse_config(std::string_view json_text, const std::filesystem::path &base_dir)
{
   json root;
   try
   {
      root = json::parse(json_text);
   }
   catch (const json::parse_error &e)
   {
      throw ValidationError(std::string("config: malformed JSON: ") + e.what());
   }
   try
   {
      return parse_root(root, base_dir);
   }
   catch (const json::exception &e)
   {
      throw ValidationError(std::string("config: ") + e.what());
   }
}

SimulationConfig load_config(const std::filesystem::path &path)
{
   std::ifstream in(path, std::ios::binary);
   if (!in) { throw ValidationError("config: cannot read " + path.string()); }
   std::ostringstream buf;
   buf << in.rdbuf();
   return parse_config(buf.str(), path.parent_path());
}

} // namespace fracvisc
