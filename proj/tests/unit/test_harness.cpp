#include "doctest.h"

#include "fracvisc/errors.hpp"
#include "fracvisc/harness.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fracvisc;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{

const fs::path fixtures{FRACVISC_FIXTURE_DIR};

json fixture(const std::string &name)
{
   std::ifstream in(fixtures / name);
   return json::parse(in);
}

fs::path scratch(const std::string &name)
{
   const fs::path p = fs::temp_directory_path() / ("fracvisc_harness_" + name);
   fs::remove_all(p);
   fs::create_directories(p);
   return p;
}

std::string slurp(const fs::path &p)
{
   std::ifstream in(p, std::ios::binary);
   std::ostringstream os;
   os << in.rdbuf();
   return os.str();
}

} // namespace

TEST_CASE("schema violations are ValidationError")
{
   CHECK_THROWS_AS(parse_config("{"), ValidationError);
   CHECK_THROWS_AS(parse_config("{}"), ValidationError);

   json j = fixture("free_vibration.json");
   j["scenario"] = "relax";
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   j = fixture("free_vibration.json");
   j["unexpected"] = 1;
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   j = fixture("free_vibration.json");
   j["kernels"][0]["alpha"] = 1.5;
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   j = fixture("free_vibration.json");
   j["d0"] = {1.0, 2.0};
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   j = fixture("free_vibration.json");
   j["integrator"]["convolution"] = "simpson";
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   j = fixture("free_vibration.json");
   j["integrator"]["dt"] = "small";
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   j = fixture("convergence_alpha1.json");
   j["convergence"]["dt_list"] = {4e-3, 2e-3, 5e-4};
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   j = fixture("bar_forced.json");
   j["load"]["volume"]["modes"] = {9};
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   j = fixture("bar_forced.json");
   j["load"] = {{"type", "table"}, {"file", "missing.csv"}};
   CHECK_THROWS_AS(parse_config(j.dump()), ValidationError);

   CHECK_THROWS_AS(load_config(fixtures / "does_not_exist.json"), ValidationError);
}

TEST_CASE("bar config with profile and two-channel load")
{
   const SimulationConfig cfg = load_config(fixtures / "bar_forced.json");
   REQUIRE(cfg.system);
   CHECK(cfg.system->modes() == 5);
   CHECK(cfg.system->kernels().size() == 2);
   CHECK(cfg.scenario == Scenario::forced);
   // parabola 0.04 x (1 - x): b_k = 0.16 (1 - (-1)^k) / (k pi)^3
   CHECK(cfg.system->d0()[0] == doctest::Approx(0.32 / std::pow(M_PI, 3)).epsilon(1e-10));
   CHECK(std::abs(cfg.system->d0()[1]) < 1e-14);
   CHECK(cfg.system->load().value(0.0)[1] == 0.0);
   CHECK(cfg.system->load().value(1.0)[1] == doctest::Approx(0.5));
   CHECK(cfg.rng_seed == 11);
}

TEST_CASE("general system with a sample-table load file")
{
   json j = fixture("free_vibration.json");
   j["scenario"] = "forced";
   j["load"] = {{"type", "table"}, {"file", "ramp_load.csv"}};
   const SimulationConfig cfg = parse_config(j.dump(), fixtures);
   CHECK_FALSE(cfg.system->load().transformable());
   CHECK(cfg.system->load().value(0.5)[0] == doctest::Approx(0.5));
}

TEST_CASE("free vibration without memory returns to -d0 at pi")
{
   const fs::path out = scratch("free");
   const RunOutcome r = run(load_config(fixtures / "free_vibration.json"), {out, std::nullopt, true});
   REQUIRE(r.exit_code == exit_ok);
   const json s = json::parse(r.summary);
   CHECK(s["scenario"] == "free_vibration");
   const double d_pi = s["diagnostics"]["undamped_reference"]["d_at_pi"][0];
   CHECK(std::abs(d_pi + 1.0) <= 5e-3);
   CHECK(fs::exists(out / "trajectory.csv"));
   CHECK(s["energy"]["max_total"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("kernel_check reports the L1 gap")
{
   const fs::path out = scratch("kernel");
   const RunOutcome r = run(load_config(fixtures / "kernel_check.json"), {out, std::nullopt, true});
   REQUIRE(r.exit_code == exit_ok);
   const json s = json::parse(r.summary);
   CHECK(s["l1_gap"].get<double>() <= 1e-8);
   CHECK(s["passed"] == true);
}

TEST_CASE("failed diagnostics give exit code 4")
{
   json j = fixture("kernel_check.json");
   j["kernels"] = json::array({{{"gamma", 0.8}, {"tau", 1.0}, {"alpha", 0.5}},
                               {{"gamma", 0.8}, {"tau", 1.0}, {"alpha", 0.5}}});
   j["kernel_check"] = {{"condition_horizon", 1e4}};
   const fs::path out = scratch("kernel_fail");
   const RunOutcome r = run(parse_config(j.dump()), {out, std::nullopt, true});
   CHECK(r.exit_code == exit_diagnostics);
   CHECK(json::parse(r.summary)["diagnostics"]["beta_condition"]["pass"] == false);
   CHECK(fs::exists(out / "summary.json"));
}

TEST_CASE("numerical failures give exit code 3")
{
   json j = fixture("oracle_compare.json");
   j["general"]["lambda"] = {400.0};
   j["integrator"]["T"] = 5.0;
   const RunOutcome r = run(parse_config(j.dump()), {scratch("numerical"), std::nullopt, true});
   CHECK(r.exit_code == exit_numerical);
   CHECK(r.message.find("Talbot") != std::string::npos);
}

TEST_CASE("file entry point maps errors to exit codes")
{
   std::ostringstream log, err;
   CHECK(run(fixtures / "does_not_exist.json", {scratch("entry"), std::nullopt, true}, log, err) ==
         exit_schema);
   CHECK(err.str().find("error:") == 0);
   std::ostringstream log2, err2;
   CHECK(run(fixtures / "kernel_check.json", {scratch("entry2"), std::nullopt, false}, log2, err2) ==
         exit_ok);
   CHECK(log2.str().find("diagnostics passed") != std::string::npos);
}

TEST_CASE("oracle comparison")
{
   const fs::path out = scratch("oracle");
   const RunOutcome r = run(load_config(fixtures / "oracle_compare.json"), {out, std::nullopt, true});
   REQUIRE(r.exit_code == exit_ok);
   const json s = json::parse(r.summary);
   CHECK(s["reference"] == "laplace_oracle");
   CHECK(s["oracle_gap"].get<double>() < 1e-4);
   const std::string csv = slurp(out / "comparison.csv");
   CHECK(csv.rfind("t,d_1,d_oracle_1,abs_gap\n", 0) == 0);
}

TEST_CASE("convergence study orders")
{
   SUBCASE("memory-free Newmark is second order")
   {
      json j = fixture("convergence_alpha1.json");
      j["kernels"][0]["gamma"] = 0.0;
      const SimulationConfig cfg = parse_config(j.dump());
      const ConvergenceResult r = convergence_study(*cfg.system, cfg.integrator, cfg.convergence.dt_list);
      REQUIRE(r.orders.size() == 2);
      CHECK(r.reference == "laplace_oracle");
      CHECK(r.orders[0] == doctest::Approx(2.0).epsilon(0.05));
      CHECK(r.monotone);
   }
   SUBCASE("alpha = 1 through the CLI path")
   {
      const RunOutcome r = run(load_config(fixtures / "convergence_alpha1.json"),
                               {scratch("conv1"), std::nullopt, true});
      REQUIRE(r.exit_code == exit_ok);
      const json s = json::parse(r.summary);
      CHECK(s["reference"] == "finest_grid");
      const double p = s["orders"][0];
      CHECK(p >= 1.8);
      CHECK(p <= 2.2);
   }
   SUBCASE("weakly singular kernel is reported below two")
   {
      const SimulationConfig cfg = load_config(fixtures / "convergence_alpha05.json");
      ConvergenceOptions opts;
      opts.reference = ReferenceKind::oracle;
      const ConvergenceResult r = convergence_study(*cfg.system, cfg.integrator, cfg.convergence.dt_list, opts);
      for (double p : r.orders)
      {
         CHECK(p >= 1.0);
         CHECK(p < 2.0);
      }
   }
   SUBCASE("table loads fall back to the finest grid")
   {
      json j = fixture("convergence_alpha1.json");
      j["load"] = {{"type", "table"}, {"times", {0.0, 1.0}}, {"values", {0.0, 1.0}}};
      j["convergence"]["reference"] = "auto";
      const SimulationConfig cfg = parse_config(j.dump());
      ConvergenceOptions opts;
      const ConvergenceResult r = convergence_study(*cfg.system, cfg.integrator, cfg.convergence.dt_list, opts);
      CHECK(r.reference == "finest_grid");
      CHECK_FALSE(r.note.empty());
      opts.reference = ReferenceKind::oracle;
      CHECK_THROWS_AS(convergence_study(*cfg.system, cfg.integrator, cfg.convergence.dt_list, opts),
                      NumericalError);
   }
}

TEST_CASE("identical config and seed give identical bytes")
{
   const SimulationConfig cfg = load_config(fixtures / "bar_forced.json");
   const fs::path a = scratch("det_a"), b = scratch("det_b");
   REQUIRE(run(cfg, {a, std::nullopt, true}).exit_code == exit_ok);
   REQUIRE(run(cfg, {b, std::nullopt, true}).exit_code == exit_ok);
   for (const char *f : {"trajectory.csv", "summary.json", "weights.csv", "weights_2.csv"})
   {
      CHECK(slurp(a / f) == slurp(b / f));
   }
   const RunOutcome seeded = run(cfg, {scratch("det_c"), std::uint64_t{99}, true});
   CHECK(json::parse(seeded.summary)["rng_seed"] == 99);
}

TEST_CASE("interpolation reproduces grid values")
{
   const SimulationConfig cfg = load_config(fixtures / "free_vibration.json");
   const Trajectory tr = solve(*cfg.system, cfg.integrator);
   CHECK(interpolate_displacement(tr, 0, tr.times[10]) == doctest::Approx(tr.d(10, 0)));
   CHECK(interpolate_displacement(tr, 0, 1.0005) == doctest::Approx(std::cos(1.0005)).epsilon(1e-6));
   CHECK_THROWS_AS(interpolate_displacement(tr, 0, 100.0), DomainError);
}
