#include "fracvisc/harness.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char **argv)
{
   CLI::App app{"Fractional viscoelastic wave solver"};
   app.require_subcommand(1);

   std::string config;
   std::string out_dir = ".";
   std::optional<std::uint64_t> seed;
   bool quiet = false;

   auto *run = app.add_subcommand("run", "Execute a scenario config");
   run->add_option("config", config, "Scenario JSON file")->required();
   run->add_option("--out", out_dir, "Output directory (created if missing)");
   run->add_option("--seed", seed, "Override the config rng_seed");
   run->add_flag("--quiet,-q", quiet, "Only report errors");

   try
   {
      app.parse(argc, argv);
   }
   catch (const CLI::ParseError &e)
   {
      const int code = app.exit(e);
      return code == 0 ? 0 : fracvisc::exit_usage;
   }

   fracvisc::RunOptions opts;
   opts.out_dir = out_dir;
   opts.seed = seed;
   opts.quiet = quiet;
   return fracvisc::run(config, opts, std::cout, std::cerr);
}
