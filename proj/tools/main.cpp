#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "mfglab/commands.hpp"
#include "mfglab/config.hpp"
#include "mfglab/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stationary mean-field games with Riesz aggregation"};
  app.require_subcommand(0, 1);
  std::string config_path, out_dir = "mfglab_out";
  std::uint64_t seed = 0;
  bool show_keys = false;
  app.add_flag("--config-keys", show_keys, "Print the accepted configuration keys and exit");

  const char* help[] = {"One MFG solve", "Vanishing-viscosity sweep over the epsilon ladder",
                        "Hopf-Cole (Choquard) oracle solve, gamma = 2 only",
                        "Frame-change check on stored or fresh fields", "Acceptance battery"};
  const char* names[] = {"solve", "sweep", "choquard", "rescale", "verify"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "Configuration file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Seed for randomized property suites");
  }
  CLI11_PARSE(app, argc, argv);

  if (show_keys) {
    std::cout << mfglab::config_reference();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return mfglab::kExitConfig;
  }
  CLI::App* sub = app.get_subcommands().front();
  const auto cmd = mfglab::parse_command(sub->get_name());

  mfglab::RunConfig cfg;
  try {
    cfg = config_path.empty() ? mfglab::parse_config("") : mfglab::load_config(config_path);
  } catch (const mfglab::Error& e) {
    std::cout << "FAIL config: " << e.what() << "\n";
    return mfglab::kExitConfig;
  }
  if (sub->count("--seed")) cfg.seed = seed;
  return mfglab::run_command(*cmd, cfg, out_dir, std::cout);
}
