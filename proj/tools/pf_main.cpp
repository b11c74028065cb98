// pf: batch front-end for the phase-space toolkit.

#include "pf/runner.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"phase-space analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
  if (const char* env = std::getenv("PF_WORKERS")) workers = std::atoi(env);

  const std::vector<std::string> names = {"check-metric", "windows", "gstft", "norms",
                                          "weyl",         "diag",    "classify"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "override config seed")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->add_option("--workers", workers, "worker pool size");
    if (name == "gstft") sub->add_flag("--selftest", "run the identity self-test suite");
  }

  CLI11_PARSE(app, argc, argv);
  const auto* sub = app.get_subcommands().front();

  pf::ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      config = pf::parse_config_file(config_path);
    } else if (sub->get_name() != "gstft") {
      std::cerr << "error: --config is required for subcommand '" << sub->get_name()
                << "'\n";
      return 2;
    }
    if (seed_set) config.seed = seed;
  } catch (const pf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  pf::RunOptions options;
  options.out_dir = out_dir;
  options.workers = workers;
  options.selftest = sub->get_name() == "gstft" && sub->count("--selftest") > 0;
  return pf::run(sub->get_name(), config, options);
}
