#pragma once

#include "pf/diagnostics.hpp"
#include "pf/symbols.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed batch-experiment configuration. The JSON schema is versioned and
// fail-closed: unknown keys are rejected.
struct ExperimentConfig {
  int schema_version = 1;
  std::string metric_tag = "euclidean";
  std::string weight_tag = "const1";
  std::string symbol_preset;           // one of preset/expr set
  std::string symbol_expr;
  std::string window_kind = "wigner";  // bump | wigner | translate
  double window_r = 0.5;
  std::string window_cutoff = "exp_bump";
  std::string window_chi = "gaussian";
  std::optional<double> theta_r = 0.5;  // nullopt: theta == 1
  double grid_half_width = 8.0;
  int grid_points = 256;
  DiagSampleSpec samples;
  int axiom_pairs = 400;
  double axiom_extent = 10.0;
  std::vector<double> ladder = default_ladder();
  double p = 2.0;
  double q = 2.0;
  double s = 2.0;
  std::uint64_t seed = 0x5EED;

  std::string canonical() const;  // deterministic serialization for hashing

  HormanderMetric metric() const;
  AdmissibleWeight weight() const;
  SymbolPreset symbol() const;
  DiagConfig diag_config() const;
  ConfinedFamily family() const;
};

ExperimentConfig parse_config(const nlohmann::ordered_json& j);
ExperimentConfig parse_config_file(const std::string& path);

struct RunOptions {
  std::string out_dir = "out";
  int workers = 1;
  bool selftest = false;
};

// Subcommands: check-metric, windows, gstft, norms, weyl, diag, classify.
// Returns the process exit code (0 ok, 2 config error, 3 numerical failure).
int run(const std::string& subcommand, const ExperimentConfig& config,
        const RunOptions& options);

}  // namespace pf
