#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "railbeam/agents.hpp"
#include "railbeam/env.hpp"

// Experiment configuration: scenario physics, the two panels, agent
// hyperparameters, seeds and output locations. Every key is optional;
// an empty file reproduces the reference scenario.
namespace railbeam {

struct DatabaseConfig {
  int candidates = 5;          // D_C
  double utilization_prob = 0.9; // P_1
  int cycles = 300;            // M
};

struct OracleConfig {
  double step_deg = 1.0;
  std::uint64_t max_points = 400000000ull;
  unsigned threads = 0; // 0 = hardware concurrency
};

struct EnvConfig {
  double sigma_b_deg = 3.0;
  BeamDirection benchmark_beam{0.0, 0.0}; // (theta_F, phi_F), also the FBA beam
  BeamDirection tx_beam{0.0, 0.0};
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  PanelConfig rrh_panel;
  PanelConfig mr_panel;
  bool rrh_orientation_overridden = false;
  bool mr_orientation_overridden = false;
  SteeringLimits steering;
  EnvConfig env;
  DqnHyper dqn;
  QlHyper qlearning;
  double gamma_greedy_bin_radius_m = 0.5; // 2*sigma_D = 1 m for this baseline
  DatabaseConfig database;
  OracleConfig oracle;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string output_dir = "out";

  void validate() const;

  /// Scenario with the finer bins the greedy baseline runs on.
  ScenarioConfig gamma_greedy_scenario() const;
};

/// Built-in defaults (reference scenario, default panel orientations).
ExperimentConfig default_config();

/// Loads a JSON config, applying defaults for absent keys. Unknown keys
/// and malformed values are reported with their path. Panel orientations
/// default to the scenario-derived mounting unless given explicitly.
ExperimentConfig load_config(const std::string& path);

/// Parse from an in-memory JSON string (empty string = all defaults).
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& origin = "<inline>");

/// Canonical JSON rendering of the effective config.
std::string config_json(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical rendering, as fixed-width hex.
std::string config_hash(const ExperimentConfig& cfg);

/// Environment assembled from the config pieces.
BeamEnv make_env(const ExperimentConfig& cfg);

/// Environment over the gamma-greedy (finer-bin) scenario.
BeamEnv make_gamma_env(const ExperimentConfig& cfg);

} // namespace railbeam
