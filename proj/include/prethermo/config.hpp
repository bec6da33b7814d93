#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace prethermo {

/// Flat key = value file. `#` starts a comment, blank lines are skipped,
/// later assignments win.
std::map<std::string, std::string> parse_key_value_file(const std::string& path);
std::map<std::string, std::string> parse_key_value_text(const std::string& text);

struct ExperimentConfig {
  std::string experiment = "dynamics";

  // Probe (defaults: nu = 1, beta nu = 4, beta_A nu = 2.5, delta = 1e-4 nu,
  // gamma = 0.07).
  std::string probe = "v";  // v | qubit
  double nu = 1.0;
  double delta = 1e-4;
  double gamma = 0.07;
  double beta = 4.0;
  double beta_ambient = 2.5;

  // Initial condition: ground | mixed | ambient | custom | all.
  std::string init = "all";
  double p2 = 0.0, p3 = 0.0, a = 0.0, b = 0.0, sigma0R = 0.0;

  // Log time grid.
  double t_start = 1e-2;
  double t_stop = 1e9;
  std::size_t t_points = 200;

  // Linear beta grid.
  double beta_start = 2.0;
  double beta_stop = 6.0;
  std::size_t beta_points = 41;

  // N-level runs.
  std::vector<long long> n_list = {2, 3, 4};
  double spread = 1e-4;                    // excited-manifold stagger
  std::string variant = "unified";         // unified | full_secular | nonsecular
  double cluster_tol = 0.0;                // 0 -> 100 * max(delta, spread)
  double fd_step = 0.0;                    // 0 -> 1e-5 * beta

  // Sampling runs.
  std::size_t samples = 200000;
  std::uint64_t seed = 20260823;
  bool grid_mode = false;
  std::size_t grid_bins = 60;

  // Output and execution.
  std::string out_dir = "out";
  bool plots = false;
  unsigned threads = 1;
  double gap_threshold = 100.0;
};

/// Applies `values` on top of `cfg` in place. Unknown keys and malformed
/// numbers are collected and reported as one aggregated ConfigError.
void apply_config(ExperimentConfig& cfg, const std::map<std::string, std::string>& values);

/// Re-checks the physical and grid invariants; throws one aggregated
/// ConfigError listing every violation.
void validate_config(const ExperimentConfig& cfg);

/// Serializes the full config as a reloadable key = value manifest, with the
/// artifact version and generated file list recorded as comments.
std::string manifest_text(const ExperimentConfig& cfg,
                          const std::vector<std::string>& outputs);
void write_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& outputs);

extern const char* const kArtifactVersion;

}  // namespace prethermo
