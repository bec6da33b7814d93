#pragma once

#include <string>
#include <vector>

#include "prethermo/config.hpp"

namespace prethermo {

/// Experiment pipelines behind the CLI subcommands. Each writes its CSV files
/// (and optional SVG plots) into cfg.out_dir and returns the file names, which
/// the dispatcher records in the run manifest.
std::vector<std::string> run_dynamics(const ExperimentConfig& cfg);
std::vector<std::string> run_fisher_sweep(const ExperimentConfig& cfg);
std::vector<std::string> run_nlevel(const ExperimentConfig& cfg);
std::vector<std::string> run_xi_bound(const ExperimentConfig& cfg);
std::vector<std::string> run_spectrum(const ExperimentConfig& cfg);

/// Validates, creates the output directory, runs the configured experiment
/// and writes the manifest. Rerunning with --config <out>/manifest.txt
/// reproduces all files byte-for-byte.
void run_experiment(const ExperimentConfig& cfg);

}  // namespace prethermo
