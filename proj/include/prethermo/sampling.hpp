#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "prethermo/complex_matrix.hpp"

namespace prethermo {

/// One randomly drawn V-model initial-condition candidate of the real
/// symmetric form [[1-p2-p3, a, b], [a, p2, s], [b, s, p3]].
struct CandidateState {
  double p2 = 0.0, p3 = 0.0;
  double a = 0.0, b = 0.0;
  double sigma0R = 0.0;
  double xi = 0.0;        // sigma0R - (p2 + p3)/2
  double min_eig = 0.0;
  bool physical = false;  // min eigenvalue >= -1e-12
  double purity = 0.0;
};

/// Deterministic, portable RNG: std::mt19937_64 (algorithm fixed by the
/// standard) with uniform doubles built from raw 64-bit draws, so sample
/// tables replay bit-exactly across platforms.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}
  double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Decorrelated per-shard seed (splitmix64 stream over the master seed).
  static std::uint64_t shard_seed(std::uint64_t master, std::uint64_t shard);

 private:
  std::mt19937_64 engine_;
};

CandidateState assemble_candidate(double p2, double p3, double a, double b, double sigma0R);
CandidateState sample_candidate(SampleRng& rng);

/// Positivity check for the 3x3 real symmetric candidate (positivity plus
/// unit trace implies purity <= 1; purity is reported anyway).
bool is_physical(const ComplexMatrix& rho, double* min_eig_out = nullptr,
                 double* purity_out = nullptr);

struct XiBoundSummary {
  std::size_t requested = 0;
  std::size_t physical_count = 0;
  double xi_min = 0.0, xi_max = 0.0;           // over physical samples
  double sigma_abs_max = 0.0;                  // over physical samples
  bool xi_within_bounds = true;                // -1-1e-9 <= xi <= 1e-9
  bool sigma_within_bounds = true;             // |sigma0R| <= 0.5 + 1e-9
  bool ground_witness_ok = false;              // xi = 0 endpoint
  bool superposition_witness_ok = false;       // xi = -1 endpoint
};

struct XiBoundStudy {
  std::vector<CandidateState> samples;  // shard-major deterministic order
  XiBoundSummary summary;
};

/// Supplement-style random study of the xi physicality bound. `grid_mode`
/// scans sigma0R over `grid_bins` bin centers in [-0.75, 0.75] instead of
/// sampling it uniformly from [-1, 1]. Output is independent of `threads`.
XiBoundStudy xi_bound_study(std::size_t n, std::uint64_t seed, unsigned threads = 1,
                            bool grid_mode = false, std::size_t grid_bins = 60);

}  // namespace prethermo
