#include "prethermo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "prethermo/errors.hpp"
#include "prethermo/probes.hpp"

namespace prethermo {

std::uint64_t SampleRng::shard_seed(std::uint64_t master, std::uint64_t shard) {
  // splitmix64 over master + shard index.
  std::uint64_t z = master + (shard + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

bool is_physical(const ComplexMatrix& rho, double* min_eig_out, double* purity_out) {
  double lo = min_eigenvalue(rho);
  if (min_eig_out != nullptr) *min_eig_out = lo;
  if (purity_out != nullptr) {
    double purity = 0.0;
    for (const auto& z : rho.data()) purity += std::norm(z);
    *purity_out = purity;
  }
  return lo >= -1e-12;
}

CandidateState assemble_candidate(double p2, double p3, double a, double b,
                                  double sigma0R) {
  CandidateState c;
  c.p2 = p2;
  c.p3 = p3;
  c.a = a;
  c.b = b;
  c.sigma0R = sigma0R;
  c.xi = sigma0R - 0.5 * (p2 + p3);
  ComplexMatrix rho(3, 3);
  rho(0, 0) = 1.0 - p2 - p3;
  rho(0, 1) = rho(1, 0) = a;
  rho(0, 2) = rho(2, 0) = b;
  rho(1, 1) = p2;
  rho(2, 2) = p3;
  rho(1, 2) = rho(2, 1) = sigma0R;
  c.physical = is_physical(rho, &c.min_eig, &c.purity);
  return c;
}

CandidateState sample_candidate(SampleRng& rng) {
  double p2 = rng.uniform01();
  double p3 = rng.uniform01();
  double a = rng.uniform(-1.0, 1.0);
  double b = rng.uniform(-1.0, 1.0);
  double s = rng.uniform(-1.0, 1.0);
  return assemble_candidate(p2, p3, a, b, s);
}

XiBoundStudy xi_bound_study(std::size_t n, std::uint64_t seed, unsigned threads,
                            bool grid_mode, std::size_t grid_bins) {
  if (grid_mode && grid_bins == 0) throw DomainError("xi_bound_study: need grid bins");
  XiBoundStudy study;
  study.samples.resize(n);

  // Fixed shard layout so output is independent of the thread count.
  const std::size_t shard_size = 4096;
  const std::size_t shards = (n + shard_size - 1) / shard_size;

  auto run_shard = [&](std::size_t shard) {
    SampleRng rng(SampleRng::shard_seed(seed, shard));
    std::size_t begin = shard * shard_size;
    std::size_t end = std::min(begin + shard_size, n);
    for (std::size_t i = begin; i < end; ++i) {
      if (grid_mode) {
        double p2 = rng.uniform01();
        double p3 = rng.uniform01();
        double a = rng.uniform(-1.0, 1.0);
        double b = rng.uniform(-1.0, 1.0);
        std::size_t bin = i % grid_bins;
        double s = -0.75 + 1.5 * (static_cast<double>(bin) + 0.5) /
                               static_cast<double>(grid_bins);
        study.samples[i] = assemble_candidate(p2, p3, a, b, s);
      } else {
        study.samples[i] = sample_candidate(rng);
      }
    }
  };

  unsigned workers = std::max(1u, threads);
  if (workers == 1 || shards <= 1) {
    for (std::size_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < shards; s += workers) run_shard(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  XiBoundSummary& sum = study.summary;
  sum.requested = n;
  bool first = true;
  for (const auto& c : study.samples) {
    if (!c.physical) continue;
    ++sum.physical_count;
    if (first) {
      sum.xi_min = sum.xi_max = c.xi;
      first = false;
    } else {
      sum.xi_min = std::min(sum.xi_min, c.xi);
      sum.xi_max = std::max(sum.xi_max, c.xi);
    }
    sum.sigma_abs_max = std::max(sum.sigma_abs_max, std::abs(c.sigma0R));
    if (c.xi < -1.0 - 1e-9 || c.xi > 1e-9) sum.xi_within_bounds = false;
    if (std::abs(c.sigma0R) > 0.5 + 1e-9) sum.sigma_within_bounds = false;
  }

  // Deterministic endpoint witnesses.
  CandidateState ground = assemble_candidate(0.0, 0.0, 0.0, 0.0, 0.0);
  sum.ground_witness_ok = ground.physical && std::abs(ground.xi) < 1e-15;
  CandidateState antisym = assemble_candidate(0.5, 0.5, 0.0, 0.0, -0.5);
  sum.superposition_witness_ok =
      antisym.physical && std::abs(antisym.xi + 1.0) < 1e-15;
  return study;
}

}  // namespace prethermo
