#pragma once

// Seeded Monte Carlo check of the expected test count. Each group of size n
// is retested until negative, which takes Geometric(q^n) tests on {1, 2, ...}.

#include <cstdint>

#include "gtdesign/core.hpp"

namespace gtdesign {

struct SimulationReport {
  std::uint64_t replications;
  double mean_tests;
  double variance_tests;  // unbiased sample variance, 0 for one replication
  double std_error;
  double analytic_tests;
  double z_score;
};

/// 64-bit seed for replication `index` of a run seeded with `master`.
/// Replications never share generator state, so results do not depend on
/// the order in which they are executed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

/// Trials up to and including the first success, by inverse CDF:
/// 1 + floor(ln U / ln(1 - success)) with U uniform on (0, 1].
std::uint64_t geometric_trials(double success, double uniform);

SimulationReport simulate_design(const Partition& partition, double q, std::uint64_t replications,
                                 std::uint64_t seed);

/// Empirical tests per accepted item when groups of size n are tested forever.
double simulate_stream_rate(int n, double q, std::uint64_t replications, std::uint64_t seed);

}  // namespace gtdesign
