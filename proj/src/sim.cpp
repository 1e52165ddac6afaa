#include "gtdesign/sim.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace gtdesign {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform on (0, 1] with 53 random bits.
double open_closed_uniform(std::mt19937_64& gen) {
  return static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
}

// Fixed-shape pairwise summation: the tree depends only on the length.
double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

std::uint64_t geometric_trials(double success, double uniform) {
  if (!(success > 0.0)) {
    throw DomainError("geometric sampling needs positive success probability");
  }
  if (!(uniform > 0.0 && uniform <= 1.0)) throw DomainError("uniform draw must lie in (0, 1]");
  if (success >= 1.0) return 1;
  const double extra = std::floor(std::log(uniform) / std::log1p(-success));
  if (extra >= 0x1.0p63) throw OverflowError("geometric draw exceeds 2^63 trials");
  return 1 + static_cast<std::uint64_t>(extra);
}

SimulationReport simulate_design(const Partition& partition, double q, std::uint64_t replications,
                                 std::uint64_t seed) {
  const double analytic = expected_waiting_time(partition, q);
  if (replications < 1) throw DomainError("replications must be >= 1");

  std::vector<double> success;
  success.reserve(partition.groups());
  for (int size : partition.sizes()) success.push_back(1.0 / inverse_power(q, size));

  std::vector<double> totals(replications);
  for (std::uint64_t r = 0; r < replications; ++r) {
    std::mt19937_64 gen(substream_seed(seed, r));
    std::uint64_t tests = 0;
    for (double s : success) tests += geometric_trials(s, open_closed_uniform(gen));
    totals[r] = static_cast<double>(tests);
  }

  const double count = static_cast<double>(replications);
  const double mean = pairwise_sum(totals) / count;
  double variance = 0.0;
  if (replications > 1) {
    std::vector<double> squares(replications);
    for (std::uint64_t r = 0; r < replications; ++r) {
      const double d = totals[r] - mean;
      squares[r] = d * d;
    }
    variance = pairwise_sum(squares) / (count - 1.0);
  }
  const double std_error = std::sqrt(variance / count);

  double z = 0.0;
  if (std_error > 0.0) {
    z = (mean - analytic) / std_error;
  } else if (!nearly_equal(mean, analytic)) {
    z = std::copysign(std::numeric_limits<double>::infinity(), mean - analytic);
  }
  return {replications, mean, variance, std_error, analytic, z};
}

double simulate_stream_rate(int n, double q, std::uint64_t replications, std::uint64_t seed) {
  const SimulationReport report = simulate_design(Partition({n}), q, replications, seed);
  return report.mean_tests / n;
}

}  // namespace gtdesign
