#pragma once

// Solvers for the finite-demand design problem: split N good items into
// groups n_1..n_I (sum N) minimizing sum q^(-n_i).

#include <functional>
#include <vector>

#include "gtdesign/core.hpp"

namespace gtdesign {

/// Optimal expected test counts H(0..N) with the group size chosen at each n.
class DpTable {
 public:
  DpTable(int n, double q);

  int demand() const { return static_cast<int>(values_.size()) - 1; }
  double q() const { return q_; }

  /// H(n): minimal expected tests to collect n good items.
  double value(int n) const { return values_.at(static_cast<std::size_t>(n)); }
  /// Size of the group tested first when n items remain (n >= 1).
  int choice(int n) const { return choices_.at(static_cast<std::size_t>(n)); }

  std::span<const double> values() const { return values_; }

  /// Follows the recorded choices from n down to zero.
  Partition reconstruct(int n) const;

 private:
  double q_;
  std::vector<double> values_;
  std::vector<int> choices_;
};

struct TheoremInputs {
  int s;      // full groups of size n*
  int theta;  // leftover items, 0 <= theta < n*
};

TheoremInputs theorem_inputs(int n, int n_star);

/// I groups whose sizes differ by at most one, ascending.
Partition balanced_partition(int n, int groups);

/// Exact O(N^2) dynamic program.
DesignSolution dp_solve(int n, double q);

/// Scans every group count I and keeps the best balanced partition.
DesignSolution sweep_solve(int n, double q);

/// Which branch of the closed-form construction produced a design.
enum class TheoremCase {
  individual,      // q <= 1/2: all groups of size one
  single_group,    // q = 1, or N < n*
  exact_multiple,  // theta = 0: s groups of n*
  tie_mix,         // constant-size tie and 1 <= theta <= s
  spread,          // theta spread over s groups won
  extra_group,     // s + 1 balanced groups won
};

std::string_view to_string(TheoremCase c);

struct TheoremDesign {
  DesignSolution solution;
  TheoremCase which;
  std::optional<TheoremInputs> inputs;  // absent for individual and q = 1
};

/// Closed-form construction around the optimal constant group size; compares
/// at most two candidates.
TheoremDesign theorem_design(int n, double q);

DesignSolution theorem_solve(int n, double q);

inline constexpr int kBruteForceCap = 50;

/// Enumerates all integer partitions of n. Refuses n > cap.
DesignSolution brute_force_solve(int n, double q, int cap = kBruteForceCap);

/// Calls visit(parts) for each partition of n, parts in non-increasing order.
void for_each_partition(int n, const std::function<void(std::span<const int>)>& visit);

/// True iff a is majorized by b (a ≺ b). Both need the same total and length.
bool is_majorized_by(const Partition& a, const Partition& b);

/// Cross-solver tie rule: fewer groups first, then the lexicographically
/// smaller ascending size list.
bool preferred_on_tie(const Partition& a, const Partition& b);

DesignSolution solve(Method method, int n, double q);

}  // namespace gtdesign
