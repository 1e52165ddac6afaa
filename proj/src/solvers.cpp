#include "gtdesign/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gtdesign {

namespace {

void require_demand(int n) {
  if (n < 1) throw DomainError("demand N must be >= 1, got " + std::to_string(n));
}

void require_solver_q(double q) {
  if (!(q > 0.0) || q > 1.0) {
    std::ostringstream msg;
    msg << "q must lie in (0, 1], got " << q;
    if (q == 0.0) msg << " (unattainable demand: no good items exist)";
    throw DomainError(msg.str());
  }
}

// q^(-x) for x = 1..limit, stopping before the first non-finite power.
// Entry 0 is unused. Group sizes past the table are never optimal candidates
// because the all-ones design stays finite whenever q^(-1) is.
std::vector<double> finite_inverse_powers(double q, int limit) {
  std::vector<double> w(1, 0.0);
  w.reserve(static_cast<std::size_t>(limit) + 1);
  for (int x = 1; x <= limit; ++x) {
    auto v = try_inverse_power(q, x);
    if (!v) break;
    w.push_back(*v);
  }
  if (w.size() < 2) {
    std::ostringstream msg;
    msg << "q^(-1) overflows double precision for q = " << q;
    throw OverflowError(msg.str());
  }
  return w;
}

DesignSolution finish(Partition partition, double q, Method method) {
  const double value = expected_waiting_time(partition, q);
  return {std::move(partition), value, method};
}

Partition repeated(int size, int count) {
  return Partition(std::vector<int>(static_cast<std::size_t>(count), size));
}

}  // namespace

DpTable::DpTable(int n, double q) : q_(q) {
  require_demand(n);
  require_solver_q(q);
  const auto w = finite_inverse_powers(q, n);
  const int max_x = static_cast<int>(w.size()) - 1;

  values_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  choices_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int m = 1; m <= n; ++m) {
    double best = std::numeric_limits<double>::infinity();
    int best_x = 0;
    const int upper = std::min(m, max_x);
    // Ascending scan with <= keeps the largest minimizing x.
    for (int x = 1; x <= upper; ++x) {
      const double candidate = w[static_cast<std::size_t>(x)] + values_[static_cast<std::size_t>(m - x)];
      if (candidate <= best) {
        best = candidate;
        best_x = x;
      }
    }
    if (!std::isfinite(best)) {
      throw OverflowError("dynamic program value overflows double precision at n = " +
                          std::to_string(m));
    }
    values_[static_cast<std::size_t>(m)] = best;
    choices_[static_cast<std::size_t>(m)] = best_x;
  }
}

Partition DpTable::reconstruct(int n) const {
  if (n < 1 || n > demand()) throw DomainError("reconstruct: n out of table range");
  std::vector<int> sizes;
  while (n > 0) {
    const int x = choice(n);
    sizes.push_back(x);
    n -= x;
  }
  return Partition(std::move(sizes));
}

TheoremInputs theorem_inputs(int n, int n_star) {
  require_demand(n);
  if (n_star < 1) throw DomainError("n* must be >= 1");
  const int s = n / n_star;
  return {s, n - s * n_star};
}

Partition balanced_partition(int n, int groups) {
  require_demand(n);
  if (groups < 1 || groups > n) {
    throw DomainError("balanced partition needs 1 <= I <= N, got I = " + std::to_string(groups) +
                      ", N = " + std::to_string(n));
  }
  const int base = n / groups;
  const int larger = n % groups;
  std::vector<int> sizes(static_cast<std::size_t>(groups - larger), base);
  sizes.insert(sizes.end(), static_cast<std::size_t>(larger), base + 1);
  return Partition(std::move(sizes));
}

DesignSolution dp_solve(int n, double q) {
  DpTable table(n, q);
  return finish(table.reconstruct(n), q, Method::dp);
}

DesignSolution sweep_solve(int n, double q) {
  require_demand(n);
  require_solver_q(q);
  const auto w = finite_inverse_powers(q, n);
  const int max_x = static_cast<int>(w.size()) - 1;

  int best_groups = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int groups = 1; groups <= n; ++groups) {
    const int base = n / groups;
    const int larger = n % groups;
    if (base + (larger > 0 ? 1 : 0) > max_x) continue;
    double value = (groups - larger) * w[static_cast<std::size_t>(base)];
    if (larger > 0) value += larger * w[static_cast<std::size_t>(base + 1)];
    // Ties keep the earlier, smaller group count.
    if (value < best && !nearly_equal(value, best)) {
      best = value;
      best_groups = groups;
    }
  }
  return finish(balanced_partition(n, best_groups), q, Method::sweep);
}

std::string_view to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::individual: return "individual";
    case TheoremCase::single_group: return "single_group";
    case TheoremCase::exact_multiple: return "exact_multiple";
    case TheoremCase::tie_mix: return "tie_mix";
    case TheoremCase::spread: return "spread";
    case TheoremCase::extra_group: return "extra_group";
  }
  return "unknown";
}

TheoremDesign theorem_design(int n, double q) {
  require_demand(n);
  require_solver_q(q);
  if (q == 1.0) return {finish(Partition({n}), q, Method::theorem), TheoremCase::single_group, {}};
  if (q <= 0.5) return {finish(repeated(1, n), q, Method::theorem), TheoremCase::individual, {}};

  // On a constant-size tie n_star_low is the floor of 1/ln(1/q).
  const ConstantSizeResult constant = optimal_constant_size(q);
  const int n_star = constant.n_star_low;
  const TheoremInputs inputs = theorem_inputs(n, n_star);
  const auto [s, theta] = inputs;

  if (s == 0) return {finish(Partition({n}), q, Method::theorem), TheoremCase::single_group, inputs};
  if (theta == 0) {
    return {finish(repeated(n_star, s), q, Method::theorem), TheoremCase::exact_multiple, inputs};
  }
  if (constant.is_tie() && theta <= s) {
    std::vector<int> sizes(static_cast<std::size_t>(s - theta), n_star);
    sizes.insert(sizes.end(), static_cast<std::size_t>(theta), n_star + 1);
    return {finish(Partition(std::move(sizes)), q, Method::theorem), TheoremCase::tie_mix, inputs};
  }

  // Spread theta over s groups, or open one more group; ties keep fewer groups.
  DesignSolution spread = finish(balanced_partition(n, s), q, Method::theorem);
  DesignSolution extra = finish(balanced_partition(n, s + 1), q, Method::theorem);
  if (extra.expected_tests < spread.expected_tests &&
      !nearly_equal(extra.expected_tests, spread.expected_tests)) {
    return {std::move(extra), TheoremCase::extra_group, inputs};
  }
  return {std::move(spread), TheoremCase::spread, inputs};
}

DesignSolution theorem_solve(int n, double q) { return theorem_design(n, q).solution; }

void for_each_partition(int n, const std::function<void(std::span<const int>)>& visit) {
  require_demand(n);
  // Parts are kept non-increasing; each step splits off the next part no
  // larger than its predecessor.
  std::vector<int> parts;
  parts.reserve(static_cast<std::size_t>(n));
  std::function<void(int, int)> extend = [&](int remaining, int bound) {
    if (remaining == 0) {
      visit(parts);
      return;
    }
    for (int part = std::min(remaining, bound); part >= 1; --part) {
      parts.push_back(part);
      extend(remaining - part, part);
      parts.pop_back();
    }
  };
  extend(n, n);
}

bool preferred_on_tie(const Partition& a, const Partition& b) {
  if (a.groups() != b.groups()) return a.groups() < b.groups();
  return std::lexicographical_compare(a.sizes().begin(), a.sizes().end(), b.sizes().begin(),
                                      b.sizes().end());
}

DesignSolution brute_force_solve(int n, double q, int cap) {
  require_demand(n);
  require_solver_q(q);
  if (n > cap) {
    throw DomainError("brute force refuses N = " + std::to_string(n) + " above cap " +
                      std::to_string(cap) + " (partition count grows super-polynomially)");
  }
  const auto w = finite_inverse_powers(q, n);
  const int max_x = static_cast<int>(w.size()) - 1;

  std::optional<Partition> best;
  double best_value = std::numeric_limits<double>::infinity();
  for_each_partition(n, [&](std::span<const int> parts) {
    if (parts.front() > max_x) return;
    double value = 0.0;
    for (int part : parts) value += w[static_cast<std::size_t>(part)];
    if (best) {
      if (nearly_equal(value, best_value)) {
        Partition candidate(std::vector<int>(parts.begin(), parts.end()));
        if (preferred_on_tie(candidate, *best)) best = std::move(candidate);
        return;
      }
      if (value > best_value) return;
    }
    best = Partition(std::vector<int>(parts.begin(), parts.end()));
    best_value = value;
  });
  return finish(std::move(*best), q, Method::brute);
}

bool is_majorized_by(const Partition& a, const Partition& b) {
  if (a.total() != b.total() || a.groups() != b.groups()) {
    throw DomainError("majorization needs equal totals and lengths: " + to_string(a) + " vs " +
                      to_string(b));
  }
  // Sizes are ascending, so walking from the back gives descending prefix sums.
  long long prefix_a = 0;
  long long prefix_b = 0;
  auto ia = a.sizes().rbegin();
  auto ib = b.sizes().rbegin();
  for (; ia != a.sizes().rend(); ++ia, ++ib) {
    prefix_a += *ia;
    prefix_b += *ib;
    if (prefix_a > prefix_b) return false;
  }
  return true;
}

DesignSolution solve(Method method, int n, double q) {
  switch (method) {
    case Method::dp: return dp_solve(n, q);
    case Method::sweep: return sweep_solve(n, q);
    case Method::theorem: return theorem_solve(n, q);
    case Method::brute: return brute_force_solve(n, q);
  }
  throw DomainError("unknown method");
}

}  // namespace gtdesign
