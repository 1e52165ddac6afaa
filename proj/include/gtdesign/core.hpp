#pragma once

// Binomial-model primitives for incomplete identification: a supply of items,
// each defective with probability p, from which N good items are wanted.
// Items are tested in disjoint groups; a negative group is accepted whole, a
// positive group is discarded, and testing continues until N goods are held.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtdesign {

/// Raised when an input lies outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when q^(-n) leaves the finite double range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Relative tolerance used for every value comparison and tie test.
inline constexpr double kTieTolerance = 1e-12;

/// True when a and b agree within kTieTolerance (absolute plus relative).
bool nearly_equal(double a, double b, double tol = kTieTolerance);

/// Validated (p, q) pair; q is stored as 1 - p once.
class Prevalence {
 public:
  static Prevalence from_p(double p);
  static Prevalence from_q(double q);

  double p() const { return p_; }
  double q() const { return q_; }

 private:
  Prevalence(double p, double q) : p_(p), q_(q) {}
  double p_;
  double q_;
};

/// Multiset of positive group sizes, kept in ascending order.
class Partition {
 public:
  explicit Partition(std::vector<int> sizes);
  Partition(std::initializer_list<int> sizes) : Partition(std::vector<int>(sizes)) {}

  std::span<const int> sizes() const { return sizes_; }
  long long total() const { return total_; }
  std::size_t groups() const { return sizes_.size(); }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> sizes_;
  long long total_ = 0;
};

std::string to_string(const Partition& partition);

enum class Method { dp, sweep, theorem, brute };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct DesignSolution {
  Partition partition;
  double expected_tests;
  Method method;
};

struct ConstantSizeResult {
  int n_star_low;
  std::optional<int> n_star_high;  // set only on a tie, equals n_star_low + 1
  double n_double_star;            // 1 / ln(1/q)

  bool is_tie() const { return n_star_high.has_value(); }
};

/// q^(-n) by repeated squaring of 1/q, or nullopt when it is not finite.
std::optional<double> try_inverse_power(double q, int n);

/// q^(-n); throws OverflowError past the double range and DomainError for q <= 0.
double inverse_power(double q, int n);

/// n q^n, the expected number of accepted items per test for group size n.
double mu(int n, double q);

/// 1 / (n q^n): tests per accepted item under constant group size n.
double per_item_cost(int n, double q);

/// Expected number of group tests: sum of q^(-n_i) over the groups.
double expected_waiting_time(const Partition& partition, double q);

/// Best constant group size for an unbounded demand. Both sizes are reported
/// when mu ties; below q = 1/2 the answer is individual testing.
ConstantSizeResult optimal_constant_size(double q);

}  // namespace gtdesign
