#include "gtdesign/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gtdesign {

namespace {

// Left-to-right binary exponentiation; the operation order is fixed so every
// caller sees bit-identical results for the same (base, n).
double power_by_squaring(double base, int n) {
  double result = 1.0;
  double factor = base;
  unsigned int e = static_cast<unsigned int>(n);
  while (e != 0) {
    if (e & 1u) result *= factor;
    e >>= 1u;
    if (e != 0) factor *= factor;
  }
  return result;
}

void require_group_size(int n) {
  if (n < 1) {
    throw DomainError("group size must be >= 1, got " + std::to_string(n));
  }
}

void require_positive_q(double q) {
  if (!(q > 0.0) || q > 1.0) {
    std::ostringstream msg;
    msg << "q must lie in (0, 1], got " << q;
    if (q == 0.0) msg << " (unattainable demand: no good items exist)";
    throw DomainError(msg.str());
  }
}

}  // namespace

bool nearly_equal(double a, double b, double tol) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

Prevalence Prevalence::from_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "p must lie in [0, 1], got " << p;
    throw DomainError(msg.str());
  }
  return Prevalence(p, 1.0 - p);
}

Prevalence Prevalence::from_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    std::ostringstream msg;
    msg << "q must lie in [0, 1], got " << q;
    throw DomainError(msg.str());
  }
  // q is kept as given; p is derived so that 1 - p reproduces q.
  return Prevalence(1.0 - q, q);
}

Partition::Partition(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw DomainError("partition needs at least one group");
  for (int s : sizes_) {
    if (s < 1) throw DomainError("partition sizes must be >= 1, got " + std::to_string(s));
  }
  std::sort(sizes_.begin(), sizes_.end());
  total_ = std::accumulate(sizes_.begin(), sizes_.end(), 0LL);
}

std::string to_string(const Partition& partition) {
  std::string out = "{";
  bool first = true;
  for (int s : partition.sizes()) {
    if (!first) out += ",";
    out += std::to_string(s);
    first = false;
  }
  return out + "}";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::dp: return "dp";
    case Method::sweep: return "sweep";
    case Method::theorem: return "theorem";
    case Method::brute: return "brute";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::dp, Method::sweep, Method::theorem, Method::brute}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<double> try_inverse_power(double q, int n) {
  require_positive_q(q);
  require_group_size(n);
  const double value = power_by_squaring(1.0 / q, n);
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

double inverse_power(double q, int n) {
  auto value = try_inverse_power(q, n);
  if (!value) {
    std::ostringstream msg;
    msg << "q^(-n) overflows double precision for q = " << q << ", n = " << n;
    throw OverflowError(msg.str());
  }
  return *value;
}

double mu(int n, double q) {
  require_group_size(n);
  require_positive_q(q);
  return n * power_by_squaring(q, n);
}

double per_item_cost(int n, double q) {
  require_group_size(n);
  return inverse_power(q, n) / n;
}

double expected_waiting_time(const Partition& partition, double q) {
  require_positive_q(q);
  double total = 0.0;
  for (int s : partition.sizes()) total += inverse_power(q, s);
  if (!std::isfinite(total)) {
    throw OverflowError("expected waiting time overflows double precision");
  }
  return total;
}

ConstantSizeResult optimal_constant_size(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    std::ostringstream msg;
    msg << "optimal constant group size needs q in (0, 1), got " << q;
    throw DomainError(msg.str());
  }
  const double n_double_star = -1.0 / std::log(q);
  if (q < 0.5) return {1, std::nullopt, n_double_star};

  if (n_double_star > static_cast<double>(std::numeric_limits<int>::max() / 2)) {
    throw DomainError("q too close to 1: optimal group size exceeds the integer range");
  }
  const int lo = static_cast<int>(std::floor(n_double_star));
  const int hi = static_cast<int>(std::ceil(n_double_star));
  if (lo == hi) return {lo, std::nullopt, n_double_star};

  const double mu_lo = mu(lo, q);
  const double mu_hi = mu(hi, q);
  if (nearly_equal(mu_lo, mu_hi)) return {lo, hi, n_double_star};
  return {mu_lo > mu_hi ? lo : hi, std::nullopt, n_double_star};
}

}  // namespace gtdesign
