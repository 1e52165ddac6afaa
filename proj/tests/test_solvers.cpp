#include <doctest.h>

#include <cmath>
#include <random>

#include "gtdesign/solvers.hpp"
#include "oracle.hpp"

using namespace gtdesign;

namespace {

const double kQGrid[] = {0.3, 0.5, 0.6, 0.75, 0.9, 0.95, 0.99};

double round4(double x) { return std::round(x * 1e4) / 1e4; }

bool all_ones(const Partition& p) { return p.sizes().back() == 1; }

}  // namespace

TEST_CASE("dp_solve reproduces the worked examples") {
  const auto ex1 = dp_solve(250, 0.99);
  CHECK(ex1.partition == Partition{83, 83, 84});
  CHECK(round4(ex1.expected_tests) == doctest::Approx(6.9320));
  CHECK(ex1.method == Method::dp);

  const auto ex2 = dp_solve(220, 0.99);
  CHECK(ex2.partition == Partition{110, 110});
  CHECK(round4(ex2.expected_tests) == doctest::Approx(6.0417));
}

TEST_CASE("dp_solve small cases") {
  for (double q : {0.2, 0.5, 0.9, 1.0}) {
    const auto one = dp_solve(1, q);
    CHECK(one.partition == Partition{1});
    CHECK(one.expected_tests == doctest::Approx(1.0 / q));
  }
  // {3}: 15.625, {1,2}: 8.75, {1,1,1}: 7.5
  CHECK(oracle::min_over_partitions(3, 0.4) == doctest::Approx(7.5));
  const auto three = dp_solve(3, 0.4);
  CHECK(three.partition == Partition{1, 1, 1});
  CHECK(three.expected_tests == doctest::Approx(7.5));

  CHECK_THROWS_AS(dp_solve(0, 0.9), DomainError);
  CHECK_THROWS_AS(dp_solve(5, 0.0), DomainError);
  CHECK_THROWS_AS(dp_solve(5, 1.5), DomainError);
}

TEST_CASE("dp table invariants") {
  for (double q : {0.3, 0.5, 0.77, 0.95, 1.0}) {
    const DpTable table(120, q);
    CHECK(table.value(0) == 0.0);
    CHECK(table.value(1) == doctest::Approx(1.0 / q));
    for (int n = 1; n <= 120; ++n) {
      if (q < 1.0) CHECK(table.value(n) > table.value(n - 1));
      const int x = table.choice(n);
      CHECK(table.value(n) == inverse_power(q, x) + table.value(n - x));
      for (int y = 1; y <= n; ++y) CHECK(table.value(n) <= inverse_power(q, y) + table.value(n - y));
    }
    const Partition p = table.reconstruct(120);
    CHECK(p.total() == 120);
    CHECK(oracle::relative_close(expected_waiting_time(p, q), table.value(120), 1e-12));
  }
}

TEST_CASE("dp prefers the largest minimizing group") {
  // At q = 1/2, {2} and {1,1} both cost 4.
  const auto two = dp_solve(2, 0.5);
  CHECK(two.partition == Partition{2});
  CHECK(two.expected_tests == 4.0);
}

TEST_CASE("dp skips group sizes whose cost overflows") {
  const auto r = dp_solve(1000, 0.3);
  CHECK(all_ones(r.partition));
  CHECK(r.expected_tests == doctest::Approx(1000 / 0.3));
  const auto s = sweep_solve(1000, 0.3);
  CHECK(s.partition == r.partition);
}

TEST_CASE("balanced partition") {
  CHECK(balanced_partition(250, 3) == Partition{83, 83, 84});
  CHECK(balanced_partition(220, 2) == Partition{110, 110});
  CHECK(balanced_partition(7, 7) == Partition{1, 1, 1, 1, 1, 1, 1});
  CHECK(balanced_partition(10, 1) == Partition{10});
  CHECK(balanced_partition(10, 4) == Partition{2, 2, 3, 3});
  CHECK_THROWS_AS(balanced_partition(5, 6), DomainError);
  CHECK_THROWS_AS(balanced_partition(5, 0), DomainError);
}

TEST_CASE("sweep_solve") {
  const auto dp = dp_solve(250, 0.99);
  const auto sw = sweep_solve(250, 0.99);
  CHECK(sw.partition == dp.partition);
  CHECK(oracle::relative_close(sw.expected_tests, dp.expected_tests, 1e-12));
  CHECK(sw.method == Method::sweep);

  const auto certain = sweep_solve(4, 1.0);
  CHECK(certain.partition == Partition{4});
  CHECK(certain.expected_tests == 1.0);
}

TEST_CASE("theorem_solve cases") {
  SUBCASE("example 1 picks the extra group") {
    const auto d = theorem_design(250, 0.99);
    REQUIRE(d.inputs.has_value());
    CHECK(d.inputs->s == 2);
    CHECK(d.inputs->theta == 52);
    CHECK(d.which == TheoremCase::extra_group);
    CHECK(d.solution.partition == Partition{83, 83, 84});
    CHECK(expected_waiting_time(Partition{83, 83, 84}, 0.99) <
          expected_waiting_time(Partition{125, 125}, 0.99));
  }
  SUBCASE("example 2 spreads the remainder") {
    const auto d = theorem_design(220, 0.99);
    CHECK(d.inputs->s == 2);
    CHECK(d.inputs->theta == 22);
    CHECK(d.which == TheoremCase::spread);
    CHECK(d.solution.partition == Partition{110, 110});
    CHECK(expected_waiting_time(Partition{110, 110}, 0.99) <
          expected_waiting_time(Partition{73, 73, 74}, 0.99));
  }
  SUBCASE("exact multiple") {
    const auto d = theorem_design(198, 0.99);
    CHECK(d.which == TheoremCase::exact_multiple);
    CHECK(d.solution.partition == Partition{99, 99});
  }
  SUBCASE("tie with remainder larger than s routes to the two candidates") {
    const auto d = theorem_design(201, 0.99);
    CHECK(d.inputs->theta == 3);
    CHECK((d.which == TheoremCase::spread || d.which == TheoremCase::extra_group));
    CHECK(oracle::relative_close(d.solution.expected_tests, dp_solve(201, 0.99).expected_tests, 1e-12));
  }
  SUBCASE("tie with small remainder mixes floor and ceil") {
    const auto d = theorem_design(299, 0.99);
    CHECK(d.inputs->s == 3);
    CHECK(d.inputs->theta == 2);
    CHECK(d.which == TheoremCase::tie_mix);
    CHECK(d.solution.partition == Partition{99, 100, 100});
    CHECK(oracle::relative_close(d.solution.expected_tests, dp_solve(299, 0.99).expected_tests, 1e-12));
  }
  SUBCASE("demand below n* is one group") {
    const auto d = theorem_design(40, 0.99);
    CHECK(d.which == TheoremCase::single_group);
    CHECK(d.solution.partition == Partition{40});
  }
  SUBCASE("cutoff and certainty") {
    CHECK(theorem_design(9, 0.4).which == TheoremCase::individual);
    CHECK(theorem_design(9, 0.5).which == TheoremCase::individual);
    CHECK(theorem_solve(9, 1.0).partition == Partition{9});
  }
}

TEST_CASE("theorem_solve matches dp across a dense grid") {
  for (double q = 0.505; q < 0.999; q += 0.0061) {
    const DpTable table(300, q);
    for (int n = 1; n <= 300; ++n) {
      const double dp = table.value(n);
      const double th = theorem_solve(n, q).expected_tests;
      CHECK_MESSAGE(oracle::relative_close(dp, th, 1e-9), "q=", q, " n=", n);
    }
  }
}

TEST_CASE("for_each_partition enumerates p(n) distinct partitions") {
  const auto p = oracle::partition_numbers(25);
  for (int n = 1; n <= 25; ++n) {
    std::uint64_t count = 0;
    bool ordered = true;
    for_each_partition(n, [&](std::span<const int> parts) {
      ++count;
      int sum = 0;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        sum += parts[i];
        if (i > 0 && parts[i] > parts[i - 1]) ordered = false;
      }
      if (sum != n) ordered = false;
    });
    CHECK(count == p[static_cast<std::size_t>(n)]);
    CHECK(ordered);
  }
}

TEST_CASE("brute_force_solve") {
  const auto five = brute_force_solve(5, 0.9);
  CHECK(five.partition == Partition{5});
  CHECK(five.expected_tests == doctest::Approx(std::pow(0.9, -5)));

  const auto two = brute_force_solve(2, 0.5);
  CHECK(two.expected_tests == 4.0);
  CHECK(two.partition == Partition{2});

  CHECK_THROWS_WITH_AS(brute_force_solve(51, 0.9), doctest::Contains("cap"), DomainError);
  CHECK_NOTHROW(brute_force_solve(12, 0.9, 12));
  CHECK_THROWS_AS(brute_force_solve(13, 0.9, 12), DomainError);
}

TEST_CASE("tie rule prefers fewer groups then lexicographic order") {
  CHECK(preferred_on_tie(Partition{3, 3}, Partition{2, 2, 2}));
  CHECK(preferred_on_tie(Partition{1, 5}, Partition{2, 4}));
  CHECK_FALSE(preferred_on_tie(Partition{2, 4}, Partition{1, 5}));
  // At q = 1/2, N = 3: {1,2} and {1,1,1} both cost 6.
  CHECK(brute_force_solve(3, 0.5).partition == Partition{1, 2});
}

TEST_CASE("all solvers agree with enumeration for N <= 30") {
  for (double q : kQGrid) {
    for (int n = 1; n <= 30; ++n) {
      const double truth = oracle::min_over_partitions(n, q);
      for (Method m : {Method::dp, Method::sweep, Method::theorem, Method::brute}) {
        const auto sol = solve(m, n, q);
        CHECK_MESSAGE(oracle::relative_close(sol.expected_tests, truth, 1e-9), to_string(m), " q=", q,
                      " n=", n);
        CHECK(sol.partition.total() == n);
        CHECK(sol.expected_tests == expected_waiting_time(sol.partition, q));
      }
    }
  }
}

TEST_CASE("individual testing below one half") {
  for (double q : {0.2, 0.3, 0.45}) {
    for (int n = 1; n <= 30; ++n) CHECK(all_ones(brute_force_solve(n, q).partition));
  }
  for (int n = 1; n <= 30; ++n) {
    const double ones = expected_waiting_time(Partition(std::vector<int>(n, 1)), 0.5);
    CHECK(nearly_equal(ones, brute_force_solve(n, 0.5).expected_tests));
  }
}

TEST_CASE("is_majorized_by") {
  CHECK(is_majorized_by(Partition{83, 83, 84}, Partition{1, 83, 166}));
  CHECK(is_majorized_by(Partition{2, 2}, Partition{1, 3}));
  CHECK_FALSE(is_majorized_by(Partition{1, 3}, Partition{2, 2}));
  CHECK(is_majorized_by(Partition{4, 1, 7}, Partition{4, 1, 7}));
  CHECK_THROWS_AS(is_majorized_by(Partition{2, 2}, Partition{1, 2}), DomainError);
  CHECK_THROWS_AS(is_majorized_by(Partition{2, 2}, Partition{1, 1, 2}), DomainError);
}

TEST_CASE("random partitions never beat the optimum and respect majorization") {
  std::mt19937_64 gen(7321);
  const double qs[] = {0.5, 0.6, 0.75, 0.9, 0.95, 0.99};
  std::uniform_int_distribution<int> pick_n(1, 200);
  std::uniform_int_distribution<std::size_t> pick_q(0, std::size(qs) - 1);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = pick_n(gen);
    const double q = qs[pick_q(gen)];
    const int groups = std::uniform_int_distribution<int>(1, n)(gen);
    const Partition a(oracle::random_composition(n, groups, gen));
    const Partition b(oracle::random_composition(n, groups, gen));
    const double fa = expected_waiting_time(a, q);
    const double fb = expected_waiting_time(b, q);
    const double slack = 1e-12;

    CHECK(fa >= dp_solve(n, q).expected_tests * (1 - slack));
    CHECK(groups * std::pow(q, -static_cast<double>(n) / groups) <= fa * (1 + slack));
    const Partition balanced = balanced_partition(n, groups);
    CHECK(is_majorized_by(balanced, a));
    CHECK(expected_waiting_time(balanced, q) <= fa * (1 + slack));
    if (is_majorized_by(a, b)) CHECK(fa <= fb * (1 + slack));
    if (is_majorized_by(b, a)) CHECK(fb <= fa * (1 + slack));
  }
}
