#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtdesign/core.hpp"

namespace gtdesign::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kDomainError = 3 };

inline constexpr std::string_view kCsvHeader = "N,p,method,partition,expected_tests,n_star";

struct TableRow {
  int n;
  double p;
  Method method;
  Partition partition;
  double expected_tests;
  std::optional<int> n_star;       // absent when p = 0
  std::optional<int> n_star_tie;   // the larger size on a constant-size tie
};

TableRow make_row(int n, const Prevalence& prevalence, Method method);

std::string to_csv(const TableRow& row);
std::string to_json(const TableRow& row);  // single-line object

/// Parses "a:b" or "a:b:step" into the listed demands. Throws
/// std::invalid_argument on malformed or empty ranges.
std::vector<int> parse_n_range(std::string_view spec);

/// Parses "83,83,84" into group sizes. Throws std::invalid_argument.
std::vector<int> parse_sizes(std::string_view spec);

/// Full command-line entry point. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gtdesign::cli
