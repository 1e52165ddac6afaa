#include "gtdesign/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gtdesign/sim.hpp"
#include "gtdesign/solvers.hpp"

namespace gtdesign::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal text that parses back to the same double.
std::string shortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, end);
}

std::string fixed6(double value) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << value;
  return os.str();
}

std::string join(std::span<const int> sizes, char sep) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(sizes[i]);
  }
  return out;
}

ordered_json sizes_json(const Partition& partition) {
  return ordered_json(std::vector<int>(partition.sizes().begin(), partition.sizes().end()));
}

ordered_json row_json(const TableRow& row) {
  ordered_json j;
  j["n"] = row.n;
  j["p"] = row.p;
  j["method"] = std::string(to_string(row.method));
  j["partition"] = sizes_json(row.partition);
  j["expected_tests"] = row.expected_tests;
  j["n_star"] = row.n_star ? ordered_json(*row.n_star) : ordered_json(nullptr);
  j["n_star_tie"] = row.n_star_tie ? ordered_json(*row.n_star_tie) : ordered_json(nullptr);
  return j;
}

Method method_from(const std::string& name) {
  auto m = parse_method(name);
  if (!m) throw UsageError("unknown method '" + name + "'");
  return *m;
}

int to_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

struct SolveArgs {
  int n = 0;
  double p = 0.0;
  std::string method = "dp";
  std::string format = "text";
};

struct SimulateArgs {
  std::optional<int> n;
  std::string sizes;
  double p = 0.0;
  std::uint64_t reps = 100000;
  std::uint64_t seed = 1;
  std::string method = "dp";
  std::string format = "text";
};

struct TableArgs {
  std::string n_range;
  std::vector<double> p_list;
  std::string method = "dp";
  std::string format = "csv";
};

void print_solve(const TableRow& row, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << to_json(row) << '\n';
  } else if (format == "csv") {
    out << kCsvHeader << '\n' << to_csv(row) << '\n';
  } else {
    out << "N               " << row.n << '\n'
        << "p               " << shortest(row.p) << '\n'
        << "method          " << to_string(row.method) << '\n'
        << "partition       " << join(row.partition.sizes(), ',') << '\n'
        << "groups          " << row.partition.groups() << '\n'
        << "expected_tests  " << fixed6(row.expected_tests) << '\n'
        << "n_star          ";
    if (!row.n_star) {
      out << "none";
    } else {
      out << *row.n_star;
      if (row.n_star_tie) out << " or " << *row.n_star_tie;
    }
    out << '\n';
  }
}

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  const Method method = method_from(args.method);
  const Prevalence prevalence = Prevalence::from_p(args.p);
  print_solve(make_row(args.n, prevalence, method), args.format, out);
  return kSuccess;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  if (args.n.has_value() == !args.sizes.empty()) {
    throw UsageError("simulate needs exactly one of --n or --sizes");
  }
  const Prevalence prevalence = Prevalence::from_p(args.p);
  const double q = prevalence.q();

  std::optional<Method> method;
  std::optional<Partition> partition;
  if (args.n) {
    method = method_from(args.method);
    partition = solve(*method, *args.n, q).partition;
  } else {
    partition = Partition(parse_sizes(args.sizes));
  }
  const SimulationReport report = simulate_design(*partition, q, args.reps, args.seed);

  if (args.format == "json") {
    ordered_json j;
    j["partition"] = sizes_json(*partition);
    j["p"] = args.p;
    j["method"] = method ? ordered_json(std::string(to_string(*method))) : ordered_json(nullptr);
    j["replications"] = report.replications;
    j["seed"] = args.seed;
    j["mean_tests"] = report.mean_tests;
    j["variance_tests"] = report.variance_tests;
    j["std_error"] = report.std_error;
    j["analytic_tests"] = report.analytic_tests;
    j["z_score"] = report.z_score;
    out << j.dump() << '\n';
  } else {
    out << "partition       " << join(partition->sizes(), ',') << '\n'
        << "p               " << shortest(args.p) << '\n';
    if (method) out << "method          " << to_string(*method) << '\n';
    out << "replications    " << report.replications << '\n'
        << "seed            " << args.seed << '\n'
        << "mean_tests      " << fixed6(report.mean_tests) << '\n'
        << "variance_tests  " << fixed6(report.variance_tests) << '\n'
        << "std_error       " << fixed6(report.std_error) << '\n'
        << "analytic_tests  " << fixed6(report.analytic_tests) << '\n'
        << "z_score         " << fixed6(report.z_score) << '\n';
  }
  return kSuccess;
}

int cmd_table(const TableArgs& args, std::ostream& out) {
  const Method method = method_from(args.method);
  std::vector<int> demands;
  try {
    demands = parse_n_range(args.n_range);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (args.p_list.empty()) throw UsageError("--p-list is empty");

  std::vector<double> ps = args.p_list;
  std::stable_sort(ps.begin(), ps.end());
  std::vector<TableRow> rows;
  rows.reserve(ps.size() * demands.size());
  for (double p : ps) {
    const Prevalence prevalence = Prevalence::from_p(p);
    for (int n : demands) rows.push_back(make_row(n, prevalence, method));
  }

  if (args.format == "json") {
    ordered_json j = ordered_json::array();
    for (const auto& row : rows) j.push_back(row_json(row));
    out << j.dump() << '\n';
  } else {
    out << kCsvHeader << '\n';
    for (const auto& row : rows) out << to_csv(row) << '\n';
  }
  return kSuccess;
}

}  // namespace

TableRow make_row(int n, const Prevalence& prevalence, Method method) {
  const double q = prevalence.q();
  DesignSolution solution = solve(method, n, q);
  std::optional<int> n_star;
  std::optional<int> n_star_tie;
  if (q > 0.0 && q < 1.0) {
    const ConstantSizeResult constant = optimal_constant_size(q);
    n_star = constant.n_star_low;
    n_star_tie = constant.n_star_high;
  }
  return {n, prevalence.p(), method, std::move(solution.partition), solution.expected_tests, n_star,
          n_star_tie};
}

std::string to_csv(const TableRow& row) {
  std::string n_star;
  if (row.n_star) {
    n_star = std::to_string(*row.n_star);
    if (row.n_star_tie) n_star += "|" + std::to_string(*row.n_star_tie);
  }
  return std::to_string(row.n) + "," + shortest(row.p) + "," + std::string(to_string(row.method)) +
         "," + join(row.partition.sizes(), '|') + "," + shortest(row.expected_tests) + "," + n_star;
}

std::string to_json(const TableRow& row) { return row_json(row).dump(); }

std::vector<int> parse_n_range(std::string_view spec) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = spec.find(':', start);
    fields.push_back(spec.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (fields.size() < 2 || fields.size() > 3) {
    throw std::invalid_argument("n-range must be a:b or a:b:step, got '" + std::string(spec) + "'");
  }
  const int first = to_int(fields[0], "range start");
  const int last = to_int(fields[1], "range end");
  const int step = fields.size() == 3 ? to_int(fields[2], "range step") : 1;
  if (step < 1) throw std::invalid_argument("range step must be >= 1");
  if (first > last) throw std::invalid_argument("empty n-range '" + std::string(spec) + "'");
  std::vector<int> out;
  for (long long n = first; n <= last; n += step) out.push_back(static_cast<int>(n));
  return out;
}

std::vector<int> parse_sizes(std::string_view spec) {
  std::vector<int> sizes;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = spec.find(',', start);
    sizes.push_back(to_int(spec.substr(start, comma - start), "group size"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return sizes;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal group-testing designs for collecting N good items"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Compute an optimal partition of N into groups");
  solve_cmd->add_option("--n", solve_args.n, "Number of good items required")->required();
  solve_cmd->add_option("--p", solve_args.p, "Probability an item is defective")->required();
  solve_cmd->add_option("--method", solve_args.method, "Solver")
      ->check(CLI::IsMember({"dp", "sweep", "theorem", "brute"}));
  solve_cmd->add_option("--format", solve_args.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check of a design's expected tests");
  auto* sim_n = sim_cmd->add_option("--n", sim_args.n, "Solve for N first, then simulate");
  auto* sim_sizes = sim_cmd->add_option("--sizes", sim_args.sizes, "Explicit group sizes, e.g. 83,83,84");
  sim_n->excludes(sim_sizes);
  sim_cmd->add_option("--p", sim_args.p, "Probability an item is defective")->required();
  sim_cmd->add_option("--reps", sim_args.reps, "Replications");
  sim_cmd->add_option("--seed", sim_args.seed, "Master seed");
  sim_cmd->add_option("--method", sim_args.method, "Solver used with --n")
      ->check(CLI::IsMember({"dp", "sweep", "theorem", "brute"}));
  sim_cmd->add_option("--format", sim_args.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  TableArgs table_args;
  auto* table_cmd = app.add_subcommand("table", "Design table across demands and prevalences");
  table_cmd->add_option("--n-range", table_args.n_range, "a:b[:step]")->required();
  table_cmd->add_option("--p-list", table_args.p_list, "Comma-separated defect probabilities")
      ->required()
      ->delimiter(',');
  table_cmd->add_option("--method", table_args.method, "Solver")
      ->check(CLI::IsMember({"dp", "sweep", "theorem", "brute"}));
  table_cmd->add_option("--format", table_args.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim_args, out);
    return cmd_table(table_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace gtdesign::cli
