// Command-line harness: validate, exact, run, bounds, sweep, compare.
//
// Exit status: 0 success, 1 usage error, 2 validation error,
// 3 runtime or capacity error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bnras/bounds.hpp"
#include "bnras/error.hpp"
#include "bnras/exact_oracle.hpp"
#include "bnras/experiment.hpp"
#include "bnras/model_io.hpp"

namespace {

using namespace bnras;

enum ExitCode { kOk = 0, kUsage = 1, kInvalid = 2, kRuntime = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

std::size_t enumeration_cap() {
  if (const char* env = std::getenv("BNRAS_ENUM_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw UsageError(std::string("BNRAS_ENUM_CAP is not a count: ") + env);
    }
  }
  return kDefaultEnumerationCap;
}

/// A path to a .bn file, or the name of a bundled network.
BeliefNetwork resolve_network(const std::string& ref) {
  if (ref.empty()) throw UsageError("--network is required");
  std::error_code ec;
  if (std::filesystem::exists(ref, ec)) return load_network_file(ref);
  if (builtin_source(ref)) return builtin_network(ref);
  throw IoError("cannot open network file '" + ref + "' (and no bundled network has that name)");
}

std::uint64_t require_count(const std::optional<std::uint64_t>& v, const char* flag) {
  if (!v) throw UsageError(std::string(flag) + " is required");
  if (*v == 0) throw UsageError(std::string(flag) + " must be at least 1");
  return *v;
}

std::vector<std::uint64_t> seed_list(const std::string& seeds, std::uint64_t seed) {
  return seeds.empty() ? std::vector<std::uint64_t>{seed} : parse_count_list(seeds);
}

/// Writes to --out when given, standard output otherwise.
template <typename Fn>
void emit(const std::string& out_path, Fn&& write) {
  if (out_path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  write(out);
  if (!out) throw IoError("error writing '" + out_path + "'");
}

struct Options {
  std::string network;
  std::string evidence;
  std::string algorithm = "bnras";
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> transitions;
  std::optional<std::uint64_t> total;
  std::string trials_list;
  std::string transitions_list;
  std::string total_list;
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 1;
  std::string seeds;
  double alpha = 0.1;
  double delta = 0.1;
  double gamma = 0.1;
  double epsilon = 0.1;
  std::string mode = "exact";
  std::uint64_t stride = 0;
  unsigned threads = 1;
  std::string out;
  std::string format = "human";
};

int cmd_validate(const Options& o) {
  std::error_code ec;
  if (!std::filesystem::exists(o.network, ec) && builtin_source(o.network)) {
    const auto report = validate_network(builtin_network(o.network));
    std::cout << o.network << ": valid\n" << report.summary() << "\n";
    return kOk;
  }
  std::ifstream in(o.network, std::ios::binary);
  if (!in) throw IoError("cannot open network file '" + o.network + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const NetworkDocument doc = parse_document(text.str());
  if (!doc.ok()) {
    for (const auto& d : doc.diagnostics) std::cerr << o.network << ": " << d.to_string() << "\n";
    return kInvalid;
  }
  std::cout << o.network << ": valid\n" << validate_network(*doc.network).summary() << "\n";
  return kOk;
}

int cmd_exact(const Options& o) {
  const BeliefNetwork net = resolve_network(o.network);
  const Evidence ev = parse_evidence(o.evidence, net);
  const PosteriorTable table = enumerate_posteriors(net, ev, enumeration_cap());
  emit(o.out, [&](std::ostream& out) {
    out.precision(6);
    out << "P(e)=" << table.evidence_probability << "\n";
    const std::string given = o.evidence.empty() ? "" : "|" + o.evidence;
    for (std::size_t i = 0; i < table.free.size(); ++i) {
      const Node& node = net.node(table.free[i]);
      for (std::size_t v = 0; v < node.outcome_count(); ++v) {
        out << "P(" << node.name << "=" << node.outcomes[v] << given
            << ")=" << table.marginals[i][v] << "\n";
      }
    }
  });
  return kOk;
}

int cmd_run(const Options& o) {
  RunSpec spec;
  spec.algorithm = parse_algorithm(o.algorithm);
  if (spec.algorithm == Algorithm::kBnras) {
    spec.trials = require_count(o.trials, "--trials");
    if (!o.transitions) throw UsageError("--transitions is required");
    spec.transitions = *o.transitions;
  } else {
    spec.total = require_count(o.total, "--total");
  }
  spec.seed = o.seed;
  spec.stride = o.stride;
  spec.threads = o.threads;
  const Problem problem =
      Problem::make(resolve_network(o.network), o.network, o.evidence, enumeration_cap());
  const auto rows = run_single(problem, spec);
  emit(o.out, [&](std::ostream& out) { write_csv(out, rows); });
  return kOk;
}

int cmd_bounds(const Options& o) {
  BoundsMode mode;
  if (o.mode == "exact") {
    mode = BoundsMode::kExact;
  } else if (o.mode == "factored") {
    mode = BoundsMode::kFactored;
  } else {
    throw UsageError("--mode must be exact or factored");
  }
  const BeliefNetwork net = resolve_network(o.network);
  const Evidence ev = parse_evidence(o.evidence, net);
  const ErrorTolerances tol{o.alpha, o.delta, o.gamma, o.epsilon};
  tol.validate();
  const BoundsReport report = report_bounds(net, ev, tol, mode);
  const std::string csv = bounds_csv_header() + "\n" + bounds_to_csv(report, o.network, o.evidence) + "\n";
  if (o.format == "csv") {
    std::cout << csv;
  } else {
    print_bounds(std::cout, report, o.network, o.evidence);
  }
  if (!o.out.empty()) emit(o.out, [&](std::ostream& out) { out << csv; });
  return kOk;
}

int cmd_sweep(const Options& o) {
  SweepSpec spec;
  spec.algorithm = parse_algorithm(o.algorithm);
  if (!o.trials_list.empty()) spec.trials = parse_count_list(o.trials_list);
  if (!o.transitions_list.empty()) spec.transitions = parse_count_list(o.transitions_list);
  if (!o.total_list.empty()) spec.totals = parse_count_list(o.total_list);
  spec.budget = o.budget;
  spec.seeds = seed_list(o.seeds, o.seed);
  spec.stride = o.stride;
  spec.threads = o.threads;
  spec.validate();
  const Problem problem =
      Problem::make(resolve_network(o.network), o.network, o.evidence, enumeration_cap());
  const auto rows = run_sweep(problem, spec);
  emit(o.out, [&](std::ostream& out) { write_csv(out, rows); });
  return kOk;
}

int cmd_compare(const Options& o) {
  CompareSpec spec;
  spec.budget = require_count(o.total, "--total");
  spec.transitions = o.transitions.value_or(100);
  spec.seeds = seed_list(o.seeds, o.seed);
  spec.stride = o.stride == 0 ? 100 : o.stride;
  const Problem problem =
      Problem::make(resolve_network(o.network), o.network, o.evidence, enumeration_cap());
  const auto rows = run_compare(problem, spec);
  emit(o.out, [&](std::ostream& out) { write_csv(out, rows); });
  std::cerr << "median avg_error: straight=" << median_summary(rows, Algorithm::kStraight, &ResultRow::avg_error)
            << " bnras=" << median_summary(rows, Algorithm::kBnras, &ResultRow::avg_error) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BN-RAS belief-network inference: exact oracle, samplers, bounds and sweeps"};
  app.require_subcommand(1);
  Options o;

  auto add_network = [&](CLI::App* sub) {
    sub->add_option("--network", o.network, "Path to a .bn file or a bundled network name")
        ->required();
  };
  auto add_evidence = [&](CLI::App* sub) {
    sub->add_option("--evidence", o.evidence, "Name=outcome(,Name=outcome)*");
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output file"); };

  auto* validate = app.add_subcommand("validate", "Parse and validate a network file");
  add_network(validate);

  auto* exact = app.add_subcommand("exact", "Exact posteriors by enumeration");
  add_network(exact);
  add_evidence(exact);
  add_out(exact);

  auto* run = app.add_subcommand("run", "One BN-RAS or straight-simulation run, CSV output");
  add_network(run);
  add_evidence(run);
  run->add_option("--algorithm", o.algorithm, "bnras | straight");
  run->add_option("--trials", o.trials, "BN-RAS trials N");
  run->add_option("--transitions", o.transitions, "BN-RAS transitions per trial t");
  run->add_option("--total", o.total, "Straight simulation transitions");
  run->add_option("--seed", o.seed, "Random seed");
  run->add_option("--stride", o.stride, "Checkpoint every K transitions (0 = summary only)");
  run->add_option("--threads", o.threads, "BN-RAS worker threads");
  add_out(run);

  auto* bounds = app.add_subcommand("bounds", "A-priori trial and transition requirements");
  add_network(bounds);
  add_evidence(bounds);
  bounds->add_option("--alpha", o.alpha, "Interval error");
  bounds->add_option("--delta", o.delta, "Failure probability");
  bounds->add_option("--gamma", o.gamma, "Relative pointwise distance");
  bounds->add_option("--epsilon", o.epsilon, "Relative error (reported only)");
  bounds->add_option("--mode", o.mode, "exact | factored");
  bounds->add_option("--format", o.format, "human | csv")->check(CLI::IsMember({"human", "csv"}));
  add_out(bounds);

  auto* sweep = app.add_subcommand("sweep", "Grid of runs over N, t and seeds");
  add_network(sweep);
  add_evidence(sweep);
  sweep->add_option("--algorithm", o.algorithm, "bnras | straight");
  sweep->add_option("--trials", o.trials_list, "Trials grid, e.g. 10,100,1000");
  sweep->add_option("--transitions", o.transitions_list, "Transitions-per-trial grid");
  sweep->add_option("--total", o.total_list, "Straight-simulation transitions grid");
  sweep->add_option("--budget", o.budget, "Fixed N*t budget (N = budget / t)");
  sweep->add_option("--seed", o.seed, "Single seed");
  sweep->add_option("--seeds", o.seeds, "Seed list, e.g. 1-30");
  sweep->add_option("--stride", o.stride, "Checkpoint every K transitions (0 = summary only)");
  sweep->add_option("--threads", o.threads, "BN-RAS worker threads");
  add_out(sweep);

  auto* compare = app.add_subcommand("compare", "Straight simulation vs BN-RAS at matched budget");
  add_network(compare);
  add_evidence(compare);
  compare->add_option("--total", o.total, "Total transition budget");
  compare->add_option("--transitions", o.transitions, "BN-RAS transitions per trial (default 100)");
  compare->add_option("--seed", o.seed, "Single seed");
  compare->add_option("--seeds", o.seeds, "Seed list, e.g. 1-30");
  compare->add_option("--stride", o.stride, "Checkpoint every K transitions (default 100)");
  add_out(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*exact) return cmd_exact(o);
    if (*run) return cmd_run(o);
    if (*bounds) return cmd_bounds(o);
    if (*sweep) return cmd_sweep(o);
    if (*compare) return cmd_compare(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "invalid network: " << e.what() << "\n";
    return kInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
