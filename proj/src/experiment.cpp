#include "bnras/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

#include "bnras/error.hpp"
#include "bnras/model_io.hpp"

namespace bnras {

const char* to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kBnras ? "bnras" : "straight";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "bnras") return Algorithm::kBnras;
  if (text == "straight") return Algorithm::kStraight;
  throw DomainError("unknown algorithm '" + text + "' (expected bnras or straight)");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

const std::string& csv_header() {
  static const std::string header =
      "run_id,seed,algorithm,network,evidence,trials,transitions_per_trial,total_transitions,"
      "checkpoint,avg_error,max_error,worst_node,cpu_seconds,wall_seconds";
  return header;
}

std::string to_csv(const ResultRow& row) {
  std::ostringstream out;
  out << csv_field(row.run_id) << ',' << row.seed << ',' << to_string(row.algorithm) << ','
      << csv_field(row.network) << ',' << csv_field(row.evidence) << ',' << row.trials << ','
      << row.transitions_per_trial << ',' << row.total_transitions << ',';
  if (row.checkpoint) out << *row.checkpoint;
  out << ',' << fmt(row.avg_error) << ',' << fmt(row.max_error) << ','
      << csv_field(row.worst_node) << ',' << fmt(row.cpu_seconds) << ','
      << fmt(row.wall_seconds);
  return out.str();
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << csv_header() << '\n';
  for (const auto& row : rows) out << to_csv(row) << '\n';
}

// ---------------------------------------------------------------------------
// Runs

Problem Problem::make(BeliefNetwork net, const std::string& network_label,
                      const std::string& evidence_text, std::size_t enumeration_cap) {
  net.require_usable();
  Problem p{std::move(net), {}, {}, network_label, evidence_text};
  p.evidence = parse_evidence(evidence_text, p.net);
  p.oracle = enumerate_posteriors(p.net, p.evidence, enumeration_cap);
  return p;
}

namespace {

std::string run_id(Algorithm algorithm, std::uint64_t trials, std::uint64_t t,
                   std::uint64_t seed) {
  return std::string(to_string(algorithm)) + "-N" + std::to_string(trials) + "-t" +
         std::to_string(t) + "-s" + std::to_string(seed);
}

ResultRow make_row(const Problem& problem, const RunSpec& spec, const PosteriorEstimate& est) {
  const ErrorReport err = error_metrics(est, problem.oracle);
  ResultRow row;
  row.seed = spec.seed;
  row.algorithm = spec.algorithm;
  row.network = problem.network_label;
  row.evidence = problem.evidence_text;
  row.trials = est.samples;
  row.transitions_per_trial = est.transitions_per_trial;
  row.total_transitions = est.total_transitions;
  row.avg_error = err.avg_error;
  row.max_error = err.max_error;
  row.worst_node = est.free.empty() ? "" : problem.net.node(err.worst_node).name;
  row.cpu_seconds = est.cpu_seconds;
  row.wall_seconds = est.wall_seconds;
  return row;
}

}  // namespace

std::vector<ResultRow> run_single(const Problem& problem, const RunSpec& spec) {
  std::vector<ResultRow> rows;
  const std::string id = spec.algorithm == Algorithm::kBnras
                             ? run_id(spec.algorithm, spec.trials, spec.transitions, spec.seed)
                             : run_id(spec.algorithm, spec.total, 1, spec.seed);
  EstimatorOptions options;
  options.threads = spec.threads;
  options.checkpoint_stride = spec.stride;
  if (spec.stride > 0) {
    options.on_checkpoint = [&](const PosteriorEstimate& running) {
      ResultRow row = make_row(problem, spec, running);
      row.run_id = id;
      row.checkpoint = running.total_transitions;
      row.cpu_seconds = 0.0;
      row.wall_seconds = 0.0;
      rows.push_back(std::move(row));
    };
  }
  PosteriorEstimate est;
  if (spec.algorithm == Algorithm::kBnras) {
    if (spec.trials == 0) throw DomainError("--trials must be at least 1");
    est = bnras_estimate(problem.net, problem.evidence, spec.trials, spec.transitions, spec.seed,
                         options);
  } else {
    if (spec.total == 0) throw DomainError("--total must be at least 1");
    est = straight_estimate(problem.net, problem.evidence, spec.total, spec.seed, options);
  }
  ResultRow summary = make_row(problem, spec, est);
  summary.run_id = id;
  rows.push_back(std::move(summary));
  return rows;
}

void SweepSpec::validate() const {
  if (seeds.empty()) throw DomainError("sweep needs at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw DomainError("sweep seeds must be distinct");
  }
  if (algorithm == Algorithm::kBnras) {
    if (transitions.empty()) throw DomainError("BN-RAS sweep needs a transitions grid");
    if (budget) {
      if (*budget == 0) throw DomainError("budget must be at least 1");
      for (auto t : transitions) {
        if (t == 0 || *budget / t == 0) {
          throw DomainError("budget " + std::to_string(*budget) + " leaves no trials at t=" +
                            std::to_string(t));
        }
      }
    } else {
      if (trials.empty()) throw DomainError("BN-RAS sweep needs a trials grid");
      if (std::find(trials.begin(), trials.end(), 0) != trials.end()) {
        throw DomainError("trial counts must be at least 1");
      }
    }
  } else {
    if (totals.empty()) throw DomainError("straight sweep needs a --total grid");
    if (std::find(totals.begin(), totals.end(), 0) != totals.end()) {
      throw DomainError("transition totals must be at least 1");
    }
  }
}

std::vector<ResultRow> run_sweep(const Problem& problem, const SweepSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  auto append = [&](const RunSpec& run) {
    auto out = run_single(problem, run);
    rows.insert(rows.end(), std::make_move_iterator(out.begin()), std::make_move_iterator(out.end()));
  };
  RunSpec run;
  run.algorithm = spec.algorithm;
  run.stride = spec.stride;
  run.threads = spec.threads;
  if (spec.algorithm == Algorithm::kStraight) {
    for (auto total : spec.totals) {
      for (auto seed : spec.seeds) {
        run.total = total;
        run.seed = seed;
        append(run);
      }
    }
    return rows;
  }
  const std::vector<std::uint64_t> trial_grid =
      spec.budget ? std::vector<std::uint64_t>{0} : spec.trials;
  for (auto n : trial_grid) {
    for (auto t : spec.transitions) {
      for (auto seed : spec.seeds) {
        run.trials = spec.budget ? *spec.budget / t : n;
        run.transitions = t;
        run.seed = seed;
        append(run);
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_compare(const Problem& problem, const CompareSpec& spec) {
  if (spec.budget == 0) throw DomainError("comparison budget must be at least 1");
  if (spec.transitions == 0 || spec.budget / spec.transitions == 0) {
    throw DomainError("budget must cover at least one BN-RAS trial of t transitions");
  }
  if (spec.seeds.empty()) throw DomainError("comparison needs at least one seed");
  std::vector<ResultRow> rows;
  for (auto seed : spec.seeds) {
    for (Algorithm algorithm : {Algorithm::kStraight, Algorithm::kBnras}) {
      RunSpec run;
      run.algorithm = algorithm;
      run.seed = seed;
      run.stride = spec.stride;
      run.total = spec.budget;
      run.trials = spec.budget / spec.transitions;
      run.transitions = spec.transitions;
      auto out = run_single(problem, run);
      rows.insert(rows.end(), std::make_move_iterator(out.begin()), std::make_move_iterator(out.end()));
    }
  }
  return rows;
}

double median_summary(const std::vector<ResultRow>& rows, Algorithm algorithm,
                      double ResultRow::*column) {
  std::vector<double> values;
  for (const auto& row : rows) {
    if (row.algorithm == algorithm && !row.checkpoint) values.push_back(row.*column);
  }
  if (values.empty()) throw DomainError("no summary rows for median");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

// ---------------------------------------------------------------------------
// Bounds output

void print_bounds(std::ostream& out, const BoundsReport& r, const std::string& network,
                  const std::string& evidence) {
  const auto& tol = r.tolerances;
  out << "network:             " << network << "\n"
      << "evidence:            " << (evidence.empty() ? "(none)" : evidence) << "\n"
      << "mode:                " << to_string(r.mode)
      << (r.lower_bound_inputs() ? " (lower-bound inputs)" : " (exact inputs)") << "\n"
      << "alpha delta gamma:   " << fmt(tol.alpha) << " " << fmt(tol.delta) << " "
      << fmt(tol.gamma) << "\n"
      << "epsilon (reported):  " << fmt(tol.epsilon) << "\n"
      << "pi_min:              " << fmt(r.pi_min) << "\n"
      << "p0:                  " << fmt(r.p0) << "\n"
      << "trials N:            " << r.trials << "\n"
      << "mixing t:            " << r.t_mix << "\n"
      << "transitions / trial: " << r.t_per_trial << "\n";
}

const std::string& bounds_csv_header() {
  static const std::string header =
      "network,evidence,mode,lower_bound_inputs,alpha,delta,gamma,epsilon,pi_min,p0,trials,"
      "t_mix,t_per_trial";
  return header;
}

std::string bounds_to_csv(const BoundsReport& r, const std::string& network,
                          const std::string& evidence) {
  std::ostringstream out;
  const auto& tol = r.tolerances;
  out << csv_field(network) << ',' << csv_field(evidence) << ',' << to_string(r.mode) << ','
      << (r.lower_bound_inputs() ? "true" : "false") << ',' << fmt(tol.alpha) << ','
      << fmt(tol.delta) << ',' << fmt(tol.gamma) << ',' << fmt(tol.epsilon) << ','
      << fmt(r.pi_min) << ',' << fmt(r.p0) << ',' << r.trials << ',' << r.t_mix << ','
      << r.t_per_trial;
  return out.str();
}

std::vector<std::uint64_t> parse_count_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  auto parse_one = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw DomainError("invalid count '" + std::string(s) + "' in list '" + text + "'");
    }
    return v;
  };
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_one(item));
    } else {
      const auto lo = parse_one(item.substr(0, dash));
      const auto hi = parse_one(item.substr(dash + 1));
      if (hi < lo) throw DomainError("descending range '" + std::string(item) + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace bnras
