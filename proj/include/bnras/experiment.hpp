#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bnras/bounds.hpp"
#include "bnras/estimators.hpp"
#include "bnras/exact_oracle.hpp"
#include "bnras/network.hpp"

namespace bnras {

enum class Algorithm { kBnras, kStraight };

const char* to_string(Algorithm algorithm);
/// Accepts "bnras" and "straight". Throws DomainError otherwise.
Algorithm parse_algorithm(const std::string& text);

/// One CSV line. Summary rows have no checkpoint.
struct ResultRow {
  std::string run_id;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kBnras;
  std::string network;
  std::string evidence;
  std::uint64_t trials = 0;
  std::uint64_t transitions_per_trial = 0;
  std::uint64_t total_transitions = 0;
  std::optional<std::uint64_t> checkpoint;
  double avg_error = 0.0;
  double max_error = 0.0;
  std::string worst_node;
  double cpu_seconds = 0.0;
  double wall_seconds = 0.0;
};

/// run_id,seed,algorithm,network,evidence,trials,transitions_per_trial,
/// total_transitions,checkpoint,avg_error,max_error,worst_node,cpu_seconds,wall_seconds
const std::string& csv_header();
std::string to_csv(const ResultRow& row);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// Everything needed to score runs on one network/evidence pair.
struct Problem {
  BeliefNetwork net;
  Evidence evidence;
  PosteriorTable oracle;
  /// Label echoed into rows: bundled name or file path.
  std::string network_label;
  std::string evidence_text;

  /// Parses the evidence and runs the exact oracle.
  static Problem make(BeliefNetwork net, const std::string& network_label,
                      const std::string& evidence_text,
                      std::size_t enumeration_cap = kDefaultEnumerationCap);
};

struct RunSpec {
  Algorithm algorithm = Algorithm::kBnras;
  std::uint64_t trials = 0;       ///< BN-RAS N
  std::uint64_t transitions = 0;  ///< BN-RAS t
  std::uint64_t total = 0;        ///< straight simulation transitions
  std::uint64_t seed = 1;
  /// Checkpoint rows every `stride` transitions; 0 for summary only.
  std::uint64_t stride = 0;
  unsigned threads = 1;
};

/// Runs one estimator and returns its checkpoint rows followed by the summary.
std::vector<ResultRow> run_single(const Problem& problem, const RunSpec& spec);

struct SweepSpec {
  Algorithm algorithm = Algorithm::kBnras;
  std::vector<std::uint64_t> trials;
  std::vector<std::uint64_t> transitions;
  /// Straight simulation grid.
  std::vector<std::uint64_t> totals;
  /// BN-RAS fixed budget: when set, N = budget / t for every t and `trials`
  /// is ignored.
  std::optional<std::uint64_t> budget;
  std::vector<std::uint64_t> seeds;
  std::uint64_t stride = 0;
  unsigned threads = 1;

  /// Throws DomainError for empty grids, zero counts or repeated seeds.
  void validate() const;
};

/// Rows in grid order (trials, then transitions, then seed), each run's
/// checkpoints before its summary.
std::vector<ResultRow> run_sweep(const Problem& problem, const SweepSpec& spec);

struct CompareSpec {
  std::uint64_t budget = 0;
  std::uint64_t transitions = 100;
  std::vector<std::uint64_t> seeds;
  std::uint64_t stride = 100;
};

/// Straight simulation with `budget` transitions and BN-RAS with
/// N = budget / t, per seed, with running checkpoints.
std::vector<ResultRow> run_compare(const Problem& problem, const CompareSpec& spec);

/// Median of the summary rows' chosen column for one algorithm.
double median_summary(const std::vector<ResultRow>& rows, Algorithm algorithm,
                      double ResultRow::*column);

/// Human-readable bounds listing.
void print_bounds(std::ostream& out, const BoundsReport& report, const std::string& network,
                  const std::string& evidence);
const std::string& bounds_csv_header();
std::string bounds_to_csv(const BoundsReport& report, const std::string& network,
                          const std::string& evidence);

/// Comma list with optional inclusive ranges: "1,2,5-8".
std::vector<std::uint64_t> parse_count_list(const std::string& text);

}  // namespace bnras
