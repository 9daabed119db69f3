#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bnras/exact_oracle.hpp"
#include "bnras/network.hpp"

namespace bnras {

/// Outcome tallies of the free nodes, turned into probabilities on demand.
struct PosteriorEstimate {
  std::vector<NodeIndex> free;
  /// tallies[i][v]: scored samples with free[i] = v.
  std::vector<std::vector<std::uint64_t>> tallies;
  /// Scored samples N (trials for BN-RAS, transitions for straight simulation).
  std::uint64_t samples = 0;
  std::uint64_t transitions_per_trial = 0;
  std::uint64_t total_transitions = 0;
  double cpu_seconds = 0.0;
  double wall_seconds = 0.0;

  double probability(std::size_t position, Outcome v) const;
  /// Throws ValidationError if `node` is not free.
  std::vector<double> of(NodeIndex node) const;
  std::vector<std::vector<double>> probabilities() const;
};

struct ErrorReport {
  double avg_error = 0.0;
  double max_error = 0.0;
  NodeIndex worst_node = 0;
};

struct EstimatorOptions {
  /// Worker threads for BN-RAS trials. Results do not depend on this.
  unsigned threads = 1;
  /// Straight simulation: samples discarded before scoring.
  std::uint64_t burn_in = 0;
  /// Report a running estimate every `checkpoint_stride` transitions
  /// (0 disables). BN-RAS reports at trial boundaries.
  std::uint64_t checkpoint_stride = 0;
  std::function<void(const PosteriorEstimate&)> on_checkpoint;
};

/// BN-RAS trials are split into fixed blocks; block b draws from
/// RandomStream::derive(seed, b), so results are independent of scheduling.
inline constexpr std::uint64_t kTrialsPerStream = 1024;

/// N independent trials: random restart plus t lazy transitions, scoring every
/// free node once per trial.
PosteriorEstimate bnras_estimate(const BeliefNetwork& net, const Evidence& ev,
                                 std::uint64_t trials, std::uint64_t transitions,
                                 std::uint64_t seed, const EstimatorOptions& options = {});

/// One random start, then `total_transitions` cyclic updates, scoring the
/// state after each. Draws from RandomStream(seed).
PosteriorEstimate straight_estimate(const BeliefNetwork& net, const Evidence& ev,
                                    std::uint64_t total_transitions, std::uint64_t seed,
                                    const EstimatorOptions& options = {});

/// Mean and max of |estimate - exact| over free (node, outcome) pairs.
ErrorReport error_metrics(const PosteriorEstimate& est, const PosteriorTable& oracle);

/// Free nodes carrying `label`, by descending estimated probability of it;
/// ties keep declaration order.
std::vector<NodeIndex> rank_outcomes(const BeliefNetwork& net, const PosteriorEstimate& est,
                                     const std::string& label);

/// Whether est lies in [p/(1+gamma) - alpha, (1+gamma) p + alpha].
bool check_interval(double true_p, double est, double gamma, double alpha);

}  // namespace bnras
