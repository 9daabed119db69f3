#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bnras/network.hpp"

namespace bnras {

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 22;
inline constexpr std::size_t kDefaultMatrixCap = 4096;

/// Mixed-radix enumeration of the assignments to the free (unobserved) nodes.
/// The first free node is the most significant digit, so on a binary network
/// with outcomes (t, f) the order is tt, tf, ft, ff.
class StateSpace {
 public:
  /// Throws CapacityError if the number of states exceeds `cap`.
  StateSpace(const BeliefNetwork& net, const Evidence& ev, std::size_t cap);

  std::size_t size() const noexcept { return size_; }
  std::span<const NodeIndex> free() const noexcept { return free_; }

  /// Full joint state (evidence included) for the given index.
  JointState state(std::size_t index) const;
  /// Index of the free-node part of a full joint state.
  std::size_t index(std::span<const Outcome> state) const;
  /// Index of `state` with free node at position `pos` set to `value`.
  std::size_t index_with(std::span<const Outcome> state, std::size_t pos, Outcome value) const;

 private:
  JointState base_;
  std::vector<NodeIndex> free_;
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> weight_;
  std::size_t size_ = 1;
};

/// Exact posterior marginals of the free nodes.
struct PosteriorTable {
  std::vector<NodeIndex> free;
  /// marginals[i][v] = P(free[i] = v | evidence).
  std::vector<std::vector<double>> marginals;
  double evidence_probability = 0.0;

  /// Throws ValidationError if `node` is not free.
  std::span<const double> of(NodeIndex node) const;
};

/// One-step kernel of the lazy random-scan Gibbs chain over the free states.
struct TransitionMatrix {
  StateSpace space;
  /// entries(i, j): probability of moving from state i to state j.
  Eigen::MatrixXd entries;
  /// Exact posterior over the free states.
  Eigen::VectorXd stationary;

  std::size_t state_count() const noexcept { return space.size(); }
};

struct MixingReport {
  double pi_min = 0.0;
  double p0 = 0.0;
  std::vector<std::uint64_t> t;
  std::vector<double> delta_t;
};

/// Brute-force P(X = x | e) for every free node. Throws CapacityError past
/// the cap and ZeroProbabilityError when P(e) = 0.
PosteriorTable enumerate_posteriors(const BeliefNetwork& net, const Evidence& ev,
                                    std::size_t cap = kDefaultEnumerationCap);

/// Π: the smallest posterior probability of any free-node joint state.
double min_joint_posterior(const BeliefNetwork& net, const Evidence& ev,
                           std::size_t cap = kDefaultEnumerationCap);

/// Normalized posterior over the free states in StateSpace order.
Eigen::VectorXd posterior_over_states(const BeliefNetwork& net, const StateSpace& space);

/// Stays put with probability 1/2; otherwise picks one of the n free nodes
/// uniformly and redraws it from its full conditional. Requires at least one
/// free node and at most `cap` states.
TransitionMatrix build_transition_matrix(const BeliefNetwork& net, const Evidence& ev,
                                         std::size_t cap = kDefaultMatrixCap);

/// p0: smallest strictly positive off-diagonal entry.
double min_transition_probability(const TransitionMatrix& tm);

/// Δ(t) = max_ij |P^t_ij - π_j| / π_j.
double relative_pointwise_distance(const TransitionMatrix& tm, std::uint64_t t);

/// Δ(t) for each requested t; shares matrix powers across the list.
std::vector<double> relative_pointwise_distances(const TransitionMatrix& tm,
                                                 std::span<const std::uint64_t> ts);

MixingReport mixing_report(const BeliefNetwork& net, const Evidence& ev,
                           std::span<const std::uint64_t> ts,
                           std::size_t cap = kDefaultMatrixCap);

}  // namespace bnras
