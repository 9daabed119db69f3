#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bnras/network.hpp"
#include "bnras/random_stream.hpp"

namespace bnras {

/// One Markov chain over a network. Owned by a single worker.
struct ChainState {
  JointState state;
  Evidence evidence;
  /// Unclamped nodes in declaration order.
  std::vector<NodeIndex> free;
  /// Next node position for cyclic (straight) updates.
  std::size_t cursor = 0;
  /// Scratch space for the cumulative conditional weights.
  std::vector<double> weights;
};

/// Distribution of `node` given every other node:
///   w(v) = P(node=v | parents) * prod_children P(child | its parents, node=v)
/// normalized. Throws ZeroProbabilityError when every weight is zero.
std::vector<double> full_conditional(const BeliefNetwork& net, std::span<const Outcome> state,
                                     NodeIndex node);

/// Writes cumulative unnormalized weights into `cumulative` (size = outcome
/// count of `node`) and returns the total.
double cumulative_weights(const BeliefNetwork& net, std::span<const Outcome> state, NodeIndex node,
                          std::span<double> cumulative);

/// Smallest v with u * total < cumulative[v]; u in [0, 1).
Outcome choose_outcome(std::span<const double> cumulative, double u);

/// Uniform over the free nodes, evidence clamped, cursor 0. Draws one index
/// per free node in declaration order.
ChainState init_random_state(const BeliefNetwork& net, const Evidence& ev, RandomStream& rng);

/// Re-randomizes an existing chain in place (same draws as init_random_state).
void reinitialize(const BeliefNetwork& net, ChainState& cs, RandomStream& rng);

/// Lazy random-scan update with explicit draws: stays when u_lazy <= 1/2,
/// otherwise resamples free[floor(u_node * n)] by inverse CDF at u_value.
/// Returns true if a node was resampled (its value may be unchanged).
bool apply_transition(const BeliefNetwork& net, ChainState& cs, double u_lazy, double u_node,
                      double u_value);

/// Lazy random-scan update. Consumes one draw when lazy, three otherwise.
bool do_transition(const BeliefNetwork& net, ChainState& cs, RandomStream& rng);

/// Random initialization followed by exactly t transitions.
JointState next_trial(const BeliefNetwork& net, const Evidence& ev, std::uint64_t t,
                      RandomStream& rng);

/// In-place variant reusing the chain's buffers.
void next_trial(const BeliefNetwork& net, ChainState& cs, std::uint64_t t, RandomStream& rng);

/// Cyclic update: resamples free[cursor] and advances the cursor with
/// wraparound. Consumes one draw.
void straight_step(const BeliefNetwork& net, ChainState& cs, RandomStream& rng);

}  // namespace bnras
