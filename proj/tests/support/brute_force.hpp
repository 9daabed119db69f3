#pragma once

// Test-only reference computations. Deliberately share no code with the
// library's row indexing, state enumeration or Markov-blanket logic.

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "bnras/network.hpp"

namespace bnras::testing {

/// CPT entry by walking the parent list directly (last parent fastest).
inline double reference_conditional(const BeliefNetwork& net, NodeIndex i,
                                    const std::vector<Outcome>& state) {
  const Node& node = net.node(i);
  std::size_t row = 0;
  for (NodeIndex p : node.parents) row = row * net.node(p).outcomes.size() + state[p];
  return node.cpt.entries()[row * node.outcomes.size() + state[i]];
}

inline double reference_joint(const BeliefNetwork& net, const std::vector<Outcome>& state) {
  double p = 1.0;
  for (NodeIndex i = 0; i < net.size(); ++i) p *= reference_conditional(net, i, state);
  return p;
}

/// Calls fn(state) for every full joint state, last node fastest.
template <typename Fn>
void for_each_state(const BeliefNetwork& net, Fn&& fn) {
  std::vector<Outcome> state(net.size(), 0);
  while (true) {
    fn(state);
    bool carry = true;
    for (std::size_t i = net.size(); carry && i-- > 0;) {
      if (++state[i] < net.node(i).outcomes.size()) {
        carry = false;
      } else {
        state[i] = 0;
      }
    }
    if (carry) return;
  }
}

inline bool consistent(const std::vector<Outcome>& state, const std::map<NodeIndex, Outcome>& ev) {
  for (const auto& [node, value] : ev) {
    if (state[node] != value) return false;
  }
  return true;
}

struct ReferencePosterior {
  /// marginals[node][value] for every node (evidence nodes included).
  std::vector<std::vector<double>> marginals;
  double evidence_probability = 0.0;
  double min_state_posterior = 1.0;
};

inline ReferencePosterior reference_posterior(const BeliefNetwork& net,
                                              const std::map<NodeIndex, Outcome>& ev) {
  ReferencePosterior out;
  out.marginals.resize(net.size());
  for (NodeIndex i = 0; i < net.size(); ++i) out.marginals[i].assign(net.node(i).outcomes.size(), 0.0);
  std::vector<double> consistent_joints;
  for_each_state(net, [&](const std::vector<Outcome>& s) {
    if (!consistent(s, ev)) return;
    const double p = reference_joint(net, s);
    consistent_joints.push_back(p);
    out.evidence_probability += p;
    for (NodeIndex i = 0; i < net.size(); ++i) out.marginals[i][s[i]] += p;
  });
  for (auto& row : out.marginals) {
    for (double& p : row) p /= out.evidence_probability;
  }
  for (double p : consistent_joints) {
    out.min_state_posterior = std::min(out.min_state_posterior, p / out.evidence_probability);
  }
  return out;
}

}  // namespace bnras::testing
