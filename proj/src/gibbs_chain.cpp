#include "bnras/gibbs_chain.hpp"

#include <algorithm>

#include "bnras/error.hpp"

namespace bnras {

double cumulative_weights(const BeliefNetwork& net, std::span<const Outcome> state, NodeIndex node,
                          std::span<double> cumulative) {
  const Node& self = net.node(node);
  const std::size_t own_row = net.cpt_row(node, state);
  const auto links = net.child_links(node);
  const auto current = static_cast<std::ptrdiff_t>(state[node]);

  double sum = 0.0;
  for (Outcome v = 0; v < self.outcome_count(); ++v) {
    double prod = self.cpt.at(own_row, v);
    const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(v) - current;
    for (const auto& link : links) {
      // Child's row with this node set to v instead of its current value.
      const auto row = static_cast<std::size_t>(
          static_cast<std::ptrdiff_t>(net.cpt_row(link.child, state)) +
          shift * static_cast<std::ptrdiff_t>(link.stride));
      prod *= net.node(link.child).cpt.at(row, state[link.child]);
    }
    sum += prod;
    cumulative[v] = sum;
  }
  return sum;
}

std::vector<double> full_conditional(const BeliefNetwork& net, std::span<const Outcome> state,
                                     NodeIndex node) {
  const std::size_t k = net.node(node).outcome_count();
  std::vector<double> dist(k);
  const double total = cumulative_weights(net, state, node, dist);
  if (!(total > 0.0)) {
    throw ZeroProbabilityError("full conditional of '" + net.node(node).name +
                               "' is zero everywhere (deterministic conflict)");
  }
  double previous = 0.0;
  for (double& d : dist) {
    const double c = d;
    d = (c - previous) / total;
    previous = c;
  }
  return dist;
}

Outcome choose_outcome(std::span<const double> cumulative, double u) {
  const double total = cumulative.back();
  const double target = u * total;
  for (std::size_t v = 0; v < cumulative.size(); ++v) {
    if (target < cumulative[v]) return static_cast<Outcome>(v);
  }
  // Rounding at the top end: take the last outcome with positive weight.
  for (std::size_t v = cumulative.size(); v-- > 0;) {
    const double below = v == 0 ? 0.0 : cumulative[v - 1];
    if (cumulative[v] > below) return static_cast<Outcome>(v);
  }
  return static_cast<Outcome>(cumulative.size() - 1);
}

void reinitialize(const BeliefNetwork& net, ChainState& cs, RandomStream& rng) {
  for (NodeIndex node : cs.free) {
    cs.state[node] = static_cast<Outcome>(rng.index(net.node(node).outcome_count()));
  }
  cs.cursor = 0;
}

ChainState init_random_state(const BeliefNetwork& net, const Evidence& ev, RandomStream& rng) {
  net.require_usable();
  validate_evidence(net, ev);
  ChainState cs;
  cs.state.assign(net.size(), 0);
  for (const auto& [node, value] : ev) cs.state[node] = value;
  cs.evidence = ev;
  cs.free = free_nodes(net, ev);
  std::size_t widest = 0;
  for (const auto& node : net.nodes()) widest = std::max(widest, node.outcome_count());
  cs.weights.resize(widest);
  reinitialize(net, cs, rng);
  return cs;
}

namespace {

void resample(const BeliefNetwork& net, ChainState& cs, NodeIndex node, double u) {
  const std::span<double> cumulative(cs.weights.data(), net.node(node).outcome_count());
  const double total = cumulative_weights(net, cs.state, node, cumulative);
  if (!(total > 0.0)) {
    throw ZeroProbabilityError("full conditional of '" + net.node(node).name +
                               "' is zero everywhere (deterministic conflict)");
  }
  cs.state[node] = choose_outcome(cumulative, u);
}

}  // namespace

bool apply_transition(const BeliefNetwork& net, ChainState& cs, double u_lazy, double u_node,
                      double u_value) {
  if (u_lazy <= 0.5) return false;
  const std::size_t n = cs.free.size();
  const auto pos = std::min(static_cast<std::size_t>(u_node * static_cast<double>(n)), n - 1);
  resample(net, cs, cs.free[pos], u_value);
  return true;
}

bool do_transition(const BeliefNetwork& net, ChainState& cs, RandomStream& rng) {
  if (cs.free.empty()) throw ValidationError("no free node to update");
  const double u_lazy = rng.uniform();
  if (u_lazy <= 0.5) return false;
  const double u_node = rng.uniform();
  const double u_value = rng.uniform();
  return apply_transition(net, cs, u_lazy, u_node, u_value);
}

void next_trial(const BeliefNetwork& net, ChainState& cs, std::uint64_t t, RandomStream& rng) {
  reinitialize(net, cs, rng);
  for (std::uint64_t d = 0; d < t; ++d) do_transition(net, cs, rng);
}

JointState next_trial(const BeliefNetwork& net, const Evidence& ev, std::uint64_t t,
                      RandomStream& rng) {
  ChainState cs = init_random_state(net, ev, rng);
  for (std::uint64_t d = 0; d < t; ++d) do_transition(net, cs, rng);
  return cs.state;
}

void straight_step(const BeliefNetwork& net, ChainState& cs, RandomStream& rng) {
  if (cs.free.empty()) throw ValidationError("no free node to update");
  if (cs.cursor >= cs.free.size()) cs.cursor = 0;
  resample(net, cs, cs.free[cs.cursor], rng.uniform());
  cs.cursor = (cs.cursor + 1) % cs.free.size();
}

}  // namespace bnras
