#include "bnras/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bnras/error.hpp"

namespace bnras {

// ---------------------------------------------------------------------------
// StateSpace

StateSpace::StateSpace(const BeliefNetwork& net, const Evidence& ev, std::size_t cap) {
  net.require_usable();
  validate_evidence(net, ev);
  base_.assign(net.size(), 0);
  for (const auto& [node, value] : ev) base_[node] = value;
  free_ = free_nodes(net, ev);
  radix_.resize(free_.size());
  weight_.resize(free_.size());
  size_ = 1;
  for (std::size_t pos = free_.size(); pos-- > 0;) {
    radix_[pos] = net.node(free_[pos]).outcome_count();
    weight_[pos] = size_;
    if (size_ > cap / radix_[pos]) {
      throw CapacityError("free state space of '" + net.name() + "' exceeds the cap of " +
                          std::to_string(cap) + " states");
    }
    size_ *= radix_[pos];
  }
  if (size_ > cap) {
    throw CapacityError("free state space of '" + net.name() + "' exceeds the cap of " +
                        std::to_string(cap) + " states");
  }
}

JointState StateSpace::state(std::size_t index) const {
  JointState s = base_;
  for (std::size_t pos = 0; pos < free_.size(); ++pos) {
    s[free_[pos]] = static_cast<Outcome>((index / weight_[pos]) % radix_[pos]);
  }
  return s;
}

std::size_t StateSpace::index(std::span<const Outcome> state) const {
  std::size_t idx = 0;
  for (std::size_t pos = 0; pos < free_.size(); ++pos) idx += weight_[pos] * state[free_[pos]];
  return idx;
}

std::size_t StateSpace::index_with(std::span<const Outcome> state, std::size_t pos,
                                   Outcome value) const {
  const std::size_t idx = index(state);
  return idx - weight_[pos] * state[free_[pos]] + weight_[pos] * value;
}

std::span<const double> PosteriorTable::of(NodeIndex node) const {
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free[i] == node) return marginals[i];
  }
  throw ValidationError("node #" + std::to_string(node) + " is not free");
}

// ---------------------------------------------------------------------------
// Enumeration. Sums run sequentially in state-index order.

namespace {

std::vector<double> joint_over_states(const BeliefNetwork& net, const StateSpace& space) {
  std::vector<double> joint(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    joint[i] = joint_probability(net, space.state(i));
  }
  return joint;
}

double evidence_probability(const std::vector<double>& joint) {
  double total = 0.0;
  for (double p : joint) total += p;
  if (!(total > 0.0)) throw ZeroProbabilityError("evidence has probability zero");
  return total;
}

}  // namespace

PosteriorTable enumerate_posteriors(const BeliefNetwork& net, const Evidence& ev,
                                    std::size_t cap) {
  const StateSpace space(net, ev, cap);
  const auto joint = joint_over_states(net, space);
  PosteriorTable table;
  table.evidence_probability = evidence_probability(joint);
  table.free.assign(space.free().begin(), space.free().end());
  table.marginals.resize(table.free.size());
  for (std::size_t pos = 0; pos < table.free.size(); ++pos) {
    table.marginals[pos].assign(net.node(table.free[pos]).outcome_count(), 0.0);
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    const JointState s = space.state(i);
    for (std::size_t pos = 0; pos < table.free.size(); ++pos) {
      table.marginals[pos][s[table.free[pos]]] += joint[i];
    }
  }
  for (auto& row : table.marginals) {
    for (double& p : row) p /= table.evidence_probability;
  }
  return table;
}

Eigen::VectorXd posterior_over_states(const BeliefNetwork& net, const StateSpace& space) {
  const auto joint = joint_over_states(net, space);
  const double pe = evidence_probability(joint);
  Eigen::VectorXd pi(static_cast<Eigen::Index>(space.size()));
  for (std::size_t i = 0; i < space.size(); ++i) pi[static_cast<Eigen::Index>(i)] = joint[i] / pe;
  return pi;
}

double min_joint_posterior(const BeliefNetwork& net, const Evidence& ev, std::size_t cap) {
  const StateSpace space(net, ev, cap);
  return posterior_over_states(net, space).minCoeff();
}

// ---------------------------------------------------------------------------
// Transition matrix

TransitionMatrix build_transition_matrix(const BeliefNetwork& net, const Evidence& ev,
                                         std::size_t cap) {
  StateSpace space(net, ev, cap);
  const auto free = space.free();
  if (free.empty()) throw ValidationError("transition matrix needs at least one free node");
  const auto m = static_cast<Eigen::Index>(space.size());
  const double select = 1.0 / (2.0 * static_cast<double>(free.size()));

  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(m, m);
  std::vector<double> weights;
  for (Eigen::Index a = 0; a < m; ++a) {
    JointState s = space.state(static_cast<std::size_t>(a));
    double stay = 0.5;
    for (std::size_t pos = 0; pos < free.size(); ++pos) {
      const NodeIndex node = free[pos];
      const Outcome current = s[node];
      const std::size_t k = net.node(node).outcome_count();
      // Full conditional as a ratio of joint probabilities.
      weights.assign(k, 0.0);
      double total = 0.0;
      for (Outcome v = 0; v < k; ++v) {
        s[node] = v;
        weights[v] = joint_probability(net, s);
        total += weights[v];
      }
      s[node] = current;
      if (!(total > 0.0)) {
        throw ZeroProbabilityError("full conditional of '" + net.node(node).name +
                                   "' has no support in some state");
      }
      for (Outcome v = 0; v < k; ++v) {
        const double q = weights[v] / total;
        if (v == current) {
          stay += select * q;
        } else {
          entries(a, static_cast<Eigen::Index>(space.index_with(s, pos, v))) = select * q;
        }
      }
    }
    entries(a, a) = stay;
  }
  Eigen::VectorXd pi = posterior_over_states(net, space);
  return TransitionMatrix{std::move(space), std::move(entries), std::move(pi)};
}

double min_transition_probability(const TransitionMatrix& tm) {
  double best = std::numeric_limits<double>::infinity();
  const auto m = tm.entries.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double p = tm.entries(i, j);
      if (i != j && p > 0.0) best = std::min(best, p);
    }
  }
  return best;
}

namespace {

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& p, std::uint64_t t) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  Eigen::MatrixXd base = p;
  while (t > 0) {
    if (t & 1u) result = result * base;
    t >>= 1;
    if (t > 0) base = base * base;
  }
  return result;
}

double rpd(const Eigen::MatrixXd& pt, const Eigen::VectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < pt.cols(); ++j) {
    for (Eigen::Index i = 0; i < pt.rows(); ++i) {
      worst = std::max(worst, std::abs(pt(i, j) - pi[j]) / pi[j]);
    }
  }
  return worst;
}

}  // namespace

double relative_pointwise_distance(const TransitionMatrix& tm, std::uint64_t t) {
  return rpd(matrix_power(tm.entries, t), tm.stationary);
}

std::vector<double> relative_pointwise_distances(const TransitionMatrix& tm,
                                                 std::span<const std::uint64_t> ts) {
  std::vector<std::size_t> order(ts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ts[a] < ts[b]; });
  std::vector<double> out(ts.size());
  Eigen::MatrixXd current = Eigen::MatrixXd::Identity(tm.entries.rows(), tm.entries.cols());
  std::uint64_t reached = 0;
  for (std::size_t idx : order) {
    if (ts[idx] > reached) {
      current = current * matrix_power(tm.entries, ts[idx] - reached);
      reached = ts[idx];
    }
    out[idx] = rpd(current, tm.stationary);
  }
  return out;
}

MixingReport mixing_report(const BeliefNetwork& net, const Evidence& ev,
                           std::span<const std::uint64_t> ts, std::size_t cap) {
  const TransitionMatrix tm = build_transition_matrix(net, ev, cap);
  MixingReport report;
  report.pi_min = tm.stationary.minCoeff();
  report.p0 = min_transition_probability(tm);
  report.t.assign(ts.begin(), ts.end());
  report.delta_t = relative_pointwise_distances(tm, ts);
  return report;
}

}  // namespace bnras
