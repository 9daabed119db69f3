#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bnras {

using NodeIndex = std::size_t;
using Outcome = std::uint32_t;

/// One outcome index per node, in declaration order.
using JointState = std::vector<Outcome>;

/// Absolute tolerance on CPT row sums.
inline constexpr double kRowSumTolerance = 1e-9;

/// Conditional probability table stored row-major: one row per parent
/// combination (last declared parent varies fastest), one column per outcome.
class Cpt {
 public:
  Cpt() = default;
  Cpt(std::size_t outcome_count, std::vector<double> entries);
  Cpt(const std::vector<std::vector<double>>& rows);

  std::size_t outcome_count() const noexcept { return outcome_count_; }
  std::size_t row_count() const noexcept;
  std::span<const double> row(std::size_t r) const;
  double at(std::size_t r, Outcome v) const { return entries_[r * outcome_count_ + v]; }
  const std::vector<double>& entries() const noexcept { return entries_; }
  std::vector<double>& mutable_entries() noexcept { return entries_; }

  double min_entry() const;
  double max_entry() const;
  /// True iff every entry lies strictly inside (0, 1).
  bool positive() const;

  bool operator==(const Cpt&) const = default;

 private:
  std::size_t outcome_count_ = 0;
  std::vector<double> entries_;
};

struct Node {
  std::string name;
  std::vector<std::string> outcomes;
  std::vector<NodeIndex> parents;
  Cpt cpt;

  std::size_t outcome_count() const noexcept { return outcomes.size(); }
  std::optional<Outcome> find_outcome(std::string_view label) const;

  bool operator==(const Node&) const = default;
};

struct ValidationIssue {
  enum class Kind {
    kDuplicateName,
    kDuplicateOutcome,
    kTooFewOutcomes,
    kUnresolvedParent,
    kDuplicateParent,
    kCycle,
    kRowCount,
    kRowSum,
    kEntryRange,
  };
  Kind kind;
  std::string node;
  std::optional<std::size_t> row;
  std::string message;
};

struct ValidationReport {
  bool acyclic = true;
  bool names_resolved = true;
  bool shapes_valid = true;
  bool normalized = true;
  /// Every CPT entry strictly in (0, 1). Not required for sampling, only for
  /// the convergence bounds.
  bool positive = true;
  std::vector<ValidationIssue> issues;

  /// Structurally sound: sampling and enumeration may proceed.
  bool usable() const noexcept {
    return acyclic && names_resolved && shapes_valid && normalized;
  }
  std::string summary() const;
};

/// Discrete belief network. Immutable after construction, so safe to share
/// read-only between threads.
///
/// Construction never throws on structural defects: they are recorded in the
/// report and surface through require_usable() at the entry points of the
/// inference routines. Rows whose sum is within kRowSumTolerance of 1 are
/// rescaled to sum to 1.
class BeliefNetwork {
 public:
  struct ChildLink {
    NodeIndex child;
    /// Row stride of the parent inside the child's CPT.
    std::size_t stride;
  };

  BeliefNetwork() = default;
  BeliefNetwork(std::string name, std::vector<Node> nodes);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }

  std::optional<NodeIndex> find(std::string_view name) const;
  /// Throws ValidationError for an unknown name.
  NodeIndex index_of(std::string_view name) const;

  std::span<const NodeIndex> children(NodeIndex i) const { return children_[i]; }
  std::span<const ChildLink> child_links(NodeIndex i) const { return child_links_[i]; }

  /// CPT row selected by the parents' values in `state`.
  std::size_t cpt_row(NodeIndex i, std::span<const Outcome> state) const;

  const ValidationReport& report() const noexcept { return report_; }
  void require_usable() const;

  bool operator==(const BeliefNetwork& other) const {
    return name_ == other.name_ && nodes_ == other.nodes_;
  }

 private:
  std::string name_;
  std::vector<Node> nodes_;
  std::vector<std::vector<NodeIndex>> children_;
  std::vector<std::vector<ChildLink>> child_links_;
  std::vector<std::vector<std::size_t>> strides_;
  ValidationReport report_;
};

/// Observed nodes clamped to outcomes. A node appears at most once.
class Evidence {
 public:
  using Map = std::map<NodeIndex, Outcome>;

  Evidence() = default;
  Evidence(std::initializer_list<Map::value_type> items);

  /// Throws ValidationError if the node is already assigned.
  void set(NodeIndex node, Outcome value);
  std::optional<Outcome> get(NodeIndex node) const;
  bool contains(NodeIndex node) const { return values_.contains(node); }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t size() const noexcept { return values_.size(); }
  Map::const_iterator begin() const { return values_.begin(); }
  Map::const_iterator end() const { return values_.end(); }

  bool operator==(const Evidence&) const = default;

 private:
  Map values_;
};

ValidationReport validate_network(const BeliefNetwork& net);

/// Throws ValidationError when a referenced node or outcome does not exist.
void validate_evidence(const BeliefNetwork& net, const Evidence& ev);

/// Parents before children; among ready nodes the earliest declared goes
/// first. Throws ValidationError on a cycle.
std::vector<NodeIndex> topological_order(const BeliefNetwork& net);

/// P(node = value | parents as assigned in state).
double conditional_probability(const BeliefNetwork& net, NodeIndex node, Outcome value,
                               std::span<const Outcome> state);

/// Product of every node's conditional probability.
double joint_probability(const BeliefNetwork& net, std::span<const Outcome> state);

/// Parents, children and co-parents of the children, ascending.
std::vector<NodeIndex> markov_blanket(const BeliefNetwork& net, NodeIndex node);

/// Nodes not clamped by evidence, in declaration order.
std::vector<NodeIndex> free_nodes(const BeliefNetwork& net, const Evidence& ev);

/// Checks length and per-node index range.
bool is_valid_state(const BeliefNetwork& net, std::span<const Outcome> state);

/// Shortest decimal text that reads back as exactly `x`.
std::string shortest_decimal(double x);

}  // namespace bnras
