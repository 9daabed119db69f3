#include "bnras/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include "bnras/error.hpp"

namespace bnras {

std::string shortest_decimal(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Cpt

Cpt::Cpt(std::size_t outcome_count, std::vector<double> entries)
    : outcome_count_(outcome_count), entries_(std::move(entries)) {}

Cpt::Cpt(const std::vector<std::vector<double>>& rows) {
  outcome_count_ = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != outcome_count_) {
      throw ValidationError("CPT rows have differing lengths");
    }
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

std::size_t Cpt::row_count() const noexcept {
  return outcome_count_ == 0 ? 0 : entries_.size() / outcome_count_;
}

std::span<const double> Cpt::row(std::size_t r) const {
  return std::span<const double>(entries_).subspan(r * outcome_count_, outcome_count_);
}

double Cpt::min_entry() const {
  return entries_.empty() ? 0.0 : *std::min_element(entries_.begin(), entries_.end());
}

double Cpt::max_entry() const {
  return entries_.empty() ? 0.0 : *std::max_element(entries_.begin(), entries_.end());
}

bool Cpt::positive() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double p) { return p > 0.0 && p < 1.0; });
}

std::optional<Outcome> Node::find_outcome(std::string_view label) const {
  for (std::size_t v = 0; v < outcomes.size(); ++v) {
    if (outcomes[v] == label) return static_cast<Outcome>(v);
  }
  return std::nullopt;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << "acyclic=" << (acyclic ? "yes" : "no")
      << " names_resolved=" << (names_resolved ? "yes" : "no")
      << " shapes_valid=" << (shapes_valid ? "yes" : "no")
      << " normalized=" << (normalized ? "yes" : "no")
      << " positive=" << (positive ? "yes" : "no");
  for (const auto& issue : issues) out << "\n  " << issue.message;
  return out.str();
}

// ---------------------------------------------------------------------------
// BeliefNetwork

namespace {

void add_issue(ValidationReport& report, ValidationIssue::Kind kind, const std::string& node,
               std::optional<std::size_t> row, std::string message) {
  report.issues.push_back({kind, node, row, std::move(message)});
}

// Rows within tolerance but off by more than accumulated rounding are
// rescaled. Rows already within rounding are left untouched so that
// print/parse round trips are exact.
void renormalize(Node& node) {
  const std::size_t k = node.outcome_count();
  if (k == 0 || node.cpt.outcome_count() != k) return;
  auto& entries = node.cpt.mutable_entries();
  const double rounding = 4.0 * static_cast<double>(k) * std::numeric_limits<double>::epsilon();
  for (std::size_t r = 0; r * k < entries.size(); ++r) {
    const auto first = entries.begin() + static_cast<std::ptrdiff_t>(r * k);
    const double sum = std::accumulate(first, first + static_cast<std::ptrdiff_t>(k), 0.0);
    const double off = std::abs(sum - 1.0);
    if (off > rounding && off <= kRowSumTolerance) {
      std::for_each(first, first + static_cast<std::ptrdiff_t>(k), [sum](double& p) { p /= sum; });
    }
  }
}

}  // namespace

BeliefNetwork::BeliefNetwork(std::string name, std::vector<Node> nodes)
    : name_(std::move(name)), nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  children_.assign(n, {});
  child_links_.assign(n, {});
  strides_.assign(n, {});
  auto& rep = report_;

  std::unordered_set<std::string> seen;
  for (auto& node : nodes_) {
    if (!seen.insert(node.name).second) {
      rep.names_resolved = false;
      add_issue(rep, ValidationIssue::Kind::kDuplicateName, node.name, std::nullopt,
                "duplicate node name '" + node.name + "'");
    }
    if (node.outcomes.size() < 2) {
      rep.shapes_valid = false;
      add_issue(rep, ValidationIssue::Kind::kTooFewOutcomes, node.name, std::nullopt,
                "node '" + node.name + "' needs at least two outcomes");
    }
    std::unordered_set<std::string> labels;
    for (const auto& label : node.outcomes) {
      if (!labels.insert(label).second) {
        rep.names_resolved = false;
        add_issue(rep, ValidationIssue::Kind::kDuplicateOutcome, node.name, std::nullopt,
                  "node '" + node.name + "' repeats outcome '" + label + "'");
      }
    }
    std::unordered_set<NodeIndex> parent_set;
    for (NodeIndex p : node.parents) {
      if (p >= n) {
        rep.names_resolved = false;
        add_issue(rep, ValidationIssue::Kind::kUnresolvedParent, node.name, std::nullopt,
                  "node '" + node.name + "' has unresolved parent #" + std::to_string(p));
      } else if (!parent_set.insert(p).second) {
        rep.names_resolved = false;
        add_issue(rep, ValidationIssue::Kind::kDuplicateParent, node.name, std::nullopt,
                  "node '" + node.name + "' lists parent '" + nodes_[p].name + "' twice");
      }
    }
    renormalize(node);
  }

  // Strides and child links over resolvable parents only.
  for (NodeIndex i = 0; i < n; ++i) {
    const auto& parents = nodes_[i].parents;
    auto& strides = strides_[i];
    strides.assign(parents.size(), 0);
    std::size_t stride = 1;
    bool resolvable = true;
    for (std::size_t pos = parents.size(); pos-- > 0;) {
      const NodeIndex p = parents[pos];
      if (p >= n) {
        resolvable = false;
        continue;
      }
      strides[pos] = stride;
      stride *= std::max<std::size_t>(nodes_[p].outcome_count(), 1);
    }
    for (std::size_t pos = 0; pos < parents.size(); ++pos) {
      const NodeIndex p = parents[pos];
      if (p < n && std::find(children_[p].begin(), children_[p].end(), i) == children_[p].end()) {
        children_[p].push_back(i);
        child_links_[p].push_back({i, strides[pos]});
      }
    }

    const auto& node = nodes_[i];
    const std::size_t expected_rows = stride;
    const std::size_t k = node.outcome_count();
    if (node.cpt.outcome_count() != k) {
      rep.shapes_valid = false;
      add_issue(rep, ValidationIssue::Kind::kRowCount, node.name, std::nullopt,
                "node '" + node.name + "' CPT has " + std::to_string(node.cpt.outcome_count()) +
                    " columns, expected " + std::to_string(k));
      continue;
    }
    if (k > 0 && node.cpt.entries().size() % k != 0) {
      rep.shapes_valid = false;
      add_issue(rep, ValidationIssue::Kind::kRowCount, node.name, std::nullopt,
                "node '" + node.name + "' CPT has a partial row");
    }
    if (resolvable && node.cpt.row_count() != expected_rows) {
      rep.shapes_valid = false;
      add_issue(rep, ValidationIssue::Kind::kRowCount, node.name, std::nullopt,
                "node '" + node.name + "' CPT has " + std::to_string(node.cpt.row_count()) +
                    " rows, expected " + std::to_string(expected_rows));
    }
    for (std::size_t r = 0; r < node.cpt.row_count(); ++r) {
      const auto row = node.cpt.row(r);
      bool in_range = true;
      double sum = 0.0;
      for (double p : row) {
        sum += p;
        if (!(p >= 0.0 && p <= 1.0)) in_range = false;
        if (!(p > 0.0 && p < 1.0)) rep.positive = false;
      }
      if (!in_range) {
        rep.normalized = false;
        add_issue(rep, ValidationIssue::Kind::kEntryRange, node.name, r,
                  "node '" + node.name + "' row " + std::to_string(r) +
                      " has an entry outside [0, 1]");
      } else if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
        rep.normalized = false;
        add_issue(rep, ValidationIssue::Kind::kRowSum, node.name, r,
                  "node '" + node.name + "' row " + std::to_string(r) + " sums to " +
                      shortest_decimal(sum));
      }
    }
  }

  // Kahn's algorithm over resolvable edges.
  std::vector<std::size_t> indegree(n, 0);
  for (NodeIndex i = 0; i < n; ++i) {
    // Duplicate parents count once, matching the deduplicated child lists.
    std::unordered_set<NodeIndex> distinct;
    for (NodeIndex p : nodes_[i].parents) {
      if (p < n) distinct.insert(p);
    }
    indegree[i] = distinct.size();
  }
  std::vector<NodeIndex> ready;
  for (NodeIndex i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const NodeIndex i = ready.back();
    ready.pop_back();
    ++visited;
    for (NodeIndex c : children_[i]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (visited != n) {
    rep.acyclic = false;
    std::string members;
    for (NodeIndex i = 0; i < n; ++i) {
      if (indegree[i] > 0) members += (members.empty() ? "" : ", ") + nodes_[i].name;
    }
    add_issue(rep, ValidationIssue::Kind::kCycle, "", std::nullopt,
              "parent relation has a cycle through: " + members);
  }
}

std::optional<NodeIndex> BeliefNetwork::find(std::string_view name) const {
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  return std::nullopt;
}

NodeIndex BeliefNetwork::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ValidationError("unknown node '" + std::string(name) + "'");
}

std::size_t BeliefNetwork::cpt_row(NodeIndex i, std::span<const Outcome> state) const {
  const auto& parents = nodes_[i].parents;
  const auto& strides = strides_[i];
  std::size_t row = 0;
  for (std::size_t pos = 0; pos < parents.size(); ++pos) {
    row += strides[pos] * state[parents[pos]];
  }
  return row;
}

void BeliefNetwork::require_usable() const {
  if (!report_.usable()) {
    throw ValidationError("network '" + name_ + "' is not usable: " + report_.summary());
  }
}

// ---------------------------------------------------------------------------
// Evidence

Evidence::Evidence(std::initializer_list<Map::value_type> items) {
  for (const auto& [node, value] : items) set(node, value);
}

void Evidence::set(NodeIndex node, Outcome value) {
  if (!values_.emplace(node, value).second) {
    throw ValidationError("node #" + std::to_string(node) + " appears twice in evidence");
  }
}

std::optional<Outcome> Evidence::get(NodeIndex node) const {
  auto it = values_.find(node);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Free functions

ValidationReport validate_network(const BeliefNetwork& net) { return net.report(); }

void validate_evidence(const BeliefNetwork& net, const Evidence& ev) {
  for (const auto& [node, value] : ev) {
    if (node >= net.size()) {
      throw ValidationError("evidence references unknown node #" + std::to_string(node));
    }
    if (value >= net.node(node).outcome_count()) {
      throw ValidationError("evidence outcome #" + std::to_string(value) + " invalid for node '" +
                            net.node(node).name + "'");
    }
  }
}

std::vector<NodeIndex> topological_order(const BeliefNetwork& net) {
  if (!net.report().acyclic || !net.report().names_resolved) {
    throw ValidationError("topological order undefined: " + net.report().summary());
  }
  const std::size_t n = net.size();
  std::vector<std::size_t> indegree(n, 0);
  for (NodeIndex i = 0; i < n; ++i) indegree[i] = net.node(i).parents.size();
  std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
  for (NodeIndex i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<NodeIndex> order;
  order.reserve(n);
  while (!ready.empty()) {
    const NodeIndex i = ready.top();
    ready.pop();
    order.push_back(i);
    for (NodeIndex c : net.children(i)) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != n) throw ValidationError("cycle detected");
  return order;
}

double conditional_probability(const BeliefNetwork& net, NodeIndex node, Outcome value,
                               std::span<const Outcome> state) {
  return net.node(node).cpt.at(net.cpt_row(node, state), value);
}

double joint_probability(const BeliefNetwork& net, std::span<const Outcome> state) {
  double p = 1.0;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    p *= conditional_probability(net, i, state[i], state);
  }
  return p;
}

std::vector<NodeIndex> markov_blanket(const BeliefNetwork& net, NodeIndex node) {
  std::set<NodeIndex> blanket(net.node(node).parents.begin(), net.node(node).parents.end());
  for (NodeIndex c : net.children(node)) {
    blanket.insert(c);
    blanket.insert(net.node(c).parents.begin(), net.node(c).parents.end());
  }
  blanket.erase(node);
  return {blanket.begin(), blanket.end()};
}

std::vector<NodeIndex> free_nodes(const BeliefNetwork& net, const Evidence& ev) {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (!ev.contains(i)) out.push_back(i);
  }
  return out;
}

bool is_valid_state(const BeliefNetwork& net, std::span<const Outcome> state) {
  if (state.size() != net.size()) return false;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    if (state[i] >= net.node(i).outcome_count()) return false;
  }
  return true;
}

}  // namespace bnras
