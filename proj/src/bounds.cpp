#include "bnras/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bnras/error.hpp"

namespace bnras {

namespace {

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

void require_open_unit(double x, const char* name) {
  if (!open_unit(x)) throw DomainError(std::string(name) + " must lie in (0, 1)");
}

// Ceiling that ignores floating-point noise just above an integer, so that
// 1/(4 * 0.05 * 0.05^2) is 2000 and not 2001. Results are at least 1.
std::uint64_t ceil_count(double x, const char* what) {
  constexpr double kLimit = 18446744073709549568.0;  // largest double below 2^64
  if (!std::isfinite(x) || x > kLimit) {
    throw CapacityError(std::string(what) + " overflows a 64-bit count");
  }
  const double nearest = std::round(x);
  const double snapped =
      std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x)) ? nearest : std::ceil(x);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(snapped));
}

void require_positive(const BeliefNetwork& net) {
  if (!net.report().positive) {
    throw NonPositiveNetworkError(
        "network '" + net.name() +
        "' has 0 or 1 CPT entries; convergence bounds exclude deterministic relationships "
        "(the required transition count approaches infinity)");
  }
}

}  // namespace

void ErrorTolerances::validate() const {
  require_open_unit(alpha, "alpha");
  require_open_unit(delta, "delta");
  require_open_unit(gamma, "gamma");
  require_open_unit(epsilon, "epsilon");
}

std::uint64_t trials_bound(double alpha, double delta) {
  require_open_unit(alpha, "alpha");
  require_open_unit(delta, "delta");
  return ceil_count(1.0 / (4.0 * delta * alpha * alpha), "trial bound");
}

double mixing_ratio(double gamma, double pi_min, double p0) {
  require_open_unit(gamma, "gamma");
  require_open_unit(pi_min, "pi_min");
  require_open_unit(p0, "p0");
  // log1p keeps the denominator exact for small p0.
  const double denominator = std::log1p(-(p0 * p0) / 8.0);
  if (!(denominator < 0.0)) {
    throw CapacityError("mixing bound overflows: 1 - p0^2/8 rounds to 1");
  }
  return (std::log(gamma) + std::log(pi_min)) / denominator;
}

std::uint64_t mixing_bound(double gamma, double pi_min, double p0) {
  return ceil_count(mixing_ratio(gamma, pi_min, p0), "mixing bound");
}

std::uint64_t transitions_first_factor(double alpha, double gamma) {
  require_open_unit(alpha, "alpha");
  require_open_unit(gamma, "gamma");
  const double g = 1.0 + gamma;
  return ceil_count(4.0 * g * g * g / (3.0 * alpha * alpha), "transitions factor");
}

std::uint64_t transitions_confidence_factor(double delta) {
  require_open_unit(delta, "delta");
  return 12 * ceil_count(-std::log(delta), "confidence factor") + 1;
}

std::uint64_t transitions_per_trial(const ErrorTolerances& tol, double pi_min, double p0) {
  tol.validate();
  const double product = static_cast<double>(transitions_first_factor(tol.alpha, tol.gamma)) *
                         static_cast<double>(transitions_confidence_factor(tol.delta)) *
                         mixing_ratio(tol.gamma, pi_min, p0);
  return ceil_count(product, "transitions per trial");
}

FactoredBounds factored_lower_bounds(const BeliefNetwork& net, const Evidence& ev) {
  net.require_usable();
  validate_evidence(net, ev);
  require_positive(net);
  const auto free = free_nodes(net, ev);
  if (free.empty()) throw ValidationError("every node is observed; the chain has no states");

  FactoredBounds out;
  out.pi_min = 1.0;
  for (const auto& node : net.nodes()) out.pi_min *= node.cpt.min_entry();

  double worst = std::numeric_limits<double>::infinity();
  for (NodeIndex x : free) {
    double lo = net.node(x).cpt.min_entry();
    double hi = net.node(x).cpt.max_entry();
    for (NodeIndex c : net.children(x)) {
      lo *= net.node(c).cpt.min_entry();
      hi *= net.node(c).cpt.max_entry();
    }
    const double k = static_cast<double>(net.node(x).outcome_count());
    worst = std::min(worst, lo / (k * hi));
  }
  out.p0 = worst / (2.0 * static_cast<double>(free.size()));
  return out;
}

const char* to_string(BoundsMode mode) {
  return mode == BoundsMode::kExact ? "exact" : "factored";
}

BoundsReport report_bounds(const BeliefNetwork& net, const Evidence& ev,
                           const ErrorTolerances& tol, BoundsMode mode, std::size_t matrix_cap) {
  tol.validate();
  net.require_usable();
  require_positive(net);
  BoundsReport report;
  report.mode = mode;
  report.tolerances = tol;
  if (mode == BoundsMode::kExact) {
    const TransitionMatrix tm = build_transition_matrix(net, ev, matrix_cap);
    report.pi_min = tm.stationary.minCoeff();
    report.p0 = min_transition_probability(tm);
  } else {
    const FactoredBounds fb = factored_lower_bounds(net, ev);
    report.pi_min = fb.pi_min;
    report.p0 = fb.p0;
  }
  report.trials = trials_bound(tol.alpha, tol.delta);
  report.t_mix = mixing_bound(tol.gamma, report.pi_min, report.p0);
  report.t_per_trial = transitions_per_trial(tol, report.pi_min, report.p0);
  return report;
}

}  // namespace bnras
