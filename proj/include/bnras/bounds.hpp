#pragma once

#include <cstdint>
#include <string>

#include "bnras/error.hpp"
#include "bnras/exact_oracle.hpp"
#include "bnras/network.hpp"

namespace bnras {

/// Raised when a bound needs strictly positive CPT entries and the network
/// has a 0 or 1 entry.
class NonPositiveNetworkError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ErrorTolerances {
  double alpha = 0.1;    ///< interval error
  double delta = 0.1;    ///< failure probability
  double gamma = 0.1;    ///< relative pointwise distance target
  double epsilon = 0.1;  ///< relative error; reported only

  /// Throws DomainError unless every field lies in (0, 1).
  void validate() const;
};

/// ceil(1 / (4 delta alpha^2)).
std::uint64_t trials_bound(double alpha, double delta);

/// (log gamma + log pi_min) / log(1 - p0^2 / 8), before ceiling.
double mixing_ratio(double gamma, double pi_min, double p0);

/// ceil(mixing_ratio). Throws CapacityError if the value overflows.
std::uint64_t mixing_bound(double gamma, double pi_min, double p0);

/// ceil(4 (1 + gamma)^3 / (3 alpha^2)).
std::uint64_t transitions_first_factor(double alpha, double gamma);

/// 12 ceil(-ln delta) + 1.
std::uint64_t transitions_confidence_factor(double delta);

/// ceil(first factor * confidence factor * mixing_ratio).
std::uint64_t transitions_per_trial(const ErrorTolerances& tol, double pi_min, double p0);

/// Lower bounds on pi_min and p0 computed from CPT extremes alone.
struct FactoredBounds {
  double pi_min = 0.0;
  double p0 = 0.0;
};

/// pi_lb = prod over nodes of the node's smallest CPT entry.
/// p0_lb = (1 / 2n) min over free X of m_X / (k_X M_X), where m_X and M_X
/// multiply the smallest and largest CPT entries of X and its children.
FactoredBounds factored_lower_bounds(const BeliefNetwork& net, const Evidence& ev);

enum class BoundsMode { kExact, kFactored };

const char* to_string(BoundsMode mode);

struct BoundsReport {
  BoundsMode mode = BoundsMode::kExact;
  ErrorTolerances tolerances;
  double pi_min = 0.0;
  double p0 = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t t_mix = 0;
  std::uint64_t t_per_trial = 0;

  /// True when pi_min and p0 are lower bounds rather than exact values.
  bool lower_bound_inputs() const noexcept { return mode == BoundsMode::kFactored; }
};

BoundsReport report_bounds(const BeliefNetwork& net, const Evidence& ev,
                           const ErrorTolerances& tol, BoundsMode mode,
                           std::size_t matrix_cap = kDefaultMatrixCap);

}  // namespace bnras
