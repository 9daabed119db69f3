#include "bnras/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bnras/error.hpp"
#include "bnras/exact_oracle.hpp"
#include "bnras/model_io.hpp"
#include "test_networks.hpp"

using namespace bnras;

namespace {

ErrorTolerances tolerances(double alpha, double delta, double gamma) {
  ErrorTolerances tol;
  tol.alpha = alpha;
  tol.delta = delta;
  tol.gamma = gamma;
  return tol;
}

std::vector<std::pair<std::string, Evidence>> cases() {
  const auto alarm = builtin_network("MINIALARM");
  return {
      {"AB", Evidence{}},
      {"AB", Evidence{{1, 0}}},
      {"PATH2", Evidence{}},
      {"CHAIN5", Evidence{}},
      {"CHAIN5", Evidence{{2, 1}}},
      {"MINIALARM", Evidence{}},
      {"MINIALARM", parse_evidence("Police=t", alarm)},
  };
}

}  // namespace

TEST(TrialsBound, Values) {
  EXPECT_EQ(trials_bound(0.1, 0.1), 250u);
  EXPECT_EQ(trials_bound(0.05, 0.05), 2000u);
  EXPECT_EQ(trials_bound(0.1, 0.25), 100u);
  EXPECT_EQ(trials_bound(0.05, 0.1), 4 * trials_bound(0.1, 0.1));
  // δ → 1 approaches ceil(1 / (4 α²)).
  EXPECT_EQ(trials_bound(0.1, 1.0 - 1e-12), 25u);
}

TEST(TrialsBound, DomainErrors) {
  EXPECT_THROW(trials_bound(0.0, 0.1), DomainError);
  EXPECT_THROW(trials_bound(0.1, 1.0), DomainError);
  EXPECT_THROW(trials_bound(-0.1, 0.1), DomainError);
  EXPECT_THROW(trials_bound(std::nan(""), 0.1), DomainError);
}

TEST(MixingBound, Values) {
  EXPECT_EQ(mixing_bound(0.1, 0.5, 0.25), 382u);
  EXPECT_NEAR(mixing_ratio(0.1, 0.5, 0.25), 381.9539, 1e-4);
  EXPECT_EQ(mixing_bound(0.1, 0.001, 0.1), 7364u);
  EXPECT_EQ(mixing_bound(0.1, 0.05, 0.025), 67816u);
}

TEST(MixingBound, OverflowIsReported) {
  EXPECT_THROW(mixing_bound(0.1, 0.5, 1e-9), CapacityError);
  EXPECT_THROW(mixing_ratio(0.1, 0.5, 1e-170), CapacityError);
  EXPECT_THROW(mixing_bound(0.1, 0.5, 0.0), DomainError);
}

TEST(MixingBound, LogBaseInvariance) {
  for (double gamma : {0.01, 0.1, 0.5}) {
    for (double pi : {1e-6, 0.01, 0.5}) {
      for (double p0 : {0.5, 0.25, 0.125, 0.0625}) {
        const double natural = mixing_ratio(gamma, pi, p0);
        const double x = 1.0 - p0 * p0 / 8.0;  // exact for these p0
        const double base2 = (std::log2(gamma) + std::log2(pi)) / std::log2(x);
        const double base10 = (std::log10(gamma) + std::log10(pi)) / std::log10(x);
        const double ulp = std::nextafter(natural, INFINITY) - natural;
        EXPECT_LE(std::abs(base2 - natural), 2 * ulp) << gamma << " " << pi << " " << p0;
        EXPECT_LE(std::abs(base10 - natural), 2 * ulp) << gamma << " " << pi << " " << p0;
        EXPECT_EQ(std::ceil(base2), std::ceil(natural));
      }
    }
  }
}

TEST(TransitionsPerTrial, Values) {
  EXPECT_EQ(transitions_first_factor(0.1, 0.1), 178u);
  EXPECT_EQ(transitions_confidence_factor(0.1), 37u);
  EXPECT_EQ(transitions_confidence_factor(0.05), 37u);
  EXPECT_EQ(transitions_confidence_factor(0.01), 61u);
  // 178 * 37 * 381.9539... = 2,515,548.43, ceiled.
  EXPECT_EQ(transitions_per_trial(tolerances(0.1, 0.1, 0.1), 0.5, 0.25), 2515549u);
  EXPECT_LT(transitions_per_trial(tolerances(0.1, 0.1, 0.1), 0.9, 0.25),
            transitions_per_trial(tolerances(0.1, 0.1, 0.1), 0.5, 0.25));
}

TEST(Monotonicity, TrialsDecreaseInAlphaAndDelta) {
  const std::vector<double> grid{0.02, 0.05, 0.1, 0.2, 0.4, 0.8};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_GT(trials_bound(grid[i - 1], 0.1), trials_bound(grid[i], 0.1));
    EXPECT_GT(trials_bound(0.1, grid[i - 1]), trials_bound(0.1, grid[i]));
  }
}

TEST(Monotonicity, TransitionsIncreaseAsInputsShrink) {
  const double base_pi = 0.01;
  const double base_p0 = 0.05;
  const auto base = tolerances(0.1, 0.1, 0.1);
  const auto t0 = transitions_per_trial(base, base_pi, base_p0);
  const auto m0 = mixing_bound(base.gamma, base_pi, base_p0);

  EXPECT_GT(mixing_bound(base.gamma, base_pi, base_p0 / 2), m0);
  EXPECT_GT(mixing_bound(base.gamma, base_pi / 2, base_p0), m0);
  EXPECT_GT(mixing_bound(base.gamma / 2, base_pi, base_p0), m0);

  EXPECT_GT(transitions_per_trial(base, base_pi, base_p0 / 2), t0);
  EXPECT_GT(transitions_per_trial(base, base_pi / 2, base_p0), t0);
  EXPECT_GT(transitions_per_trial(tolerances(0.05, 0.1, 0.1), base_pi, base_p0), t0);
  // γ enters twice: (1 + γ)^3 shrinks faster than |ln γ| grows here, so the
  // product falls as γ falls even though the mixing part rises.
  EXPECT_LT(transitions_per_trial(tolerances(0.1, 0.1, 0.05), base_pi, base_p0), t0);
  EXPECT_GT(transitions_per_trial(tolerances(0.1, 0.1, 0.001), base_pi, base_p0), t0);
  // ⌈-ln δ⌉ moves in unit steps, so δ must cross e^{-3} to change the factor.
  EXPECT_GT(transitions_per_trial(tolerances(0.1, 0.01, 0.1), base_pi, base_p0), t0);

  for (double p0 = 0.4; p0 > 0.001; p0 *= 0.7) {
    EXPECT_LT(mixing_bound(0.1, 0.01, p0), mixing_bound(0.1, 0.01, p0 * 0.7));
  }
}

TEST(FactoredLowerBounds, AbValues) {
  const auto fb = factored_lower_bounds(builtin_network("AB"), Evidence{});
  EXPECT_NEAR(fb.pi_min, 0.05, 1e-15);
  EXPECT_NEAR(fb.p0, 0.25 * (0.05 / 0.9), 1e-15);
  EXPECT_NEAR(fb.p0, 0.0139, 1e-4);
  EXPECT_LE(fb.p0, 0.025);
}

TEST(FactoredLowerBounds, UniformNetworkIsExact) {
  for (std::size_t n : {1u, 3u, 6u}) {
    const auto net = bnras::testing::uniform_roots(n);
    const auto fb = factored_lower_bounds(net, Evidence{});
    EXPECT_DOUBLE_EQ(fb.pi_min, std::ldexp(1.0, -static_cast<int>(n)));
    EXPECT_DOUBLE_EQ(fb.pi_min, min_joint_posterior(net, Evidence{}));
  }
}

TEST(FactoredLowerBounds, NeverExceedExactValues) {
  for (const auto& [name, ev] : cases()) {
    const auto net = builtin_network(name);
    const auto fb = factored_lower_bounds(net, ev);
    const auto tm = build_transition_matrix(net, ev);
    EXPECT_LE(fb.pi_min, tm.stationary.minCoeff()) << name;
    EXPECT_LE(fb.p0, min_transition_probability(tm)) << name;
    EXPECT_GT(fb.pi_min, 0.0);
    EXPECT_GT(fb.p0, 0.0);
  }
}

TEST(ReportBounds, AbExact) {
  const auto rep = report_bounds(builtin_network("AB"), Evidence{}, tolerances(0.1, 0.1, 0.1),
                                 BoundsMode::kExact);
  EXPECT_FALSE(rep.lower_bound_inputs());
  EXPECT_EQ(rep.trials, 250u);
  EXPECT_NEAR(rep.pi_min, 0.05, 1e-12);
  EXPECT_NEAR(rep.p0, 0.025, 1e-15);
  EXPECT_EQ(rep.t_mix, 67816u);
  EXPECT_EQ(rep.t_per_trial, transitions_per_trial(tolerances(0.1, 0.1, 0.1), rep.pi_min, rep.p0));
}

TEST(ReportBounds, FactoredDominatesExact) {
  const auto tol = tolerances(0.1, 0.1, 0.1);
  for (const auto& [name, ev] : cases()) {
    const auto net = builtin_network(name);
    const auto exact = report_bounds(net, ev, tol, BoundsMode::kExact);
    const auto factored = report_bounds(net, ev, tol, BoundsMode::kFactored);
    EXPECT_TRUE(factored.lower_bound_inputs());
    EXPECT_EQ(factored.trials, exact.trials);
    EXPECT_GE(factored.t_mix, exact.t_mix) << name;
    EXPECT_GE(factored.t_per_trial, exact.t_per_trial) << name;
  }
}

TEST(ReportBounds, RefusesDeterministicEntries) {
  const BeliefNetwork det("DET", {bnras::testing::binary_node("A", {}, {{1.0, 0.0}}),
                                  bnras::testing::binary_node("B", {0}, {{0.5, 0.5}, {0.5, 0.5}})});
  for (auto mode : {BoundsMode::kExact, BoundsMode::kFactored}) {
    try {
      report_bounds(det, Evidence{}, ErrorTolerances{}, mode);
      FAIL() << "expected refusal";
    } catch (const NonPositiveNetworkError& e) {
      EXPECT_NE(std::string(e.what()).find("deterministic"), std::string::npos);
    }
  }
  EXPECT_THROW(factored_lower_bounds(det, Evidence{}), NonPositiveNetworkError);
}

TEST(ReportBounds, ValidatesTolerances) {
  EXPECT_THROW(report_bounds(builtin_network("AB"), Evidence{}, tolerances(1.5, 0.1, 0.1),
                             BoundsMode::kExact),
               DomainError);
  ErrorTolerances tol;
  tol.epsilon = 0.0;
  EXPECT_THROW(tol.validate(), DomainError);
}

TEST(MixingBound, SoundAgainstExactDistance) {
  for (const auto& [name, ev] : cases()) {
    const auto tm = build_transition_matrix(builtin_network(name), ev);
    if (tm.state_count() > 256) continue;
    const double pi = tm.stationary.minCoeff();
    const double p0 = min_transition_probability(tm);
    const auto t = mixing_bound(0.1, pi, p0);
    EXPECT_LE(relative_pointwise_distance(tm, t), 0.1) << name << " t=" << t;
  }
}
