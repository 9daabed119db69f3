#include "bnras/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "bnras/error.hpp"
#include "bnras/model_io.hpp"
#include "test_networks.hpp"

using namespace bnras;

namespace {

Problem problem(const std::string& name, const std::string& evidence = "") {
  return Problem::make(builtin_network(name), name, evidence);
}

std::size_t summaries(const std::vector<ResultRow>& rows) {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.checkpoint; }));
}

std::string without_timing(std::string line) {
  // Drop the trailing cpu_seconds and wall_seconds columns.
  for (int i = 0; i < 2; ++i) line.erase(line.rfind(','));
  return line;
}

}  // namespace

TEST(Csv, HeaderIsExact) {
  EXPECT_EQ(csv_header(),
            "run_id,seed,algorithm,network,evidence,trials,transitions_per_trial,"
            "total_transitions,checkpoint,avg_error,max_error,worst_node,cpu_seconds,"
            "wall_seconds");
}

TEST(Csv, RowFormatting) {
  ResultRow row;
  row.run_id = "bnras-N10-t5-s3";
  row.seed = 3;
  row.network = "AB";
  row.evidence = "A=t,B=f";
  row.trials = 10;
  row.transitions_per_trial = 5;
  row.total_transitions = 50;
  row.avg_error = 0.125;
  row.max_error = 0.25;
  row.worst_node = "B";
  EXPECT_EQ(to_csv(row), "bnras-N10-t5-s3,3,bnras,AB,\"A=t,B=f\",10,5,50,,0.125,0.25,B,0,0");
  row.checkpoint = 20;
  row.evidence = "";
  EXPECT_EQ(to_csv(row), "bnras-N10-t5-s3,3,bnras,AB,,10,5,50,20,0.125,0.25,B,0,0");

  std::ostringstream out;
  write_csv(out, {row, row});
  std::string line;
  std::istringstream in(out.str());
  std::getline(in, line);
  EXPECT_EQ(line, csv_header());
  int count = 0;
  while (std::getline(in, line)) ++count;
  EXPECT_EQ(count, 2);
}

TEST(Algorithm, Parsing) {
  EXPECT_EQ(parse_algorithm("bnras"), Algorithm::kBnras);
  EXPECT_EQ(parse_algorithm("straight"), Algorithm::kStraight);
  EXPECT_THROW(parse_algorithm("gibbs"), DomainError);
  EXPECT_STREQ(to_string(Algorithm::kStraight), "straight");
}

TEST(ProblemMake, RunsOracleAndRejectsBadEvidence) {
  const auto p = problem("AB", "B=t");
  EXPECT_NEAR(p.oracle.of(0)[0], 9.0 / 11.0, 1e-12);
  EXPECT_EQ(p.evidence, (Evidence{{1, 0}}));
  EXPECT_THROW(problem("AB", "B=maybe"), ValidationError);
  const BeliefNetwork det("DET", {bnras::testing::binary_node("A", {}, {{1.0, 0.0}})});
  EXPECT_THROW(Problem::make(det, "DET", "A=f"), ZeroProbabilityError);
}

TEST(RunSingle, BnrasRowEchoesParameters) {
  const auto p = problem("AB");
  RunSpec spec;
  spec.trials = 5000;
  spec.transitions = 100;
  spec.seed = 1;
  const auto rows = run_single(p, spec);
  ASSERT_EQ(rows.size(), 1u);
  const auto& r = rows.front();
  EXPECT_EQ(r.run_id, "bnras-N5000-t100-s1");
  EXPECT_EQ(r.trials, 5000u);
  EXPECT_EQ(r.transitions_per_trial, 100u);
  EXPECT_EQ(r.total_transitions, 500000u);
  EXPECT_FALSE(r.checkpoint);
  EXPECT_LT(r.max_error, 0.05);
  EXPECT_LE(r.avg_error, r.max_error);
  EXPECT_GE(r.cpu_seconds, 0.0);
}

TEST(RunSingle, StraightCheckpointsPrecedeSummary) {
  const auto p = problem("PATH2");
  RunSpec spec;
  spec.algorithm = Algorithm::kStraight;
  spec.total = 10000;
  spec.seed = 1;
  spec.stride = 100;
  const auto rows = run_single(p, spec);
  ASSERT_EQ(rows.size(), 101u);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].checkpoint);
    EXPECT_EQ(*rows[i].checkpoint, 100 * (i + 1));
    EXPECT_EQ(rows[i].run_id, "straight-N10000-t1-s1");
  }
  EXPECT_FALSE(rows.back().checkpoint);
  EXPECT_EQ(rows.back().trials, 10000u);
  EXPECT_EQ(rows.back().transitions_per_trial, 1u);
  // The final checkpoint and the summary describe the same estimate.
  EXPECT_EQ(rows[rows.size() - 2].max_error, rows.back().max_error);
}

TEST(RunSingle, ZeroCountsAreUsageErrors) {
  const auto p = problem("AB");
  RunSpec spec;
  spec.trials = 0;
  spec.transitions = 10;
  EXPECT_THROW(run_single(p, spec), DomainError);
  spec.algorithm = Algorithm::kStraight;
  spec.total = 0;
  EXPECT_THROW(run_single(p, spec), DomainError);
}

TEST(RunSweep, GridCardinalityAndOrder) {
  const auto p = problem("PATH2");
  SweepSpec spec;
  spec.trials = {10, 100, 1000};
  spec.transitions = {1, 10, 100, 1000};
  for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
  const auto rows = run_sweep(p, spec);
  ASSERT_EQ(rows.size(), 120u);
  EXPECT_EQ(summaries(rows), 120u);
  EXPECT_EQ(rows.front().run_id, "bnras-N10-t1-s1");
  EXPECT_EQ(rows[10].run_id, "bnras-N10-t10-s1");
  EXPECT_EQ(rows.back().run_id, "bnras-N1000-t1000-s10");
  std::set<std::string> ids;
  for (const auto& r : rows) ids.insert(r.run_id);
  EXPECT_EQ(ids.size(), 120u);
}

TEST(RunSweep, FixedBudgetDerivesTrials) {
  const auto p = problem("PATH2");
  SweepSpec spec;
  spec.budget = 1000;
  spec.transitions = {1, 10, 100};
  spec.seeds = {4};
  const auto rows = run_sweep(p, spec);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_EQ(r.trials * r.transitions_per_trial, 1000u);
}

TEST(RunSweep, StraightGridAndCheckpoints) {
  const auto p = problem("AB", "B=t");
  SweepSpec spec;
  spec.algorithm = Algorithm::kStraight;
  spec.totals = {500, 1000};
  spec.seeds = {1, 2};
  spec.stride = 250;
  const auto rows = run_sweep(p, spec);
  EXPECT_EQ(summaries(rows), 4u);
  EXPECT_EQ(rows.size(), 4u + 2 + 2 + 4 + 4);
}

TEST(RunSweep, DeterministicUpToTiming) {
  const auto p = problem("CHAIN5");
  SweepSpec spec;
  spec.trials = {50};
  spec.transitions = {1, 20};
  spec.seeds = {1, 2, 3};
  spec.stride = 200;
  const auto a = run_sweep(p, spec);
  spec.threads = 4;
  const auto b = run_sweep(p, spec);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(without_timing(to_csv(a[i])), without_timing(to_csv(b[i])));
  }
}

TEST(SweepSpec, Validation) {
  SweepSpec spec;
  spec.trials = {10};
  spec.transitions = {1};
  EXPECT_THROW(spec.validate(), DomainError);  // no seeds
  spec.seeds = {1, 1};
  EXPECT_THROW(spec.validate(), DomainError);  // repeated seed
  spec.seeds = {1};
  EXPECT_NO_THROW(spec.validate());
  spec.trials = {0};
  EXPECT_THROW(spec.validate(), DomainError);
  spec.trials.clear();
  EXPECT_THROW(spec.validate(), DomainError);
  spec.budget = 5;
  spec.transitions = {10};
  EXPECT_THROW(spec.validate(), DomainError);  // budget leaves no trials
  spec.algorithm = Algorithm::kStraight;
  EXPECT_THROW(spec.validate(), DomainError);  // empty totals
}

TEST(RunCompare, LayoutAndMatchedBudgets) {
  const auto p = problem("PATH2");
  CompareSpec spec;
  spec.budget = 10000;
  spec.seeds = {1, 2};
  const auto rows = run_compare(p, spec);
  // Per seed: straight (100 checkpoints + summary), then BN-RAS (100 + 1).
  ASSERT_EQ(rows.size(), 2u * (101 + 101));
  EXPECT_EQ(rows[100].algorithm, Algorithm::kStraight);
  EXPECT_FALSE(rows[100].checkpoint);
  EXPECT_EQ(rows[201].algorithm, Algorithm::kBnras);
  EXPECT_FALSE(rows[201].checkpoint);
  for (const auto& r : rows) {
    if (!r.checkpoint) EXPECT_EQ(r.total_transitions, 10000u);
  }
  EXPECT_EQ(rows[201].trials, 100u);
  EXPECT_EQ(rows[201].transitions_per_trial, 100u);

  spec.budget = 0;
  EXPECT_THROW(run_compare(p, spec), DomainError);
  spec.budget = 50;
  EXPECT_THROW(run_compare(p, spec), DomainError);
}

TEST(RunCompare, WellMixingNetworkParity) {
  const auto p = problem("AB");
  CompareSpec spec;
  spec.budget = 100000;
  spec.stride = 0;
  for (std::uint64_t s = 1; s <= 30; ++s) spec.seeds.push_back(s);
  const auto rows = run_compare(p, spec);
  const double straight = median_summary(rows, Algorithm::kStraight, &ResultRow::avg_error);
  const double bnras = median_summary(rows, Algorithm::kBnras, &ResultRow::avg_error);
  EXPECT_LT(std::abs(straight - bnras), 0.02);
}

TEST(MedianSummary, IgnoresCheckpointsAndHandlesEvenCounts) {
  std::vector<ResultRow> rows(5);
  rows[0].avg_error = 0.4;
  rows[1].avg_error = 0.1;
  rows[2].avg_error = 0.3;
  rows[3].avg_error = 9.0;
  rows[3].checkpoint = 1;
  rows[4].avg_error = 0.2;
  rows[4].algorithm = Algorithm::kStraight;
  EXPECT_DOUBLE_EQ(median_summary(rows, Algorithm::kBnras, &ResultRow::avg_error), 0.3);
  rows.pop_back();
  rows[2].avg_error = 0.2;
  EXPECT_DOUBLE_EQ(median_summary({rows[0], rows[1]}, Algorithm::kBnras, &ResultRow::avg_error), 0.25);
  EXPECT_THROW(median_summary(rows, Algorithm::kStraight, &ResultRow::avg_error), DomainError);
}

TEST(ParseCountList, Examples) {
  EXPECT_EQ(parse_count_list("1,2,5-8"), (std::vector<std::uint64_t>{1, 2, 5, 6, 7, 8}));
  EXPECT_EQ(parse_count_list("100000"), (std::vector<std::uint64_t>{100000}));
  EXPECT_THROW(parse_count_list(""), DomainError);
  EXPECT_THROW(parse_count_list("1,,2"), DomainError);
  EXPECT_THROW(parse_count_list("8-5"), DomainError);
  EXPECT_THROW(parse_count_list("x"), DomainError);
  EXPECT_THROW(parse_count_list("-3"), DomainError);
}

TEST(BoundsOutput, ListingAndCsv) {
  const auto net = builtin_network("MINIALARM");
  const auto rep = report_bounds(net, Evidence{}, ErrorTolerances{}, BoundsMode::kFactored);
  std::ostringstream out;
  print_bounds(out, rep, "MINIALARM", "");
  EXPECT_NE(out.str().find("lower-bound inputs"), std::string::npos);
  EXPECT_NE(out.str().find("trials N:            250"), std::string::npos);
  const auto csv = bounds_to_csv(rep, "MINIALARM", "");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), ','), std::count(bounds_csv_header().begin(),
                                                                  bounds_csv_header().end(), ','));
  EXPECT_EQ(csv.rfind("MINIALARM,,factored,true,", 0), 0u);
}
