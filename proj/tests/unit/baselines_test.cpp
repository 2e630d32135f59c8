#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fcsd/baselines.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

namespace fcsd {
namespace {

using testing::line_scenario;
using testing::random_scenario;
using testing::task_mb;

void expect_valid(const Allocation& a, std::size_t p) {
  ASSERT_EQ(a.lambda.size(), p);
  EXPECT_GE(a.rho, 0.0);
  EXPECT_LE(a.rho, 1.0);
  double sum = 0.0;
  for (double l : a.lambda) {
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
    sum += l;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
  EXPECT_TRUE(a.normalized());
}

TEST(RandomAlloc, NormalizedDeterministicAndCentred) {
  const Scenario s = random_scenario(1);
  Rng rng(5);
  double rho_sum = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Allocation a = random_alloc(s, task_mb(1.0), rng);
    if (k < 100) expect_valid(a, s.size());
    rho_sum += a.rho;
  }
  EXPECT_NEAR(rho_sum / 10000.0, 0.5, 0.02);
  Rng r1(77), r2(77);
  const Allocation a = random_alloc(s, task_mb(1.0), r1);
  const Allocation b = random_alloc(s, task_mb(1.0), r2);
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(a.lambda, b.lambda);
}

TEST(WrrAlloc, HandExample) {
  const Scenario s = line_scenario(0.2e9, {0.2e9, 0.4e9, 0.4e9});
  const Allocation a = wrr_alloc(s, task_mb(1.0));
  EXPECT_NEAR(a.rho, 0.2 / 1.2, 1e-15);
  EXPECT_NEAR(a.lambda[0], 0.2, 1e-15);
  EXPECT_NEAR(a.lambda[1], 0.4, 1e-15);
  EXPECT_NEAR(a.lambda[2], 0.4, 1e-15);
  expect_valid(a, 3);
}

TEST(WrrAlloc, EqualFrequenciesAndDominantNode) {
  const Scenario eq = line_scenario(0.5e9, {0.5e9, 0.5e9, 0.5e9, 0.5e9});
  const Allocation a = wrr_alloc(eq, task_mb(1.0));
  EXPECT_NEAR(a.rho, 0.2, 1e-15);
  for (double l : a.lambda) EXPECT_NEAR(l, 0.25, 1e-15);
  const Scenario dom = line_scenario(0.5e9, {0.2e9, 1e15, 0.2e9});
  EXPECT_GT(wrr_alloc(dom, task_mb(1.0)).lambda[1], 0.999999);
}

TEST(ListSchedule, HandExampleMinMinAndMaxMin) {
  const std::vector<double> unit{1.0, 1.0};
  const std::vector<double> pieces{0.5, 0.25, 0.25};
  EXPECT_EQ(list_schedule(unit, pieces, ListRule::MinMin), (std::vector<double>{0.75, 0.25}));
  EXPECT_EQ(list_schedule(unit, pieces, ListRule::MaxMin), (std::vector<double>{0.5, 0.5}));
}

TEST(ListSchedule, EqualPiecesGiveTheSameSchedule) {
  const std::vector<double> unit{3.0, 1.0, 2.0};
  const std::vector<double> pieces(10, 0.1);
  EXPECT_EQ(list_schedule(unit, pieces, ListRule::MinMin),
            list_schedule(unit, pieces, ListRule::MaxMin));
}

TEST(ChunkedBaselines, InfinitelyFastRemoteTakesEverything) {
  const Scenario s = line_scenario(0.5e9, {1e15}, 0.0, 0.0, 1.0);
  for (const Allocation& a : {max_min_alloc(s, task_mb(1.0), 2), min_min_alloc(s, task_mb(1.0), 2)}) {
    EXPECT_EQ(a.rho, 0.0);
    EXPECT_EQ(a.lambda, std::vector<double>{1.0});
  }
}

TEST(ChunkedBaselines, IdenticalNodesGetBalancedChunks) {
  const Scenario s = line_scenario(0.3e9, {0.7e9, 0.7e9, 0.7e9, 0.7e9});
  for (const Allocation& a : {max_min_alloc(s, task_mb(1.0)), min_min_alloc(s, task_mb(1.0))}) {
    expect_valid(a, 4);
    const auto [lo, hi] = std::minmax_element(a.lambda.begin(), a.lambda.end());
    EXPECT_LE((*hi - *lo) * (1.0 - a.rho) * kDefaultChunks, 1.0 + 1e-9);
  }
}

// Initiator and fog nodes share one CPU frequency and uploads are negligible,
// so every processor is interchangeable. Random shares are excluded: a single
// draw is only symmetric in distribution.
TEST(Baselines, SymmetricScenarioEqualizesBranchLatencies) {
  const double f = 0.5e9;
  std::vector<DroneNode> nodes;
  for (int i = 0; i < 3; ++i) nodes.push_back(DroneNode{i + 1, {10.0, 0, 0}, f, 0.0});
  ChannelModel ch;
  ch.bandwidth_hz = 1e20;
  const Scenario s(DroneNode{0, {0, 0, 0}, f, 0.0}, nodes, ch);
  const TaskSpec t = task_mb(1.0);
  for (const Allocation& a : {wrr_alloc(s, t), max_min_alloc(s, t, 40), min_min_alloc(s, t, 40)}) {
    const BranchTimes bt = branch_times(s, t, a);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(bt.upload_s[i] + bt.compute_s[i], bt.local_s, 1e-9 * bt.local_s);
    }
  }
}

double makespan(const std::vector<double>& unit, const std::vector<double>& fractions) {
  double span = 0.0;
  for (std::size_t j = 0; j < unit.size(); ++j) {
    if (fractions[j] > 0.0) span = std::max(span, unit[j] * fractions[j]);
  }
  return span;
}

TEST(ChunkedBaselines, MatchExhaustiveEnumeration) {
  std::vector<Scenario> cases{line_scenario(0.4e9, {0.9e9, 0.25e9}, 0.0, 0.0, 60.0),
                              line_scenario(0.9e9, {0.3e9, 0.35e9}, 0.0, 0.0, 90.0)};
  for (std::uint64_t seed = 0; seed < 20; ++seed) cases.push_back(random_scenario(seed, 2));
  for (const Scenario& s : cases) {
    const TaskSpec t = task_mb(1.0);
    const std::vector<double> unit = oracle::whole_task_times(s, t);
    const double best = oracle::brute_force_makespan(unit, 6);
    for (ListRule rule : {ListRule::MinMin, ListRule::MaxMin}) {
      const Allocation a = rule == ListRule::MinMin ? min_min_alloc(s, t, 6) : max_min_alloc(s, t, 6);
      std::vector<double> fractions{a.rho};
      for (double l : a.lambda) fractions.push_back(l * (1.0 - a.rho));
      EXPECT_NEAR(makespan(unit, fractions), best, 1e-12 * best);
      for (double f : fractions) EXPECT_NEAR(f * 6.0, std::round(f * 6.0), 1e-9);
    }
  }
}

TEST(ChunkedBaselines, ProcessorTimesMatchOracle) {
  const Scenario s = random_scenario(3);
  const auto got = processor_unit_times(s, task_mb(0.5));
  const auto want = oracle::whole_task_times(s, task_mb(0.5));
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[j], want[j], 1e-12 * want[j]);
}

TEST(ChunkedBaselines, Errors) {
  const Scenario s = random_scenario(4, 5);
  EXPECT_THROW(max_min_alloc(s, task_mb(1.0), 4), std::invalid_argument);
  EXPECT_THROW(min_min_alloc(s, task_mb(1.0), 3), std::invalid_argument);
  DroneNode self{0, {0, 0, 0}, 0.5e9, 0.0};
  const Scenario empty(self, {}, ChannelModel{});
  Rng rng(1);
  EXPECT_THROW(random_alloc(empty, task_mb(1.0), rng), std::invalid_argument);
  EXPECT_THROW(wrr_alloc(empty, task_mb(1.0)), std::invalid_argument);
  EXPECT_THROW(max_min_alloc(empty, task_mb(1.0)), std::invalid_argument);
}

TEST(Baselines, AlwaysNormalizedOnRandomScenarios) {
  Rng rng(9);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Scenario s = random_scenario(seed);
    const TaskSpec t = task_mb(0.1 + 0.001 * static_cast<double>(seed));
    expect_valid(random_alloc(s, t, rng), s.size());
    expect_valid(wrr_alloc(s, t), s.size());
    expect_valid(max_min_alloc(s, t), s.size());
    expect_valid(min_min_alloc(s, t), s.size());
  }
}

TEST(AllocationFromFractions, NothingOffloaded) {
  const std::vector<double> f{1.0, 0.0, 0.0};
  const Allocation a = allocation_from_fractions(f);
  EXPECT_EQ(a.rho, 1.0);
  EXPECT_TRUE(a.normalized());
}

}  // namespace
}  // namespace fcsd
