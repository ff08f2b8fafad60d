#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "common.hpp"

using namespace dynsc;
using dynsc::testing::fix1;

TEST(Partial, DeletionTriggersRebuild) {
  const auto sys = fix1();
  PartialAlgorithm algo(sys, 2.0, 4);
  algo.mutable_state().insert(2, 1, 0);
  algo.mutable_state().insert(3, 1, 0);
  const auto report = algo.update(UpdateStep::erase(2));
  EXPECT_TRUE(report.rebuild_fired);
  EXPECT_EQ(algo.state().cov(1).size(), 1u);
  EXPECT_EQ(algo.state().asn(3), 1u);
  EXPECT_EQ(algo.dirt_counters()[0], 0u);
  EXPECT_EQ(algo.total_dirt(), 0.0);
  EXPECT_EQ(algo.check(), std::nullopt);
}

TEST(Partial, CleanInsert) {
  const auto sys = fix1();
  PartialAlgorithm algo(sys, 2.0, 4);
  const auto report = algo.update(UpdateStep::insert(0));
  EXPECT_FALSE(report.rebuild_fired);
  EXPECT_LE(report.recourse, 1u);
  EXPECT_EQ(algo.total_dirt(), 0.0);
  const auto second = algo.update(UpdateStep::insert(1));
  EXPECT_FALSE(second.rebuild_fired);
  EXPECT_EQ(second.recourse, 0u);
}

TEST(Partial, RiseChargesDirt) {
  const auto sys = SetSystem::from_sets(4, {{0, 1, 2, 3}, {0}, {1}, {2}, {3}});
  PartialAlgorithm algo(sys, 2.0, 4);
  std::vector<std::pair<int, std::vector<std::uint64_t>>> seen;
  algo.before_rebuild = [&](const LevelState&, int i_crit) { seen.push_back({i_crit, algo.dirt_counters()}); };
  for (ElementId e = 0; e < 3; ++e) algo.update(UpdateStep::insert(e));
  EXPECT_TRUE(seen.empty());
  const auto report = algo.update(UpdateStep::insert(3));
  EXPECT_TRUE(report.rebuild_fired);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].second[0], 4u);  // four elements left level 0
  // R(0) = R(1) = 4, R(2) = 4/2: ties go high.
  EXPECT_EQ(seen[0].first, 1);
  EXPECT_EQ(algo.state().set_level(0), 2);
  EXPECT_EQ(algo.total_dirt(), 0.0);
  EXPECT_EQ(algo.check(), std::nullopt);
}

TEST(Partial, CriticalLevelDirtAtZero) {
  // One cover set at level 0 and one at level 5, all dirt at level 0:
  // R(0..4) = c0/2, R(5..) = c0/3, so the highest tied level wins.
  std::vector<ElementId> big(40);
  for (ElementId e = 0; e < 40; ++e) big[e] = e;
  const auto sys = SetSystem::from_sets(41, {{40}, big});
  PartialAlgorithm algo(sys, 2.0, 64);
  ASSERT_EQ(algo.state().level_cap(), 6);
  algo.mutable_state().insert(40, 0, 0);
  for (ElementId e = 0; e < 40; ++e) algo.mutable_state().insert(e, 1, 5);
  algo.dirt_counters()[0] = 3;
  EXPECT_EQ(algo.find_critical_level(), 4);
}

TEST(Partial, CriticalLevelUniformDirt) {
  std::vector<ElementId> big(40);
  for (ElementId e = 0; e < 40; ++e) big[e] = e;
  const auto sys = SetSystem::from_sets(40, {big});
  PartialAlgorithm algo(sys, 2.0, 64);
  const int cap = algo.state().level_cap();
  // No cover sets: the denominator stays 1 and the cumulative dirt grows.
  for (auto& c : algo.dirt_counters()) c = 1;
  EXPECT_EQ(algo.find_critical_level(), cap);
  // A single set at the top level joins the denominator only at the cap,
  // which halves R there: R(cap-1) = 2 - 2^-(cap-1) > R(cap) = (2 - 2^-cap) / 2.
  for (ElementId e = 0; e < 40; ++e) algo.mutable_state().insert(e, 0, cap);
  EXPECT_EQ(algo.find_critical_level(), cap - 1);
  for (auto& c : algo.dirt_counters()) c = 0;
  algo.dirt_counters().back() = 5;
  EXPECT_EQ(algo.find_critical_level(), cap);
}

TEST(Partial, DirtIsRecomputedFromCounts) {
  const auto sys = fix1();
  PartialAlgorithm algo(sys, 1.5, 4);
  auto& c = algo.dirt_counters();
  c[0] = 3;
  c[1] = 2;
  c[2] = 7;
  const double expect = 3.0 + 2.0 / 1.5 + 7.0 / (1.5 * 1.5);
  EXPECT_DOUBLE_EQ(algo.total_dirt(), expect);
}

TEST(Partial, FuzzInvariantTwo) {
  SplitMix64 rng(41);
  std::size_t steps = 0, rebuilds = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto sys = dynsc::testing::small_instance(rng.next(), 40 + rng.next_below(150), 5 + rng.next_below(40));
    for (double beta : {1.2, 1.9}) {
      const auto seq = random_workload(sys, 10 + rng.next_below(100), 0.6, rng.next());
      PartialAlgorithm algo(sys, beta, seq.header.capacity);
      std::map<ElementId, std::pair<SetId, int>> above;
      std::vector<std::uint64_t> dirt_before;
      algo.before_rebuild = [&](const LevelState& state, int i_crit) {
        above.clear();
        for (ElementId e = 0; e < sys.num_elements(); ++e) {
          if (state.is_active(e) && state.elem_level(e) > i_crit) above[e] = {state.asn(e), state.elem_level(e)};
        }
        dirt_before = algo.dirt_counters();
      };
      algo.after_rebuild = [&](const LevelState& state, int i_crit) {
        ++rebuilds;
        for (const auto& [e, where] : above) {
          ASSERT_EQ(state.asn(e), where.first);
          ASSERT_EQ(state.elem_level(e), where.second);
        }
        const auto& dirt = algo.dirt_counters();
        for (int j = 0; j < static_cast<int>(dirt.size()); ++j) {
          ASSERT_EQ(dirt[j], j <= i_crit ? 0u : dirt_before[j]);
        }
      };
      std::vector<ElementId> active;
      for (const auto& step : seq.steps) {
        algo.update(step);
        ++steps;
        if (step.is_insert()) {
          active.push_back(step.element);
        } else {
          active.erase(std::find(active.begin(), active.end(), step.element));
        }
        ASSERT_EQ(algo.check(), std::nullopt);
        ASSERT_TRUE(dynsc::testing::covers(sys, algo.cover(), active));
      }
    }
  }
  EXPECT_GE(steps, 10000u);
  EXPECT_GT(rebuilds, 0u);
}
