#include <gtest/gtest.h>

#include "common.hpp"

using namespace dynsc;
using dynsc::testing::fix1;

TEST(Global, FirstInsertionRebuildsEverything) {
  const auto sys = fix1();
  GlobalAlgorithm algo(sys, 2.0, 4);
  const int cap = algo.state().level_cap();
  ASSERT_EQ(cap, 2);
  std::vector<int> crits;
  algo.before_rebuild = [&](const LevelState&, int i_crit) { crits.push_back(i_crit); };
  const auto report = algo.update(UpdateStep::insert(3));
  EXPECT_TRUE(report.rebuild_fired);
  EXPECT_EQ(crits, std::vector<int>{cap});
  EXPECT_EQ(algo.state().asn(3), 1u);
  EXPECT_EQ(algo.passive_level(3), cap + 1);
  for (int i = 0; i <= cap; ++i) {
    EXPECT_EQ(algo.clean_counts()[i], 1);
    EXPECT_EQ(algo.passive_counts()[i], 0);
    EXPECT_EQ(algo.deletion_counts()[i], 0);
  }
  EXPECT_EQ(algo.check(), std::nullopt);

  const auto second = algo.update(UpdateStep::insert(2));
  EXPECT_FALSE(second.rebuild_fired);
  EXPECT_EQ(algo.state().asn(2), 1u);
  EXPECT_EQ(algo.passive_level(2), 0);
  EXPECT_EQ(algo.passive_counts()[0], 1);
  EXPECT_EQ(algo.check(), std::nullopt);

  const auto third = algo.update(UpdateStep::erase(2));
  EXPECT_FALSE(third.rebuild_fired);
  EXPECT_EQ(algo.passive_counts()[0], 0);
  EXPECT_EQ(algo.deletion_counts()[0], 1);
  EXPECT_EQ(algo.clean_counts()[0], 1);
  EXPECT_EQ(algo.check(), std::nullopt);
}

TEST(Global, RejectsInvalidSteps) {
  const auto sys = fix1();
  GlobalAlgorithm algo(sys, 1.25, 4);
  algo.update(UpdateStep::insert(1));
  EXPECT_THROW(algo.update(UpdateStep::insert(1)), UpdateError);
  EXPECT_THROW(algo.update(UpdateStep::erase(0)), UpdateError);
}

TEST(Global, FuzzInvariantThree) {
  SplitMix64 rng(51);
  std::size_t steps = 0, rebuilds = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto sys = dynsc::testing::small_instance(rng.next(), 40 + rng.next_below(150), 5 + rng.next_below(40));
    for (double beta : {1.25, 1.495}) {
      const auto seq = random_workload(sys, 10 + rng.next_below(100), 0.6, rng.next());
      GlobalAlgorithm algo(sys, beta, seq.header.capacity);
      std::vector<int> plev_before;
      std::vector<std::int64_t> deleted_before;
      algo.before_rebuild = [&](const LevelState& state, int i_crit) {
        const double slack = 2.0 * (beta - 1.0);
        for (int i = i_crit + 1; i <= state.level_cap(); ++i) {
          ASSERT_LE(static_cast<double>(algo.passive_counts()[i] + algo.deletion_counts()[i]),
                    slack * static_cast<double>(algo.clean_counts()[i]));
        }
        plev_before.assign(sys.num_elements(), -1);
        for (ElementId e = 0; e < sys.num_elements(); ++e) {
          if (state.is_active(e)) plev_before[e] = algo.passive_level(e);
        }
        deleted_before = algo.deletion_counts();
      };
      algo.after_rebuild = [&](const LevelState& state, int i_crit) {
        ++rebuilds;
        for (ElementId e = 0; e < sys.num_elements(); ++e) {
          if (state.is_active(e)) { ASSERT_GE(algo.passive_level(e), plev_before[e]); }
        }
        for (int i = 0; i <= state.level_cap(); ++i) {
          ASSERT_EQ(algo.deletion_counts()[i], i <= i_crit ? 0 : deleted_before[i]);
        }
      };
      std::vector<ElementId> active;
      std::vector<int> plev(sys.num_elements(), -1);
      for (const auto& step : seq.steps) {
        algo.update(step);
        ++steps;
        if (step.is_insert()) {
          active.push_back(step.element);
        } else {
          active.erase(std::find(active.begin(), active.end(), step.element));
          plev[step.element] = -1;
        }
        ASSERT_EQ(algo.check(), std::nullopt);
        ASSERT_TRUE(dynsc::testing::covers(sys, algo.cover(), active));
        for (ElementId e : active) {
          ASSERT_GE(algo.passive_level(e), plev[e]);
          ASSERT_GE(algo.passive_level(e), algo.state().elem_level(e));
          plev[e] = algo.passive_level(e);
        }
      }
    }
  }
  EXPECT_GE(steps, 10000u);
  EXPECT_GT(rebuilds, 0u);
}
