#include <gtest/gtest.h>

#include <deque>

#include "common.hpp"

using namespace dynsc;

namespace {

SetSystem chain(std::size_t x) {
  std::vector<std::vector<SetId>> inc(x);
  for (std::size_t e = 0; e < x; ++e) inc[e] = {static_cast<SetId>(e % 7)};
  return SetSystem::from_incidence(7, inc);
}

}  // namespace

TEST(SplitMix64, ReferenceOutputs) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(rng.next(), 0x06C45D188009454Full);
  SplitMix64 unit(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = unit.next_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Dynamize, ThreeElementsAlternate) {
  const auto sys = chain(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto seq = dynamize(sys, seed);
    EXPECT_EQ(seq.header.capacity, 1u);
    const std::vector<UpdateStep> want{UpdateStep::insert(0), UpdateStep::erase(0), UpdateStep::insert(1),
                                       UpdateStep::erase(1), UpdateStep::insert(2), UpdateStep::erase(2)};
    EXPECT_EQ(seq.steps, want);
    EXPECT_EQ(validate_sequence(seq, sys), std::nullopt);
  }
}

TEST(Dynamize, ValidAndReproducible) {
  for (std::size_t x : {1, 3, 50, 1000, 4321}) {
    const auto sys = chain(x);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto seq = dynamize(sys, seed);
      ASSERT_EQ(validate_sequence(seq, sys), std::nullopt) << "x=" << x << " seed=" << seed;
      EXPECT_EQ(seq.header.capacity, std::max<std::size_t>(1, x / 10));
      EXPECT_EQ(seq.header.length, 2 * x);
      EXPECT_EQ(seq.header.seed, seed);
      EXPECT_EQ(to_sequence_text(dynamize(sys, seed)), to_sequence_text(seq));
      EXPECT_EQ(parse_sequence(to_sequence_text(seq)), seq);
    }
  }
}

TEST(Dynamize, DeletionsAreRecentOrOldest) {
  const auto sys = chain(2000);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto seq = dynamize(sys, seed);
    std::deque<ElementId> active;
    std::size_t recent = 0, oldest = 0;
    for (const auto& step : seq.steps) {
      if (step.is_insert()) {
        active.push_back(step.element);
        continue;
      }
      const auto it = std::find(active.begin(), active.end(), step.element);
      ASSERT_NE(it, active.end());
      const auto from_back = static_cast<std::size_t>(active.end() - it);
      const bool is_oldest = it == active.begin();
      ASSERT_TRUE(is_oldest || from_back <= 5);
      (is_oldest ? oldest : recent) += 1;
      active.erase(it);
    }
    EXPECT_GT(recent, 0u);
    EXPECT_GT(oldest, 0u);
  }
  // Different seeds give different sequences.
  EXPECT_NE(dynamize(sys, 1).steps, dynamize(sys, 2).steps);
}

TEST(Dynamize, RejectsEmptyInstance) { EXPECT_THROW(dynamize(SetSystem{}, 1), SequenceError); }

TEST(ValidateSequence, ReportsViolations) {
  const auto sys = chain(3);
  UpdateSequence seq;
  seq.header = {3, 1, 0, 6};
  seq.steps = {UpdateStep::insert(0), UpdateStep::insert(0)};
  EXPECT_EQ(validate_sequence(seq, sys), std::optional<std::string>("element 1 inserted twice at step 2"));

  seq.header.capacity = 3;
  seq.steps = {UpdateStep::insert(0), UpdateStep::insert(1), UpdateStep::erase(0)};
  EXPECT_EQ(validate_sequence(seq, sys), std::optional<std::string>("sequence does not end empty"));

  seq.header.capacity = 1;
  seq.steps = {UpdateStep::insert(0), UpdateStep::insert(1)};
  EXPECT_NE(validate_sequence(seq, sys)->find("capacity"), std::string::npos);

  seq.steps = {UpdateStep::insert(1)};
  EXPECT_NE(validate_sequence(seq, sys)->find("out of order"), std::string::npos);

  seq.steps = {UpdateStep::erase(0)};
  EXPECT_NE(validate_sequence(seq, sys)->find("before insertion"), std::string::npos);

  seq.steps = {UpdateStep::insert(0), UpdateStep::erase(0), UpdateStep::erase(0)};
  EXPECT_NE(validate_sequence(seq, sys)->find("deleted twice"), std::string::npos);

  seq.steps = {UpdateStep::insert(0), UpdateStep::erase(0)};
  EXPECT_NE(validate_sequence(seq, sys)->find("k=6"), std::string::npos);
}

TEST(SequenceText, Format) {
  const auto seq = dynamize(chain(3), 42);
  EXPECT_EQ(to_sequence_text(seq), "# x=3 cap=1 seed=42 k=6\n+ 1\n- 1\n+ 2\n- 2\n+ 3\n- 3\n");
  EXPECT_THROW(parse_sequence(""), SequenceError);
  EXPECT_THROW(parse_sequence("x=3 cap=1 seed=1 k=2\n"), SequenceError);
  EXPECT_THROW(parse_sequence("# x=3 cap=1 seed=1 k=2\n* 1\n"), SequenceError);
  EXPECT_THROW(parse_sequence("# x=3 cap=1 seed=1 k=2\n+ 0\n"), SequenceError);
  EXPECT_THROW(parse_sequence("# x=3 cap=1 sd=1 k=2\n"), SequenceError);
}
