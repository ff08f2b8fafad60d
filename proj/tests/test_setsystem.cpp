#include <gtest/gtest.h>

#include "common.hpp"

using namespace dynsc;
using dynsc::testing::fix1;

namespace {

std::vector<ElementId> members(const SetSystem& sys, SetId s) {
  auto span = sys.set(s);
  return {span.begin(), span.end()};
}

std::string error_of(const char* text) {
  try {
    load_instance(text);
  } catch (const InstanceError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(SetSystem, Fix1Transpose) {
  const auto sys = fix1();
  EXPECT_EQ(sys.num_elements(), 4u);
  EXPECT_EQ(sys.num_sets(), 3u);
  EXPECT_EQ(members(sys, 0), (std::vector<ElementId>{0, 1, 2}));
  EXPECT_EQ(members(sys, 1), (std::vector<ElementId>{2, 3}));
  EXPECT_EQ(members(sys, 2), (std::vector<ElementId>{3}));
  for (ElementId e = 0; e < 4; ++e) {
    for (SetId s = 0; s < 3; ++s) {
      const auto inc = sys.sets_of(e);
      EXPECT_EQ(sys.contains(s, e), std::find(inc.begin(), inc.end(), s) != inc.end());
    }
  }
}

TEST(SetSystem, RejectsBadInput) {
  EXPECT_NE(error_of("0 5\n").find("no elements"), std::string::npos);
  EXPECT_NE(error_of("1 2\n1 1\n").find("duplicate vertex"), std::string::npos);
  EXPECT_NE(error_of("1 2\n3\n").find("out of range"), std::string::npos);
  EXPECT_NE(error_of("2 2\n1\n\n").find("empty hyperedge"), std::string::npos);
  EXPECT_NE(error_of("x 2\n1\n").find("malformed header"), std::string::npos);
  EXPECT_NE(error_of("1 2 3\n1\n").find("malformed header"), std::string::npos);
  EXPECT_NE(error_of("2 2\n1").find("expected 2"), std::string::npos);
  EXPECT_NE(error_of("1 2\n1\n2\n").find("more hyperedge lines"), std::string::npos);
  EXPECT_NE(error_of("1 2\n1 x\n").find("malformed vertex"), std::string::npos);
  EXPECT_NE(error_of("").find("malformed header"), std::string::npos);
}

TEST(SetSystem, CommentsAndCrlf) {
  const auto sys = load_instance("% a comment\n4 3\r\n1\r\n% inside\n1\n1 2\n2 3\n\n");
  EXPECT_EQ(sys, fix1());
}

TEST(SetSystem, Frequency) {
  EXPECT_EQ(frequency_of(fix1()), 2u);
  EXPECT_EQ(frequency_of(load_instance("1 1\n1\n")), 1u);
  EXPECT_EQ(frequency_of(load_instance("2 5\n1 2 3 4 5\n2\n")), 5u);
}

TEST(SetSystem, TransposeRoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto sys = dynsc::testing::small_instance(seed, 30, 12);
    std::vector<std::vector<ElementId>> sets;
    for (SetId s = 0; s < sys.num_sets(); ++s) sets.push_back(members(sys, s));
    EXPECT_EQ(SetSystem::from_sets(sys.num_elements(), sets), sys);
    std::size_t total = 0;
    for (SetId s = 0; s < sys.num_sets(); ++s) total += sys.set(s).size();
    std::size_t total_inc = 0;
    std::size_t f = 0;
    for (ElementId e = 0; e < sys.num_elements(); ++e) {
      total_inc += sys.sets_of(e).size();
      f = std::max(f, sys.sets_of(e).size());
      EXPECT_TRUE(std::is_sorted(sys.sets_of(e).begin(), sys.sets_of(e).end()));
    }
    EXPECT_EQ(total, total_inc);
    EXPECT_EQ(f, sys.frequency());
  }
}

TEST(SetSystem, TextRoundTripAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sys = dynsc::testing::small_instance(seed, 25, 9);
    const auto text = to_instance_text(sys);
    EXPECT_EQ(load_instance(text), sys);
    EXPECT_EQ(load_instance(text), load_instance(text));
  }
}

TEST(SetSystem, FromSetsRejectsUncoveredElement) {
  EXPECT_THROW(SetSystem::from_sets(3, {{0, 1}}), InstanceError);
  EXPECT_THROW(SetSystem::from_sets(2, {{0, 5}}), InstanceError);
}
