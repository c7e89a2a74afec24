#include <gtest/gtest.h>

#include <random>

#include "polyw/whitehead.hpp"

using namespace polyw;

TEST(Whitehead, MovesAreAutomorphisms) {
  // Each move sends a basis to a basis, so primitive elements stay primitive
  // and the commutator keeps its orbit length.
  const CyclicWord commutator = parse_cyclic("a b A B", 2);
  for (const WhiteheadMove& m : second_kind_moves(2)) {
    EXPECT_GE(apply_move(commutator, m).size(), 4U) << m.str();
  }
}

TEST(Whitehead, MinimizeExamples) {
  EXPECT_EQ(minimize(parse_cyclic("a b a b^2 a b^3", 2)).final.size(), 5U);
  EXPECT_EQ(minimize(parse_cyclic("a^2 b^2 c^3 b^-3", 3)).final.size(), 1U);
  EXPECT_EQ(minimize(parse_cyclic("a^2 b^2", 2)).final.size(), 4U);
  EXPECT_EQ(minimize(parse_cyclic("a b A B", 2)).final.size(), 4U);
}

TEST(Whitehead, TraceIsStrictlyDecreasing) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> g(1, 2), s(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Letter> raw;
    for (int i = 0; i < 4 + trial % 9; ++i) raw.emplace_back(g(rng), s(rng) ? 1 : -1);
    CyclicWord w;
    try {
      w = CyclicWord::from_letters(2, raw);
    } catch (const precondition_error&) {
      continue;
    }
    const MinimizationTrace t = minimize(w);
    std::size_t prev = t.start.size();
    for (const MinimizationStep& step : t.steps) {
      EXPECT_LT(step.result.size(), prev);
      prev = step.result.size();
    }
    // Locally minimal: no move shortens the result.
    for (const WhiteheadMove& m : second_kind_moves(2)) {
      EXPECT_GE(apply_move(t.final, m).size(), t.final.size());
    }
  }
}

TEST(Whitehead, Equivalence) {
  EXPECT_TRUE(equivalent(parse_cyclic("a b a b^2 a b^3", 2), parse_cyclic("a (a^2)^b", 2)));
  EXPECT_TRUE(equivalent(parse_cyclic("a^2 b^2", 2), parse_cyclic("b^2 a^-2", 2)));
  EXPECT_FALSE(equivalent(parse_cyclic("a^2 b^2", 2), parse_cyclic("a b A B", 2)));
  EXPECT_FALSE(equivalent(parse_cyclic("a^2 b^3", 2), parse_cyclic("a^2 b^2", 2)));
}

TEST(Whitehead, Diskbusting) {
  EXPECT_TRUE(is_diskbusting(parse_cyclic("a^2 b^2", 2)));
  EXPECT_TRUE(is_diskbusting(parse_cyclic("a b A B", 2)));
  EXPECT_TRUE(is_diskbusting(parse_cyclic("a b a b^2 a b^3", 2)));
  EXPECT_FALSE(is_diskbusting(parse_cyclic("a b", 2)));
  EXPECT_FALSE(is_diskbusting(parse_cyclic("a^2 b^2", 3)));
  EXPECT_FALSE(is_diskbusting(parse_cyclic("a^2 b^2 c^3 b^-3", 3)));
}

TEST(Whitehead, OrbitCapIsInconclusive) {
  EXPECT_THROW(minimal_orbit(parse_cyclic("a^2 b^2 c^2", 3), 1), resource_error);
}
