#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "oracles.hpp"
#include "polyw/invariants.hpp"

using namespace polyw;

TEST(Rho, PairIdentification) {
  EXPECT_EQ(RhoPair::make(2, -3), RhoPair::make(3, -2));
  EXPECT_THROW(RhoPair::make(2, -2), precondition_error);
  EXPECT_THROW(RhoPair::make(0, 1), precondition_error);
  EXPECT_THROW(RhoElement::make(2, {{1, 3}}), rank_error);
}

TEST(Rho, ExampleWord) {
  const RhoElement r = rho(parse_cyclic("a^6 b^-3 c^5 b^4 c^-7", 3));
  EXPECT_EQ(r, RhoElement::make(3, {{1, -2}, {-2, 3}, {3, 2}, {2, -3}, {-3, 1}}));
  EXPECT_EQ(r.size(), 5U);
  EXPECT_TRUE(rho(parse_cyclic("a^5", 2)).pairs.empty());
}

TEST(Rho, InvariantUnderRotationAndInversion) {
  const CyclicWord w = parse_cyclic("a^2 b^-3 c^2 a^-2 c^3", 3);
  EXPECT_EQ(rho(w), rho(w.inverse()));
  EXPECT_EQ(rho(w), rho(transform(w, Relabeling::rotate(4))));
}

TEST(Tn, DistinctSyllablesAreOneCycle) {
  const RhoElement r = rho(parse_cyclic("a^2 b^-3 c^2", 3));
  const auto cert = tn_membership(r);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->cycles.size(), 1U);
  EXPECT_TRUE(verify_tn(r, *cert));
}

TEST(Tn, NecessityExample) {
  EXPECT_FALSE(tn_membership(rho(parse_cyclic("a^2 b^2 c^3 b^-3", 3))));
}

TEST(Tn, VerifyRejectsBadCertificates) {
  const RhoElement r = rho(parse_cyclic("a^6 b^-3 c^5 b^4 c^-7", 3));
  TnCertificate cert = *tn_membership(r);
  ASSERT_TRUE(verify_tn(r, cert));
  TnCertificate dropped = cert;
  dropped.cycles.pop_back();
  EXPECT_FALSE(verify_tn(r, dropped));
  TnCertificate flipped = cert;
  flipped.cycles[0].flipped[0] = !flipped.cycles[0].flipped[0];
  EXPECT_FALSE(verify_tn(r, flipped));
}

TEST(Tn, AgreesWithOracleRank4Sample) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> gen(-4, 4);
  int members = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<std::pair<int, int>> raw;
    const int size = 1 + trial % 6;
    while (static_cast<int>(raw.size()) < size) {
      const int i = gen(rng), j = gen(rng);
      if (i != 0 && j != 0 && std::abs(i) != std::abs(j)) raw.emplace_back(i, j);
    }
    const RhoElement r = RhoElement::make(4, raw);
    const auto cert = tn_membership(r);
    EXPECT_EQ(cert.has_value(), oracle::tn_member(raw));
    if (cert) {
      EXPECT_TRUE(verify_tn(r, *cert));
      ++members;
    }
  }
  EXPECT_GT(members, 0);
}

TEST(Tn, CapIsInconclusive) {
  EXPECT_THROW(tn_membership(rho(parse_cyclic("a^2 b^-3 c^2", 3)), 2), resource_error);
}

TEST(Lambda, TermsAreRotationClasses) {
  EXPECT_EQ(LambdaTerm::make(1, {2, 1, 3}), LambdaTerm::make(1, {1, 3, 2}));
  EXPECT_NE(LambdaTerm::make(1, {2, 1}), LambdaTerm::make(-1, {2, 1}));
  EXPECT_EQ(LambdaTerm::make(-1, {1, 1, 2}).str(), "-(1,1,2)");
  EXPECT_THROW(LambdaTerm::make(1, {}), precondition_error);
  EXPECT_THROW(LambdaTerm::make(1, {0, 2}), precondition_error);
}

TEST(U, OppositeSignsPair) {
  const LambdaMultiset l = make_lambda({LambdaTerm::make(1, {1, 1, 2}), LambdaTerm::make(-1, {4})});
  const auto u = u_membership(l);
  ASSERT_TRUE(u);
  EXPECT_TRUE(verify_u(l, *u));
  EXPECT_FALSE(u_membership(make_lambda({LambdaTerm::make(1, {3}), LambdaTerm::make(-1, {4})})));
}

TEST(U, SameSignNeedsOffset) {
  // (1) with itself: m = 1, every shift collides.
  EXPECT_FALSE(u_membership(repeat(LambdaTerm::make(1, {1}), 2)));
  EXPECT_TRUE(u_membership(repeat(LambdaTerm::make(1, {2}), 2)));
  EXPECT_FALSE(u_membership(repeat(LambdaTerm::make(-1, {1, 1}), 2)));
}

TEST(U, OddMultisetsAreNotMembers) {
  EXPECT_FALSE(u_membership(make_lambda({LambdaTerm::make(1, {2})})));
  EXPECT_TRUE(u_membership({}));
}

TEST(U, ShortcutLemmaProperty) {
  // When the shortcut applies, 2 * term is in U with the stated offset.
  std::vector<int> c;
  int applied = 0;
  std::function<void(int)> rec = [&](int left) {
    if (!c.empty()) {
      const LambdaTerm t = LambdaTerm::make(1, c);
      if (const auto s = submonoid_shortcut(t)) {
        ++applied;
        EXPECT_TRUE(offset_separates(s->composition, s->composition, s->offset)) << t.str();
        EXPECT_TRUE(u_membership(repeat(t, 2))) << t.str();
      }
    }
    for (int x = 1; x <= left; ++x) {
      c.push_back(x);
      rec(left - x);
      c.pop_back();
    }
  };
  rec(8);
  EXPECT_GT(applied, 50);
}

TEST(U, AgreesWithOracleRandom) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> len(1, 3), part(1, 3), sign(0, 1);
  for (int trial = 0; trial < 1500; ++trial) {
    std::vector<LambdaTerm> terms;
    std::vector<oracle::Term> ref;
    const int size = 2 * (1 + trial % 4);
    for (int i = 0; i < size; ++i) {
      std::vector<int> comp(static_cast<std::size_t>(len(rng)));
      for (int& x : comp) x = part(rng);
      const int s = sign(rng) ? 1 : -1;
      terms.push_back(LambdaTerm::make(s, comp));
      ref.push_back({s, comp});
    }
    const LambdaMultiset l = make_lambda(terms);
    const auto u = u_membership(l);
    EXPECT_EQ(u.has_value(), oracle::u_member(ref));
    std::vector<LambdaTerm> swapped;
    for (const oracle::Term& t : ref) swapped.push_back(LambdaTerm::make(-t.sign, t.comp));
    EXPECT_EQ(u_membership(make_lambda(swapped)).has_value(), u.has_value());
    if (u) {
      EXPECT_TRUE(verify_u(l, *u));
    }
  }
}

TEST(Predicates, IsolatedGenerators) {
  EXPECT_TRUE(has_no_isolated_generators(parse_cyclic("a^2 b^-3", 2)));
  EXPECT_FALSE(has_no_isolated_generators(parse_cyclic("a^2 b a^3 b^-1", 2)));
}

TEST(Predicates, HeightOne) {
  const auto h = is_simple_height_one(parse_cyclic("a (a^2)^b", 2));
  ASSERT_TRUE(h);
  EXPECT_EQ(h->p, 1);
  EXPECT_EQ(h->q, 2);
  EXPECT_EQ(h->p_prime, 1);
  EXPECT_EQ(h->q_prime, 0);
  EXPECT_EQ(h->l, 1);
  EXPECT_FALSE(is_simple_height_one(parse_cyclic("a^2 b^2", 2)));
  EXPECT_FALSE(is_simple_height_one(parse_cyclic("a (a^-2)^b a^-1 (a^2)^b", 2)));
}
