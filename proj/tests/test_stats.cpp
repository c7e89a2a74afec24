#include <gtest/gtest.h>

#include "polyw/invariants.hpp"
#include "polyw/stats.hpp"

using namespace polyw;

namespace {

struct RunCounts {
  long long p = 0, q = 0, p1 = 0, q1 = 0, l = 0, s = 0;
};

// Cyclic run counts by scanning the doubled word.
RunCounts brute_runs(const std::string& x) {
  RunCounts r;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    (x[i] == 'a' ? r.p : r.q) += 1;
    if (i == 0 || x[i] != x[i - 1]) ++r.s;
  }
  if (r.p == 0 || r.q == 0) return r;
  const std::string xx = x + x;
  for (std::size_t i = 0; i < n; ++i) {
    if (xx[i + n - 1] == xx[i + n]) continue;  // not a run start
    std::size_t len = 0;
    while (len < n && xx[i + len] == xx[i]) ++len;
    if (xx[i] == 'a') {
      ++r.l;
      r.p1 += len == 1;
    } else {
      r.q1 += len == 1;
    }
  }
  return r;
}

}  // namespace

TEST(Stats, Goldens) {
  const SampleStats a = height_one_stats("aaabb");
  EXPECT_EQ(a.p, 3);
  EXPECT_EQ(a.q, 2);
  EXPECT_EQ(a.s, 2);
  EXPECT_EQ(a.l, 1);
  EXPECT_EQ(a.p_prime, 0);
  EXPECT_EQ(a.q_prime, 0);
  EXPECT_EQ(a.word, "a^3 (a^2)^b");

  const SampleStats b = height_one_stats("abababab");
  EXPECT_EQ(b.p, 4);
  EXPECT_EQ(b.q, 4);
  EXPECT_EQ(b.s, 8);
  EXPECT_EQ(b.l, 4);
  EXPECT_EQ(b.p_prime, 4);
  EXPECT_EQ(b.q_prime, 4);
  EXPECT_TRUE(b.condition());

  const SampleStats c = height_one_stats("aaaa");
  EXPECT_TRUE(c.degenerate);
  EXPECT_DOUBLE_EQ(c.l_value(), 0.5);
  EXPECT_EQ(c.s, 1);
}

TEST(Stats, ExhaustiveAgainstBruteForce) {
  for (int n = 1; n <= 10; ++n) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::string x;
      for (int i = 0; i < n; ++i) x += (mask >> i) & 1 ? 'b' : 'a';
      const SampleStats st = height_one_stats(x);
      const RunCounts r = brute_runs(x);
      ASSERT_EQ(st.p, r.p) << x;
      ASSERT_EQ(st.q, r.q) << x;
      ASSERT_EQ(st.s, r.s) << x;
      ASSERT_EQ(st.degenerate, r.p == 0 || r.q == 0) << x;
      if (st.degenerate) continue;
      ASSERT_EQ(st.l, r.l) << x;
      ASSERT_EQ(st.p_prime, r.p1) << x;
      ASSERT_EQ(st.q_prime, r.q1) << x;
      ASSERT_EQ(st.cond_q, r.p * r.p1 <= r.q * r.q) << x;
      ASSERT_EQ(st.cond_p, r.q * r.q1 <= r.p * r.p) << x;
    }
  }
}

TEST(Stats, WordIsSimpleHeightOne) {
  for (const char* x : {"ab", "aabab", "abbbaab", "babaab"}) {
    const SampleStats st = height_one_stats(x);
    const auto h = is_simple_height_one(parse_cyclic(st.word, 2));
    ASSERT_TRUE(h) << x;
    EXPECT_EQ(h->p, st.p) << x;
    EXPECT_EQ(h->q, st.q) << x;
    EXPECT_EQ(h->p_prime, st.p_prime) << x;
    EXPECT_EQ(h->q_prime, st.q_prime) << x;
    EXPECT_EQ(h->l, st.l) << x;
  }
}

TEST(Stats, Preconditions) {
  EXPECT_THROW(height_one_stats(""), precondition_error);
  EXPECT_THROW(height_one_stats("abc"), precondition_error);
  EXPECT_THROW(run_trials(1, 10, 1), precondition_error);
  EXPECT_THROW(run_trials(10, 0, 1), precondition_error);
  EXPECT_THROW(run_trials(10, 10, 1, 0), precondition_error);
}

TEST(Trials, DeterministicAndJobsInvariant) {
  const TrialReport one = run_trials(40, 500, 99);
  const TrialReport again = run_trials(40, 500, 99);
  const TrialReport three = run_trials(40, 500, 99, 3);
  EXPECT_EQ(to_csv(one), to_csv(again));
  EXPECT_EQ(to_csv(one), to_csv(three));
  EXPECT_NE(to_csv(one), to_csv(run_trials(40, 500, 100)));
  EXPECT_EQ(sample_height_one(40, 99, 7).x, sample_height_one(40, 99, 7).x);
}

TEST(Trials, RunCountMoments) {
  // s - 1 counts changes between adjacent fair bits: Binomial(N - 1, 1/2).
  const int N = 101;
  const TrialReport r = run_trials(N, 20000, 5);
  EXPECT_NEAR(r.mean_runs(), (N - 1) / 2.0, 0.2);
  EXPECT_NEAR(r.var_runs(), (N - 1) / 4.0, 1.5);
  EXPECT_NEAR(r.mean_p(), N / 2.0, 0.2);
}

TEST(Trials, CsvLayout) {
  EXPECT_EQ(csv_header(), "N,samples,seed,p_condition,p_fail_q,p_fail_p,mean_runs,var_runs,rng");
  const std::string row = to_csv(run_trials(8, 10, 3));
  // The rng id contains a comma, so it is quoted.
  const std::string quoted = std::string("\"") + rng_algorithm + "\"";
  ASSERT_GE(row.size(), quoted.size());
  EXPECT_EQ(row.substr(row.size() - quoted.size()), quoted);
  const std::string head = row.substr(0, row.size() - quoted.size());
  EXPECT_EQ(std::count(head.begin(), head.end(), ','), 8);
  EXPECT_EQ(std::count(head.begin(), head.end(), '"'), 0);
}
