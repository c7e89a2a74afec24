#pragma once

// Monte Carlo statistics for random positive height-one words.
//
// A uniform positive word x of length N in a, b is mapped to w = f(x) with
// f(a) = a, f(b) = a^b. Sample i of a run with seed s draws x from its own
// std::mt19937_64 seeded by std::seed_seq{s_lo, s_hi, i_lo, i_hi}, so any
// range of samples can be computed independently of the others.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "polyw/error.hpp"
#include "polyw/words.hpp"

namespace polyw {

inline constexpr const char* rng_algorithm = "mt19937_64/seed_seq(seed,index)";

struct SampleStats {
  int N = 0;
  std::string x;     // the positive word in a, b
  std::string word;  // f(x) in the text grammar
  long long p = 0;
  long long q = 0;
  long long p_prime = 0;
  long long q_prime = 0;
  // Cyclic a-runs of x. For x = a^N or b^N, l = 1/2 by convention: l is 0
  // and degenerate is set.
  long long l = 0;
  bool degenerate = false;
  long long s = 0;  // runs of x read linearly
  bool cond_q = false;  // p p' <= q^2
  bool cond_p = false;  // q q' <= p^2

  bool condition() const { return cond_q && cond_p; }
  double l_value() const { return degenerate ? 0.5 : static_cast<double>(l); }
};

// Statistics of a given positive word x over {a, b}.
inline SampleStats height_one_stats(const std::string& x) {
  const std::size_t n = x.size();
  if (n < 1) throw precondition_error("the word must be nonempty");
  for (char c : x) {
    if (c != 'a' && c != 'b') throw precondition_error("positive words use only 'a' and 'b'");
  }
  SampleStats st;
  st.N = static_cast<int>(n);
  st.x = x;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 'a') ++st.p;
    if (i == 0 || x[i] != x[i - 1]) ++st.s;
  }
  st.q = static_cast<long long>(n) - st.p;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && x[j] == x[i]) ++j;
    if (!st.word.empty()) st.word += ' ';
    st.word += x[i] == 'a' ? "a^" + std::to_string(j - i) : "(a^" + std::to_string(j - i) + ")^b";
    i = j;
  }
  if (st.p == 0 || st.q == 0) {
    st.degenerate = true;
    // (p_1, q_1) = (N, 0) or (0, N).
    st.p_prime = st.p == 1 ? 1 : 0;
    st.q_prime = st.q == 1 ? 1 : 0;
  } else {
    // Rotate so the word starts at the beginning of an a-run.
    std::size_t start = 0;
    while (!(x[start] == 'a' && x[(start + n - 1) % n] == 'b')) ++start;
    for (std::size_t k = 0; k < n;) {
      const char c = x[(start + k) % n];
      std::size_t len = 0;
      while (k < n && x[(start + k) % n] == c) {
        ++len;
        ++k;
      }
      if (c == 'a') {
        ++st.l;
        if (len == 1) ++st.p_prime;
      } else if (len == 1) {
        ++st.q_prime;
      }
    }
  }
  st.cond_q = st.p * st.p_prime <= st.q * st.q;
  st.cond_p = st.q * st.q_prime <= st.p * st.p;
  return st;
}

inline std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

inline std::string random_positive_word(int N, std::mt19937_64& rng) {
  std::string x(static_cast<std::size_t>(N), 'a');
  std::uint64_t bits = 0;
  for (int i = 0; i < N; ++i) {
    if (i % 64 == 0) bits = rng();
    if (bits & 1U) x[static_cast<std::size_t>(i)] = 'b';
    bits >>= 1;
  }
  return x;
}

inline SampleStats sample_height_one(int N, std::mt19937_64& rng) {
  if (N < 2) throw precondition_error("N must be at least 2");
  return height_one_stats(random_positive_word(N, rng));
}

// Sample `index` of the run with the given seed.
inline SampleStats sample_height_one(int N, std::uint64_t seed, std::uint64_t index) {
  std::mt19937_64 rng = sample_engine(seed, index);
  return sample_height_one(N, rng);
}

struct TrialReport {
  int N = 0;
  long long samples = 0;
  std::uint64_t seed = 0;
  std::string rng = rng_algorithm;
  long long count_condition = 0;
  long long count_fail_q = 0;  // q^2 <= p p'
  long long count_fail_p = 0;  // p^2 <= q q'
  long long count_degenerate = 0;
  // Sums over samples of s - 1 and (s - 1)^2, and of p and p^2.
  long long sum_runs = 0;
  long long sum_runs_sq = 0;
  long long sum_p = 0;
  long long sum_p_sq = 0;

  double p_condition() const { return ratio(count_condition); }
  double p_fail_q() const { return ratio(count_fail_q); }
  double p_fail_p() const { return ratio(count_fail_p); }
  // Mean and population variance of s - 1.
  double mean_runs() const { return static_cast<double>(sum_runs) / static_cast<double>(samples); }
  double var_runs() const {
    const double m = mean_runs();
    return static_cast<double>(sum_runs_sq) / static_cast<double>(samples) - m * m;
  }
  double mean_p() const { return static_cast<double>(sum_p) / static_cast<double>(samples); }
  // Standard error of p_condition.
  double se_condition() const {
    const double v = p_condition();
    return std::sqrt(v * (1 - v) / static_cast<double>(samples));
  }

 private:
  double ratio(long long c) const { return static_cast<double>(c) / static_cast<double>(samples); }
};

namespace detail {

inline void accumulate(TrialReport& r, const SampleStats& st) {
  r.count_condition += st.condition() ? 1 : 0;
  r.count_fail_q += st.q * st.q <= st.p * st.p_prime ? 1 : 0;
  r.count_fail_p += st.p * st.p <= st.q * st.q_prime ? 1 : 0;
  r.count_degenerate += st.degenerate ? 1 : 0;
  r.sum_runs += st.s - 1;
  r.sum_runs_sq += (st.s - 1) * (st.s - 1);
  r.sum_p += st.p;
  r.sum_p_sq += st.p * st.p;
}

}  // namespace detail

// Deterministic in (N, samples, seed) for any number of jobs.
inline TrialReport run_trials(int N, long long samples, std::uint64_t seed, int jobs = 1) {
  if (N < 2) throw precondition_error("N must be at least 2");
  if (samples < 1) throw precondition_error("samples must be at least 1");
  if (jobs < 1) throw precondition_error("jobs must be at least 1");
  const int workers = static_cast<int>(std::min<long long>(jobs, samples));
  std::vector<TrialReport> part(static_cast<std::size_t>(workers));
  const auto work = [&](int t) {
    const long long lo = samples * t / workers;
    const long long hi = samples * (t + 1) / workers;
    for (long long i = lo; i < hi; ++i) {
      detail::accumulate(part[static_cast<std::size_t>(t)], sample_height_one(N, seed, static_cast<std::uint64_t>(i)));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  TrialReport r;
  r.N = N;
  r.samples = samples;
  r.seed = seed;
  for (const TrialReport& p : part) {
    r.count_condition += p.count_condition;
    r.count_fail_q += p.count_fail_q;
    r.count_fail_p += p.count_fail_p;
    r.count_degenerate += p.count_degenerate;
    r.sum_runs += p.sum_runs;
    r.sum_runs_sq += p.sum_runs_sq;
    r.sum_p += p.sum_p;
    r.sum_p_sq += p.sum_p_sq;
  }
  return r;
}

inline std::string csv_header() { return "N,samples,seed,p_condition,p_fail_q,p_fail_p,mean_runs,var_runs,rng"; }

inline std::string to_csv(const TrialReport& r) {
  std::ostringstream out;
  out.precision(10);
  out << r.N << ',' << r.samples << ',' << r.seed << ',' << r.p_condition() << ',' << r.p_fail_q() << ','
      << r.p_fail_p() << ',' << r.mean_runs() << ',' << r.var_runs() << ",\"" << r.rng << '"';
  return out.str();
}

}  // namespace polyw
