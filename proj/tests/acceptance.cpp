// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polyw/polyw.hpp"

using namespace polyw;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

// Every certificate produced below; criterion 10 audits them all.
std::vector<PolygonalityCertificate> registry;

void keep(const PolygonalityCertificate& c) {
  if (!c.declarative) registry.push_back(c);
}

std::string pw(const std::string& g, int e) { return g + "^" + std::to_string(e); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Result c1_rho_t3() {
  const CyclicWord w = parse_cyclic("a^6 b^-3 c^5 b^4 c^-7", 3);
  const RhoElement r = rho(w);
  const RhoElement expected = RhoElement::make(3, {{1, -2}, {-2, 3}, {3, 2}, {2, -3}, {-3, 1}});
  if (!(r == expected)) return {false, "rho differs from the five-pair multiset"};
  const auto cert = tn_membership(r);
  if (!cert) return {false, "no T_3 certificate"};
  std::vector<RhoPair> resum;
  for (const TnCycle& cy : cert->cycles) {
    for (std::size_t k = 0; k < cy.vertices.size(); ++k) {
      resum.push_back(RhoPair::make(cy.vertices[k], cy.vertices[(k + 1) % cy.vertices.size()]));
    }
  }
  std::sort(resum.begin(), resum.end());
  if (resum != r.pairs) return {false, "cycle re-summation differs from rho"};
  if (!verify_tn(r, *cert)) return {false, "verify_tn rejects the certificate"};
  return {true, std::to_string(cert->cycles.size()) + " cycles"};
}

Result c2_necessity() {
  const CyclicWord w = parse_cyclic("a^2 b^2 c^3 b^-3", 3);
  const RhoElement r = rho(w);
  if (tn_membership(r)) return {false, "tn_membership claims membership"};
  std::vector<std::pair<int, int>> raw;
  for (const RhoPair& p : r.pairs) raw.emplace_back(p.i, p.j);
  if (oracle::tn_member(raw)) return {false, "partition oracle finds a decomposition"};
  const MinimizationTrace t = minimize(w);
  if (t.final.size() != 1) return {false, "minimize ends at length " + std::to_string(t.final.size())};
  return {true, "not in T_3; minimized to " + t.final.str()};
}

Result c3_q23_census() {
  const CyclicWord w = parse_cyclic("a^2 (a^-1)^b a a^b", 2);
  SearchBounds b;
  b.max_disks = 1;
  b.powers = {2};
  b.max_edges = 2 * static_cast<int>(w.size());
  const Census census = enumerate_all(w, b);
  if (census.status != SearchOutcome::Status::exhausted) return {false, "census did not finish"};
  int hits = 0;
  for (const PolygonalityCertificate& c : census.certificates) {
    keep(c);
    if (c.verdict.chi != -1 || c.verdict.m != 1 || c.verdict.vertices != 7) continue;
    const DoubleSurfaceReport d = double_surface_report(c);
    const oracle::Counts o = oracle::complex_counts(c);
    if (d.degree == 7 && d.chi_S0 == -4 && o.V == 7 && o.chi == -1 && o.polygonal()) ++hits;
  }
  if (hits == 0) return {false, "no chi=-1, V=7 surface with degree 7 and chi(S_0)=-4"};
  return {true, std::to_string(census.certificates.size()) + " classes, " + std::to_string(hits) +
                    " with chi=-1, V=7, degree 7, chi(S_0)=-4"};
}

Result c4_follower() {
  const CyclicWord w = parse_cyclic("a b a b^2 a b^3", 2);
  if (!nonpolygonality_follower_obstruction(w)) return {false, "obstruction does not fire"};
  SearchBounds b;
  b.max_disks = 2;
  b.max_edges = 28;
  b.powers = {1, 2, 3};
  const SearchOutcome o = decide_polygonal(w, b);
  if (o.status != SearchOutcome::Status::exhausted) return {false, std::string("search: ") + to_string(o.status)};
  const std::size_t len = minimize(w).final.size();
  if (len != 5) return {false, "minimized length " + std::to_string(len)};
  if (!equivalent(w, parse_cyclic("a (a^2)^b", 2))) return {false, "not equivalent to a(a^2)^b"};
  return {true, "exhausted after " + std::to_string(o.progress.nodes) + " nodes"};
}

Result c5_f2() {
  int total = 0, ok = 0, powers = 0;
  std::vector<int> values{-3, -2, 2, 3};
  for (int l = 1; l <= 3; ++l) {
    const int count = 1 << (4 * l);
    for (int code = 0; code < count; ++code) {
      std::string text;
      for (int i = 0; i < 2 * l; ++i) {
        const int e = values[static_cast<std::size_t>((code >> (2 * i)) & 3)];
        text += pw(i % 2 == 0 ? "a" : "b", e) + " ";
      }
      const CyclicWord w = parse_cyclic(text, 2);
      ++total;
      if (is_proper_power(w)) {
        // The root lies in the family with smaller l; its surface serves w.
        const Construction c = construct_f2_no_isolated(primitive_root(w).root);
        keep(c.certificate);
        ok += c.certificate.verdict.polygonal && recheck(c.certificate);
        ++powers;
        continue;
      }
      const Construction c = construct_f2_no_isolated(w);
      keep(c.certificate);
      ok += c.certificate.verdict.polygonal && recheck(c.certificate);
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " certified (" + std::to_string(powers) +
                           " proper powers via their root)"};
}

Result c6_sourcesink() {
  long long total = 0, ok = 0;
  for (int m = 1; m <= 5; ++m) {
    const int len = 2 * m;
    for (int mask = 0; mask < (1 << len); ++mask) {
      std::vector<int> h;
      for (int i = 0; i < len; ++i) h.push_back((mask >> i) & 1 ? 1 : -1);
      const SourceSinkCounts c = sourcesink_classify(h);
      ++total;
      ok += c.sources == c.sinks && c.filters == c.pollutants;
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " orientation assignments"};
}

Result c7_isolated_b() {
  int total = 0, ok = 0;
  std::vector<int> values{-3, -2, 2, 3};
  for (int l = 1; l <= 2; ++l) {
    const int count = 1 << (4 * l);
    for (int code = 0; code < count; ++code) {
      std::string text;
      for (int i = 0; i < l; ++i) {
        const int p1 = values[static_cast<std::size_t>((code >> (4 * i)) & 3)];
        const int p2 = values[static_cast<std::size_t>((code >> (4 * i + 2)) & 3)];
        text += pw("a", p1) + " (" + pw("a", p2) + ")^b ";
      }
      const CyclicWord w = parse_cyclic(text, 2);
      ++total;
      const CyclicWord target = is_proper_power(w) ? primitive_root(w).root : w;
      const Construction c = construct_isolated_b(target);
      keep(c.certificate);
      ok += c.certificate.verdict.polygonal && recheck(c.certificate);
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " certified"};
}

Result c8_lambda() {
  const CyclicWord w = parse_cyclic("a (a^2)^b", 2);
  // One disk reading w^2; pair each b-edge of one type with the b-edge of
  // the other type that is not its rotation image.
  std::vector<int> pos, neg;
  for (int j = 0; j < 2 * static_cast<int>(w.size()); ++j) {
    const Letter x = slot_letter(w, 2, j);
    if (x.generator() == 2) (x.sign() > 0 ? pos : neg).push_back(j);
  }
  bool found = false;
  LambdaMultiset ex52;
  const LambdaMultiset want52 =
      make_lambda({LambdaTerm::make(1, {2}), LambdaTerm::make(1, {2}), LambdaTerm::make(-1, {1, 1})});
  for (int flip = 0; flip < 2 && !found; ++flip) {
    const SurfaceComplex s = build_complex(w, {{2}}, {{{0, pos[0]}, {0, neg[static_cast<std::size_t>(flip)]}},
                                                      {{0, pos[1]}, {0, neg[static_cast<std::size_t>(1 - flip)]}}});
    ex52 = boundary_lambda(s);
    found = ex52 == want52 && s.euler_characteristic() == -1;
  }
  if (!found) return {false, "no consistent pairing on w^2 gives 2 l+(2) + l-(1,1) on a pair of pants"};
  if (!u_membership(ex52 + ex52)) return {false, "2 lambda(S) of the three-punctured sphere not in U"};

  const HeightOneLayout lay = height_one_layout(w);
  const LambdaTerm m1 = LambdaTerm::make(-1, {1}), p22 = LambdaTerm::make(1, {2, 2}),
                   m1111 = LambdaTerm::make(-1, {1, 1, 1, 1}), p2 = LambdaTerm::make(1, {2}),
                   m11 = LambdaTerm::make(-1, {1, 1});
  const LambdaMultiset wantP = make_lambda({m1, m1, p22});
  const LambdaMultiset wantQ = repeat(p2, 4) + LambdaMultiset{m1111};
  const LambdaMultiset wantPP = repeat(m11, 2) + repeat(p22, 2);
  const LambdaMultiset want2S = repeat(m11, 4) + repeat(p22, 4) + repeat(m1111, 4) + repeat(p2, 16);
  for (int d : lay.p_disks) {
    if (boundary_lambda(restrict_to_disks(w, lay.disks, lay.sim, {d})) != wantP) return {false, "lambda(P_i/~)"};
  }
  for (int d : lay.q_disks) {
    if (boundary_lambda(restrict_to_disks(w, lay.disks, lay.sim, {d})) != wantQ) return {false, "lambda(Q_i/~)"};
  }
  if (boundary_lambda(restrict_to_disks(w, lay.disks, lay.sim_prime, lay.p_disks)) != wantPP) {
    return {false, "lambda(P_1 + P_2 / ~')"};
  }
  std::vector<int> all(lay.disks.size());
  std::iota(all.begin(), all.end(), 0);
  const LambdaMultiset s = boundary_lambda(restrict_to_disks(w, lay.disks, lay.sim_prime, all));
  if (s + s != want2S) return {false, "2 lambda(S')"};
  const auto u = u_membership(want2S);
  if (!u || !verify_u(want2S, *u)) return {false, "u_membership rejects 2 lambda(S')"};
  return {true, "example three-punctured sphere and all four identities exact; U certificate with " +
                    std::to_string(u->pairs.size()) + " pairs"};
}

Result c9_bs() {
  int total = 0, ok = 0;
  for (int p : {-3, -2, -1, 1, 2, 3}) {
    for (int q : {-3, -2, -1, 1, 2, 3}) {
      const CyclicWord w = parse_cyclic(pw("a", p) + " (" + pw("a", q) + ")^b", 2);
      ++total;
      const Construction c = construct_height_one(w);
      keep(c.certificate);
      ok += c.certificate.verdict.polygonal && recheck(c.certificate);
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " relators certified"};
}

Result c10_remark() {
  int ok = 0;
  for (const PolygonalityCertificate& c : registry) {
    const oracle::Counts o = oracle::complex_counts(c);
    const DoubleSurfaceReport d = double_surface_report(c);
    const CoverGraph cover = stallings_complete(skeleton(SurfaceComplex(c.word, c.disks, c.pairing)));
    ok += d.chi_S0 == 2 * (o.chi - o.m) && d.degree == o.V && cover.degree() == o.V;
  }
  const int total = static_cast<int>(registry.size());
  return {ok == total && total > 0, std::to_string(ok) + "/" + std::to_string(total) + " certificates"};
}

Result c11_invariance() {
  long long total = 0, ok = 0;
  const std::vector<Relabeling> moves{Relabeling::permute({2, 1}), Relabeling::invert({1}), Relabeling::invert({2}),
                                      Relabeling::invert({1, 2}),  Relabeling::inverse_word(), Relabeling::rotate(1),
                                      Relabeling::rotate(3),       Relabeling::rotate(-2)};
  for (std::size_t i = 0; i < registry.size(); ++i) {
    const PolygonalityCertificate& c = registry[i];
    if (c.word.rank() != 2) continue;
    for (const Relabeling& t : moves) {
      const PolygonalityCertificate img = transform_certificate(c, t);
      const PolygonalityCertificate again = certify(img.word, img.disks, img.pairing);
      ++total;
      ok += img.word == transform(c.word, t) && again.verdict.polygonal == c.verdict.polygonal &&
            again.verdict.chi == c.verdict.chi && again.verdict.vertices == c.verdict.vertices &&
            again.verdict.m == c.verdict.m;
    }
  }
  return {ok == total && total > 0, std::to_string(ok) + "/" + std::to_string(total) + " transformed certificates"};
}

Result c12_stats() {
  const std::uint64_t seed = 20240611;
  const TrialReport r200 = run_trials(200, 2000, seed);
  const double sigma = std::sqrt(199.0 / 4.0);
  const double dev = std::abs(r200.mean_runs() - 199.0 / 2.0);
  const double tol = 3 * sigma / std::sqrt(2000.0);
  const TrialReport r100 = run_trials(100, 2000, seed);
  const TrialReport r400 = run_trials(400, 2000, seed);
  char buf[256];
  std::snprintf(buf, sizeof buf, "P200=%.4f mean(s-1)=%.3f (|dev| %.3f <= %.3f) P100=%.4f P400=%.4f",
                r200.p_condition(), r200.mean_runs(), dev, tol, r100.p_condition(), r400.p_condition());
  const bool pass = r200.p_condition() >= 0.9 && dev <= tol &&
                    r400.p_condition() >= r100.p_condition() - r100.se_condition();
  return {pass, buf};
}

Result c13_oracles() {
  // T_3: all multisets of at most 6 of the 12 rho pairs.
  std::vector<std::pair<int, int>> universe;
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      if (i == 0 || j == 0 || std::abs(i) == std::abs(j)) continue;
      const RhoPair p = RhoPair::make(i, j);
      if (p.i == i && p.j == j) universe.emplace_back(i, j);
    }
  }
  long long tn_total = 0, tn_ok = 0, tn_members = 0;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> tn_rec = [&](std::size_t from) {
    std::vector<std::pair<int, int>> raw;
    for (std::size_t k : pick) raw.push_back(universe[k]);
    const bool lib = tn_membership(RhoElement::make(3, raw)).has_value();
    const bool ref = oracle::tn_member(raw);
    ++tn_total;
    tn_ok += lib == ref;
    tn_members += ref;
    if (pick.size() == 6) return;
    for (std::size_t k = from; k < universe.size(); ++k) {
      pick.push_back(k);
      tn_rec(k);
      pick.pop_back();
    }
  };
  tn_rec(0);

  // U: all multisets of at most 6 signed necklaces with sum <= 4.
  std::vector<LambdaTerm> terms;
  std::function<void(std::vector<int>&, int)> comps = [&](std::vector<int>& c, int left) {
    if (!c.empty()) {
      for (int s : {1, -1}) {
        const LambdaTerm t = LambdaTerm::make(s, c);
        if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
      }
    }
    for (int x = 1; x <= left; ++x) {
      c.push_back(x);
      comps(c, left - x);
      c.pop_back();
    }
  };
  std::vector<int> scratch;
  comps(scratch, 4);
  std::sort(terms.begin(), terms.end());
  long long u_total = 0, u_ok = 0, u_members = 0;
  std::function<void(std::size_t)> u_rec = [&](std::size_t from) {
    LambdaMultiset lam;
    std::vector<oracle::Term> ref_terms;
    for (std::size_t k : pick) {
      lam.push_back(terms[k]);
      ref_terms.push_back({terms[k].sign, terms[k].composition});
    }
    lam = make_lambda(lam);
    const auto cert = u_membership(lam);
    const bool lib = cert.has_value() && verify_u(lam, *cert);
    const bool ref = oracle::u_member(ref_terms);
    ++u_total;
    u_ok += lib == ref;
    u_members += ref;
    if (pick.size() == 6) return;
    for (std::size_t k = from; k < terms.size(); ++k) {
      pick.push_back(k);
      u_rec(k);
      pick.pop_back();
    }
  };
  u_rec(0);
  const bool pass = tn_ok == tn_total && u_ok == u_total;
  return {pass, "T_3 " + std::to_string(tn_ok) + "/" + std::to_string(tn_total) + " (" + std::to_string(tn_members) +
                    " members), U " + std::to_string(u_ok) + "/" + std::to_string(u_total) + " (" +
                    std::to_string(u_members) + " members)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no limit
    std::function<Result()> run;
  };
  // Criterion 10 and 11 audit certificates produced by the others, so they
  // run last; output stays in numeric order.
  const std::vector<Criterion> criteria{
      {1, "rho/T_3 example", 1, c1_rho_t3},
      {2, "T_n necessity example and minimization", 10, c2_necessity},
      {3, "one-disk census of the q23 word", 300, c3_q23_census},
      {4, "follower obstruction and bounded search", 600, c4_follower},
      {5, "rank-2 words without isolated generators", 0, c5_f2},
      {6, "source/sink and filter/pollutant balance", 1, c6_sourcesink},
      {7, "isolated-b family", 0, c7_isolated_b},
      {8, "lambda golden values and U membership", 0, c8_lambda},
      {9, "Baumslag-Solitar relators", 60, c9_bs},
      {12, "height-one statistics", 60, c12_stats},
      {13, "T_n and U oracle equivalence", 0, c13_oracles},
      {10, "double surface degree and chi(S_0)", 0, c10_remark},
      {11, "invariance under relabeling", 0, c11_invariance},
  };
  std::map<int, std::string> lines;
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (c.limit_s > 0 && secs > c.limit_s) {
      r.pass = false;
      r.detail += " (over the time limit)";
    }
    char head[160];
    std::snprintf(head, sizeof head, "%s criterion %2d: %s [%.2fs] ", r.pass ? "PASS" : "FAIL", c.id, c.name, secs);
    lines[c.id] = head + r.detail;
    all = all && r.pass;
  }
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  return all ? 0 : 1;
}
