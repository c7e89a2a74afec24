#pragma once

// Explicit polygonal surfaces for the word families with a constructive
// argument, and a follower-set obstruction for positive rank-2 words.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polyw/complex.hpp"
#include "polyw/error.hpp"
#include "polyw/invariants.hpp"
#include "polyw/words.hpp"

namespace polyw {

struct ConstructionPlan {
  std::string strategy;       // two-disk-rotation | tn-cycles | f2-no-isolated | isolated-b | height-one
  nlohmann::json parameters = nlohmann::json::object();  // strategy-specific choices
};

struct Construction {
  PolygonalityCertificate certificate;
  ConstructionPlan plan;
  std::optional<TnCertificate> tn;
  std::optional<UCertificate> u;
  LambdaMultiset lambda;  // the multiset matched by u (height-one only)
};

// ---------------------------------------------------------------------------
// Relabeling a certificate along with its word

namespace detail {

// Shift r with canonical[i] == image[(i + r) mod n].
inline std::size_t rotation_shift(std::span<const Letter> image, const CyclicWord& canonical) {
  const std::size_t n = image.size();
  for (std::size_t r = 0; r < n; ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = canonical.letters()[i] == image[(i + r) % n];
    if (ok) return r;
  }
  throw precondition_error("image is not a rotation of the canonical word");
}

inline int shift_pos(int pos, long long by, std::size_t len) {
  const long long L = static_cast<long long>(len);
  return static_cast<int>((((pos + by) % L) + L) % L);
}

}  // namespace detail

// Image of a certificate under a relabeling: the word is transformed, and each
// disk and slot is carried to the disk reading the corresponding power of the
// transformed word. Rotation shifts every disk base point by shift * |w|.
inline PolygonalityCertificate transform_certificate(const PolygonalityCertificate& cert, const Relabeling& t) {
  const CyclicWord& w = cert.word;
  const std::size_t n = w.size();
  if (cert.declarative) return declarative_certificate(transform(w, t));
  std::vector<DiskSpec> disks = cert.disks;
  std::vector<long long> shift(disks.size(), 0);
  CyclicWord image = w;
  if (t.kind == Relabeling::Kind::rotate) {
    for (std::size_t d = 0; d < disks.size(); ++d) shift[d] = t.shift * static_cast<long long>(n);
  } else if (t.kind == Relabeling::Kind::reverse) {
    const std::vector<Letter> v = inverse_letters(w.letters());
    image = CyclicWord::from_letters(w.rank(), v);
    const long long r = static_cast<long long>(detail::rotation_shift(v, image));
    for (std::size_t d = 0; d < disks.size(); ++d) {
      shift[d] = disks[d].power > 0 ? r : -r;
      disks[d].power = -disks[d].power;
    }
  } else {
    const std::vector<Letter> u = apply_raw(w.letters(), t);
    image = transform(w, t);
    const long long r = static_cast<long long>(detail::rotation_shift(u, image));
    for (std::size_t d = 0; d < disks.size(); ++d) shift[d] = disks[d].power > 0 ? -r : r;
  }
  std::vector<SlotPair> pairs;
  for (const auto& [a, b] : cert.pairing) {
    const auto move = [&](Slot s) {
      const std::size_t len = disk_length(w, cert.disks[static_cast<std::size_t>(s.disk)]);
      return Slot{s.disk, detail::shift_pos(s.pos, shift[static_cast<std::size_t>(s.disk)], len)};
    };
    pairs.emplace_back(move(a), move(b));
  }
  return certify(image, disks, pairs);
}

// ---------------------------------------------------------------------------
// Two rotated disks

inline void require_two_syllables(const CyclicWord& w) {
  if (syllable_decomposition(w).size() < 2) throw precondition_error("word needs at least two syllables");
}

// Pairs of P = disk 0 and P' = disk 1 gluing slot j of P to slot j+1 of P'
// whenever the two letters agree.
inline std::vector<SlotPair> two_disk_rotation_pairs(const CyclicWord& w) {
  require_two_syllables(w);
  const int n = static_cast<int>(w.size());
  std::vector<SlotPair> pairs;
  for (int j = 0; j < n; ++j) {
    if (w[j] == w[j + 1]) pairs.push_back({{0, j}, {1, (j + 1) % n}});
  }
  return pairs;
}

inline SurfaceComplex two_disk_rotation(const CyclicWord& w) {
  return SurfaceComplex(w, {{1}, {1}}, two_disk_rotation_pairs(w));
}

// Boundary slots of junction t (between syllables t and t+1): the last
// letter of syllable t on P and the first letter of syllable t+1 on P'.
inline std::pair<Slot, Slot> junction_slots(const CyclicWord& w, const Syllables& s, std::size_t t) {
  const int n = static_cast<int>(w.size());
  long long pos = static_cast<long long>(s.offset);
  for (std::size_t i = 0; i <= t; ++i) pos += std::abs(s[i].exponent);
  const int first_next = static_cast<int>(pos % n);
  return {{0, (first_next + n - 1) % n}, {1, first_next}};
}

// Junction index for each position of the sorted rho multiset.
inline std::vector<std::size_t> rho_element_junctions(const CyclicWord& w) {
  const std::vector<RhoPair> junctions = rho_junctions(w);
  const RhoElement r = rho(w);
  std::vector<std::size_t> out(r.size());
  std::vector<bool> taken(junctions.size(), false);
  for (std::size_t k = 0; k < r.size(); ++k) {
    for (std::size_t t = 0; t < junctions.size(); ++t) {
      if (!taken[t] && junctions[t] == r.pairs[k]) {
        out[k] = t;
        taken[t] = true;
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cycles of T_n

inline Construction construct_from_tn(const CyclicWord& w, const TnCertificate& cert) {
  if (is_proper_power(w)) throw not_applicable("proper powers are handled declaratively");
  if (!has_no_isolated_generators(w)) throw not_applicable("word has isolated generators");
  require_two_syllables(w);
  const RhoElement r = rho(w);
  if (!verify_tn(r, cert)) throw precondition_error("T_n certificate does not match rho(w)");
  const Syllables syl = syllable_decomposition(w);
  const std::vector<std::size_t> junction = rho_element_junctions(w);
  std::vector<SlotPair> pairs = two_disk_rotation_pairs(w);
  const auto slot_with_label = [&](std::size_t t, int gen) {
    const auto [x, y] = junction_slots(w, syl, t);
    return slot_letter(w, 1, x.pos).generator() == gen ? x : y;
  };
  for (const TnCycle& cy : cert.cycles) {
    const std::size_t r_len = cy.vertices.size();
    for (std::size_t k = 0; k < r_len; ++k) {
      const int gen = std::abs(cy.vertices[k]);
      const std::size_t prev = junction[cy.elements[(k + r_len - 1) % r_len]];
      const std::size_t cur = junction[cy.elements[k]];
      pairs.emplace_back(slot_with_label(prev, gen), slot_with_label(cur, gen));
    }
  }
  Construction c;
  c.certificate = certify(w, {{1}, {1}}, pairs);
  c.plan.strategy = "tn-cycles";
  c.plan.parameters = {{"cycles", static_cast<int>(cert.cycles.size())}};
  c.tn = cert;
  return c;
}

// ---------------------------------------------------------------------------
// Rank 2, no isolated generators

struct SourceSinkCounts {
  int sources = 0;
  int sinks = 0;
  int filters = 0;
  int pollutants = 0;
  // Per vertex v_1..v_2m: 0 source, 1 sink, 2 filter, 3 pollutant.
  std::vector<int> kinds;
};

// h[i-1] = +1 when edge (v_i, v_{i+1}) follows the polygon orientation.
// Odd edges (v_1 v_2, v_3 v_4, ...) are clean.
inline SourceSinkCounts sourcesink_classify(const std::vector<int>& h) {
  if (h.size() < 2 || h.size() % 2 != 0) throw precondition_error("orientation sequence must have even length >= 2");
  const std::size_t len = h.size();
  const auto tau = [](std::size_t i) { return i % 2 == 1 ? std::pair{1, 0} : std::pair{0, 1}; };
  SourceSinkCounts out;
  for (std::size_t i = 1; i <= len; ++i) {
    const std::size_t prev = i == 1 ? len : i - 1;
    const int hi = h[i - 1], hp = h[prev - 1];
    const auto [t1, t2] = tau(i);
    const auto [u1, u2] = tau(prev);
    const std::pair<int, int> sigma{hi * t1 - hp * u1, hi * t2 - hp * u2};
    int kind = 0;
    if (sigma == std::pair{1, 1}) {
      kind = 0;
      ++out.sources;
    } else if (sigma == std::pair{-1, -1}) {
      kind = 1;
      ++out.sinks;
    } else if (sigma == std::pair{1, -1}) {
      kind = 2;
      ++out.filters;
    } else {
      kind = 3;
      ++out.pollutants;
    }
    out.kinds.push_back(kind);
  }
  return out;
}

inline Construction construct_f2_no_isolated(const CyclicWord& w) {
  if (w.rank() != 2 || w.generator_count() != 2) throw not_applicable("needs a rank-2 word using both generators");
  if (!has_no_isolated_generators(w)) throw not_applicable("word has isolated generators");
  if (is_proper_power(w)) throw not_applicable("proper powers are handled declaratively");
  const auto form = alternating_form(w);
  const std::size_t L = 2 * form->p.size();
  std::vector<int> h;
  for (std::size_t i = 0; i < form->p.size(); ++i) {
    h.push_back(sgn(form->p[i]));
    h.push_back(sgn(form->q[i]));
  }
  const SourceSinkCounts kinds = sourcesink_classify(h);
  // Vertex v_i sits at junction (first_syllable + i - 2) mod L.
  const std::vector<std::size_t> junction = rho_element_junctions(w);
  std::vector<std::size_t> element_of(L);
  for (std::size_t k = 0; k < junction.size(); ++k) element_of[junction[k]] = k;
  std::vector<std::vector<std::size_t>> by_kind(4);
  for (std::size_t i = 1; i <= L; ++i) {
    const std::size_t t = (form->first_syllable + i + L - 2) % L;
    by_kind[static_cast<std::size_t>(kinds.kinds[i - 1])].push_back(element_of[t]);
  }
  const RhoElement r = rho(w);
  TnCertificate cert;
  const auto add_cycle = [&](std::size_t e1, std::size_t e2) {
    TnCycle cy;
    const RhoPair first = r.pairs[e1];
    cy.vertices = {first.i, first.j};
    cy.elements = {e1, e2};
    cy.flipped = {false, !(r.pairs[e2] == RhoPair{first.j, first.i})};
    cert.cycles.push_back(cy);
  };
  for (std::size_t k = 0; k < by_kind[0].size() && k < by_kind[1].size(); ++k) add_cycle(by_kind[0][k], by_kind[1][k]);
  for (std::size_t k = 0; k < by_kind[2].size() && k < by_kind[3].size(); ++k) add_cycle(by_kind[2][k], by_kind[3][k]);
  if (!verify_tn(r, cert)) throw error("source/sink decomposition does not sum to rho(w)");
  Construction c = construct_from_tn(w, cert);
  c.plan.strategy = "f2-no-isolated";
  c.plan.parameters = {{"sources", kinds.sources}, {"filters", kinds.filters}};
  return c;
}

// ---------------------------------------------------------------------------
// Rank 2, isolated b

namespace detail {

inline bool paired_immersion_ok(const CyclicWord& w, const std::vector<DiskSpec>& disks,
                                const std::vector<SlotPair>& pairs) {
  const SurfaceComplex s(w, disks, pairs);
  std::map<std::tuple<int, int, bool>, int> count;
  for (const Edge& e : s.edges()) {
    if (e.slots.size() < 2) continue;
    if (++count[{e.tail, e.generator, true}] > 1) return false;
    if (++count[{e.head, e.generator, false}] > 1) return false;
  }
  return true;
}

inline bool glue_components(const CyclicWord& w, const std::vector<DiskSpec>& disks,
                            const std::vector<std::pair<std::vector<Slot>, std::vector<Slot>>>& work, std::size_t k,
                            std::vector<SlotPair>& pairs) {
  if (k == work.size()) return certify(w, disks, pairs).verdict.polygonal;
  const auto& [left, right] = work[k];
  std::vector<Slot> perm = right;
  std::sort(perm.begin(), perm.end());
  do {
    bool labels = true;
    for (std::size_t i = 0; i < left.size() && labels; ++i) {
      labels = slot_letter(w, 1, left[i].pos).generator() == slot_letter(w, 1, perm[i].pos).generator();
    }
    if (!labels) continue;
    for (std::size_t i = 0; i < left.size(); ++i) pairs.emplace_back(left[i], perm[i]);
    if (paired_immersion_ok(w, disks, pairs) && glue_components(w, disks, work, k + 1, pairs)) return true;
    pairs.resize(pairs.size() - left.size());
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace detail

inline Construction construct_isolated_b(const CyclicWord& w) {
  const auto cond = isolated_b_condition(w);
  if (!cond) throw not_applicable("needs w = prod a^{p_i} b^{q_i} with l > 1, |p_i| > 1, |q_i| = 1");
  if (!*cond) throw not_applicable("sign sum is " + std::to_string(isolated_b_sign_sum(w)) + ", not 0");
  if (is_proper_power(w)) throw not_applicable("proper powers are handled declaratively");
  const auto form = alternating_form(w);
  const std::size_t l = form->p.size();
  const SurfaceComplex base = two_disk_rotation(w);
  // Kind of the component around b^{q_i}: 0 source, 1 sink, 2 filter, 3 pollutant.
  std::vector<std::vector<std::vector<Slot>>> by_kind(4);
  const Syllables syl = syllable_decomposition(w);
  for (std::size_t i = 0; i < l; ++i) {
    const std::size_t t = (form->first_syllable + 2 * i + 1) % syl.size();  // b-syllable
    const Slot b_slot = junction_slots(w, syl, t).first;                    // its only letter, on P
    const int sp = sgn(form->p[i]), sq = sgn(form->q[i]), sn = sgn(form->p[(i + 1) % l]);
    int kind = 0;
    if (sp < 0 && sn > 0) {
      kind = 0;
    } else if (sp > 0 && sn < 0) {
      kind = 1;
    } else if (sp == sq && sq == sn) {
      kind = 2;
    } else {
      kind = 3;
    }
    for (const BoundaryComponent& comp : base.boundary()) {
      if (std::any_of(comp.begin(), comp.end(), [&](const BoundaryStep& st) { return st.slot == b_slot; })) {
        std::vector<Slot> slots;
        for (const BoundaryStep& st : comp) slots.push_back(st.slot);
        by_kind[static_cast<std::size_t>(kind)].push_back(slots);
      }
    }
  }
  if (by_kind[0].size() != by_kind[1].size() || by_kind[2].size() != by_kind[3].size()) {
    throw error("source/sink or filter/pollutant counts differ");
  }
  std::vector<std::pair<std::vector<Slot>, std::vector<Slot>>> work;
  for (std::size_t k = 0; k < by_kind[0].size(); ++k) work.emplace_back(by_kind[0][k], by_kind[1][k]);
  for (std::size_t k = 0; k < by_kind[2].size(); ++k) work.emplace_back(by_kind[2][k], by_kind[3][k]);
  const std::vector<DiskSpec> disks{{1}, {1}};
  std::vector<SlotPair> pairs = base.pairing();
  if (!detail::glue_components(w, disks, work, 0, pairs)) throw error("no admissible gluing of the boundary components");
  Construction c;
  c.certificate = certify(w, disks, pairs);
  c.plan.strategy = "isolated-b";
  c.plan.parameters = {{"sources", by_kind[0].size()}, {"filters", by_kind[2].size()}};
  return c;
}

// ---------------------------------------------------------------------------
// Simple height-one words

struct HeightOneOptions {
  // Multiplies d = order of the period permutation.
  int d_multiplier = 1;
  // Use c! for d instead of the permutation order.
  bool factorial_d = false;
  std::size_t max_slots = 4'000'000;
};

struct HeightOneLayout {
  CyclicWord word;
  HeightOne params;
  std::vector<int> A;      // block indices (1-based, <= p*l) with |p_j| = 1
  std::vector<int> x;      // x_1..x_l
  std::vector<int> sigma;  // sigma(A[k]), 1-based block index in 1..l
  int c = 1;
  int d = 1;
  std::vector<DiskSpec> disks;  // P_1..P_c, then Q_1..Q_c
  std::vector<int> p_disks;
  std::vector<int> q_disks;
  std::vector<SlotPair> sim;        // the consistent b-side-pairing ~
  std::vector<SlotPair> sim_prime;  // the modified pairing ~'
};

namespace detail {

inline long long factorial_capped(int c, long long cap) {
  long long f = 1;
  for (int i = 2; i <= c; ++i) {
    f *= i;
    if (f > cap) throw resource_error("c! exceeds the disk size cap");
  }
  return f;
}

// Slot positions of alpha_j (b^-1) and beta_j (b) for j = 1..K*l on a disk of power K.
struct BlockSlots {
  std::vector<int> alpha;
  std::vector<int> beta;
};

inline BlockSlots block_slots(const CyclicWord& w, const HeightOne& h, int K) {
  const Syllables syl = syllable_decomposition(w);
  std::size_t off = syl.offset;
  for (std::size_t t = 0; t < h.first_syllable; ++t) off += static_cast<std::size_t>(std::abs(syl[t].exponent));
  const long long n = static_cast<long long>(w.size());
  const long long len = n * K;
  BlockSlots out;
  long long raw = 0;
  for (int copy = 0; copy < K; ++copy) {
    for (int i = 0; i < h.l; ++i) {
      raw += std::abs(h.ps[static_cast<std::size_t>(i)]);
      out.alpha.push_back(static_cast<int>((raw + static_cast<long long>(off)) % len));
      raw += 1 + std::abs(h.qs[static_cast<std::size_t>(i)]);
      out.beta.push_back(static_cast<int>((raw + static_cast<long long>(off)) % len));
      raw += 1;
    }
  }
  return out;
}

inline int perm_order(const std::vector<int>& g) {
  int order = 1;
  std::vector<bool> seen(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(g[j])) {
      seen[j] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

}  // namespace detail

// Disks and the two consistent b-side-pairings of the height-one argument.
// Requires pp' >= qq'.
inline HeightOneLayout height_one_layout(const CyclicWord& w, const HeightOneOptions& opt = {}) {
  const auto hp = is_simple_height_one(w);
  if (!hp) throw not_applicable("not a simple height-one word");
  const HeightOne& h = *hp;
  const long long pp = static_cast<long long>(h.p) * h.p_prime;
  const long long qq = static_cast<long long>(h.q) * h.q_prime;
  if (pp < qq) throw precondition_error("layout needs pp' >= qq'");
  HeightOneLayout lay{w, h, {}, {}, {}, 1, 1, {}, {}, {}, {}, {}};
  const int r = static_cast<int>(pp - qq);
  const int pl = h.p * h.l;
  for (int j = 1; j <= pl && static_cast<int>(lay.A.size()) < r; ++j) {
    if (std::abs(h.ps[static_cast<std::size_t>((j - 1) % h.l)]) == 1) lay.A.push_back(j);
  }
  // x_j: fill the largest q*|q_j| first.
  lay.x.assign(static_cast<std::size_t>(h.l), 0);
  std::vector<int> order(static_cast<std::size_t>(h.l));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(h.qs[static_cast<std::size_t>(a)]) > std::abs(h.qs[static_cast<std::size_t>(b)]);
  });
  int left = r;
  for (int j : order) {
    const int qj = std::abs(h.qs[static_cast<std::size_t>(j)]);
    if (qj == 1 || left == 0) continue;
    const int take = std::min(left, h.q * qj);
    lay.x[static_cast<std::size_t>(j)] = take;
    left -= take;
  }
  if (left != 0) throw not_applicable("no admissible x_j (the inequalities fail)");
  for (int j = 0; j < h.l; ++j) {
    for (int k = 0; k < lay.x[static_cast<std::size_t>(j)]; ++k) lay.sigma.push_back(j + 1);
  }
  for (int target : lay.sigma) lay.c = std::lcm(lay.c, std::abs(h.qs[static_cast<std::size_t>(target - 1)]));
  // g_k on 0-based 0..c-1: i+1 unless i+1 is a multiple of q, then i+1-q.
  const int c = lay.c;
  std::vector<std::vector<int>> g;
  for (int target : lay.sigma) {
    const int q = std::abs(h.qs[static_cast<std::size_t>(target - 1)]);
    std::vector<int> gk(static_cast<std::size_t>(c));
    for (int i = 1; i <= c; ++i) gk[static_cast<std::size_t>(i - 1)] = (i % q != 0 ? i + 1 : i + 1 - q) - 1;
    g.push_back(gk);
  }
  std::vector<int> period(static_cast<std::size_t>(c));
  std::iota(period.begin(), period.end(), 0);
  for (const auto& gk : g) {
    for (int& v : period) v = gk[static_cast<std::size_t>(v)];
  }
  long long d = opt.factorial_d ? detail::factorial_capped(c, static_cast<long long>(opt.max_slots))
                                : detail::perm_order(period);
  d *= opt.d_multiplier;
  lay.d = static_cast<int>(d);
  const long long n = static_cast<long long>(w.size());
  const long long total = 2LL * c * d * (h.p + h.q) * n;
  if (total > static_cast<long long>(opt.max_slots)) throw resource_error("height-one disks exceed the slot cap");
  const int KP = lay.d * h.p, KQ = lay.d * h.q;
  for (int i = 0; i < c; ++i) {
    lay.p_disks.push_back(static_cast<int>(lay.disks.size()));
    lay.disks.push_back({KP});
  }
  for (int i = 0; i < c; ++i) {
    lay.q_disks.push_back(static_cast<int>(lay.disks.size()));
    lay.disks.push_back({KQ});
  }
  const detail::BlockSlots ps = detail::block_slots(w, h, KP);
  const detail::BlockSlots qs = detail::block_slots(w, h, KQ);
  const int blocksP = KP * h.l, blocksQ = KQ * h.l;
  std::map<int, std::size_t> a_index;
  for (std::size_t k = 0; k < lay.A.size(); ++k) a_index[lay.A[k]] = k;
  for (int i = 0; i < c; ++i) {
    const int P = lay.p_disks[static_cast<std::size_t>(i)];
    for (int j = 1; j <= blocksP; ++j) {
      const int beta_prev = ps.beta[static_cast<std::size_t>((j - 2 + blocksP) % blocksP)];
      const int alpha = ps.alpha[static_cast<std::size_t>(j - 1)];
      lay.sim.push_back({{P, beta_prev}, {P, alpha}});
      int target = i;
      const auto it = a_index.find((j - 1) % pl + 1);
      if (it != a_index.end()) target = g[it->second][static_cast<std::size_t>(i)];
      lay.sim_prime.push_back({{P, beta_prev}, {lay.p_disks[static_cast<std::size_t>(target)], alpha}});
    }
    const int Q = lay.q_disks[static_cast<std::size_t>(i)];
    for (int j = 1; j <= blocksQ; ++j) {
      const SlotPair pr{{Q, qs.alpha[static_cast<std::size_t>(j - 1)]}, {Q, qs.beta[static_cast<std::size_t>(j - 1)]}};
      lay.sim.push_back(pr);
      lay.sim_prime.push_back(pr);
    }
  }
  return lay;
}

// The complex on a subset of disks with the pairs internal to it, disks
// renumbered in the given order.
inline SurfaceComplex restrict_to_disks(const CyclicWord& w, const std::vector<DiskSpec>& disks,
                                        const std::vector<SlotPair>& pairs, const std::vector<int>& subset) {
  std::map<int, int> renum;
  std::vector<DiskSpec> sub;
  for (int d : subset) {
    renum[d] = static_cast<int>(sub.size());
    sub.push_back(disks[static_cast<std::size_t>(d)]);
  }
  std::vector<SlotPair> inner;
  for (const auto& [a, b] : pairs) {
    if (renum.count(a.disk) && renum.count(b.disk)) {
      inner.push_back({{renum[a.disk], a.pos}, {renum[b.disk], b.pos}});
    }
  }
  return SurfaceComplex(w, std::move(sub), std::move(inner));
}

namespace detail {

// a-slots of a boundary component in a-orientation order, and which tail
// vertices meet a b-edge.
struct OrientedBoundary {
  std::vector<Slot> edges;
  std::vector<bool> b_at_tail;
};

inline OrientedBoundary orient_boundary(const SurfaceComplex& s, const BoundaryComponent& comp, int b = 2) {
  const std::size_t L = comp.size();
  std::vector<bool> after(L, false);
  for (std::size_t k = 0; k < L; ++k) {
    for (const FanEdge& f : comp[k].fan) {
      if (s.edges()[static_cast<std::size_t>(f.edge)].generator == b) after[k] = true;
    }
  }
  const bool fwd = (comp[0].forward ? 1 : -1) * s.letter(comp[0].slot).sign() > 0;
  OrientedBoundary ob;
  for (std::size_t i = 0; i < L; ++i) {
    if (fwd) {
      ob.edges.push_back(comp[i].slot);
      ob.b_at_tail.push_back(after[(i + L - 1) % L]);
    } else {
      ob.edges.push_back(comp[L - 1 - i].slot);
      ob.b_at_tail.push_back(after[L - 1 - i]);
    }
  }
  return ob;
}

}  // namespace detail

// Polygonal surface for a simple height-one word satisfying the two
// inequalities. The certifier has the final word on every output.
inline Construction construct_height_one(const CyclicWord& w, const HeightOneOptions& opt = {}) {
  const auto hp = is_simple_height_one(w);
  if (!hp) throw not_applicable("not a simple height-one word");
  if (!height_one_inequalities(*hp)) throw not_applicable("pp' <= q^2 and qq' <= p^2 do not both hold");
  if (is_proper_power(w)) throw not_applicable("proper powers are handled declaratively");
  if (static_cast<long long>(hp->q) * hp->q_prime > static_cast<long long>(hp->p) * hp->p_prime) {
    // Inverting b swaps the p- and q-blocks.
    const Relabeling flip = Relabeling::invert({2});
    Construction c = construct_height_one(transform(w, flip), opt);
    c.certificate = transform_certificate(c.certificate, flip);
    c.plan.parameters["swapped"] = true;
    return c;
  }
  const HeightOneLayout lay = height_one_layout(w, opt);
  const SurfaceComplex base(w, lay.disks, lay.sim_prime);
  const LambdaMultiset single = boundary_lambda(base);
  int copies = 1;
  LambdaMultiset lam = single;
  std::optional<UCertificate> u = u_membership(lam);
  if (!u) {
    copies = 2;
    lam = single + single;
    u = u_membership(lam);
  }
  if (!u) throw error("lambda of the height-one layout is not in U");

  // Boundary components of every copy, aligned with the sorted multiset.
  struct Comp {
    int copy;
    std::size_t index;
    LambdaTerm term;
  };
  std::vector<Comp> comps;
  const std::vector<LambdaTerm> comp_terms = boundary_terms(base);
  for (int copy = 0; copy < copies; ++copy) {
    for (std::size_t k = 0; k < comp_terms.size(); ++k) comps.push_back({copy, k, comp_terms[k]});
  }
  std::stable_sort(comps.begin(), comps.end(), [](const Comp& a, const Comp& b) { return a.term < b.term; });

  const int m0 = static_cast<int>(lay.disks.size());
  std::vector<DiskSpec> disks;
  std::vector<SlotPair> pairs;
  for (int copy = 0; copy < copies; ++copy) {
    disks.insert(disks.end(), lay.disks.begin(), lay.disks.end());
    for (const auto& [a, b] : lay.sim_prime) {
      pairs.push_back({{a.disk + copy * m0, a.pos}, {b.disk + copy * m0, b.pos}});
    }
  }
  for (const UPair& up : u->pairs) {
    const Comp& ca = comps[up.first];
    const Comp& cb = comps[up.second];
    const detail::OrientedBoundary A = detail::orient_boundary(base, base.boundary()[ca.index]);
    const detail::OrientedBoundary B = detail::orient_boundary(base, base.boundary()[cb.index]);
    const std::size_t m = A.edges.size();
    if (B.edges.size() != m) throw error("matched boundary components differ in length");
    std::size_t shift = 0;
    if (up.same_sign) {
      bool found = false;
      for (shift = 0; shift < m && !found; ++shift) {
        found = true;
        for (std::size_t i = 0; i < m && found; ++i) found = !(A.b_at_tail[i] && B.b_at_tail[(i + shift) % m]);
        if (found) break;
      }
      if (!found) throw error("no separating offset for a same-sign pair");
    }
    for (std::size_t i = 0; i < m; ++i) {
      const Slot x = A.edges[i];
      const Slot y = B.edges[(i + shift) % m];
      pairs.push_back({{x.disk + ca.copy * m0, x.pos}, {y.disk + cb.copy * m0, y.pos}});
    }
  }

  Construction c;
  c.certificate = certify(w, disks, pairs);
  c.plan.strategy = "height-one";
  c.plan.parameters = {{"p", lay.params.p},         {"q", lay.params.q},   {"p_prime", lay.params.p_prime},
                       {"q_prime", lay.params.q_prime}, {"l", lay.params.l}, {"A", lay.A},
                       {"x", lay.x},                {"sigma", lay.sigma}, {"c", lay.c},
                       {"d", lay.d},                {"copies", copies},   {"swapped", false}};
  c.u = u;
  c.lambda = lam;
  return c;
}

// ---------------------------------------------------------------------------
// Follower obstruction

struct FollowerEvidence {
  int generator = 1;          // generator whose neighbour set is a singleton
  bool successors = true;     // false: the predecessor set
  int neighbour = 1;          // the single neighbouring generator
  std::vector<int> inverted;  // generators inverted to make w positive
};

// For a positive (after inverting generators) rank-2 word using both
// generators and not a proper power: evidence when some generator is always
// followed, or always preceded, by the same generator.
inline std::optional<FollowerEvidence> nonpolygonality_follower_obstruction(const CyclicWord& w) {
  if (w.rank() != 2 || w.generator_count() != 2 || is_proper_power(w)) return std::nullopt;
  FollowerEvidence ev;
  for (int g = 1; g <= 2; ++g) {
    bool pos = false, neg = false;
    for (Letter x : w.letters()) {
      if (x.generator() == g) (x.sign() > 0 ? pos : neg) = true;
    }
    if (pos && neg) return std::nullopt;
    if (neg) ev.inverted.push_back(g);
  }
  const CyclicWord u = ev.inverted.empty() ? w : transform(w, Relabeling::invert(ev.inverted));
  const long long n = static_cast<long long>(u.size());
  for (int g = 1; g <= 2; ++g) {
    std::set<int> next, prev;
    for (long long i = 0; i < n; ++i) {
      if (u[i].generator() != g) continue;
      next.insert(u[i + 1].generator());
      prev.insert(u[i - 1].generator());
    }
    if (next.size() == 1) {
      ev.generator = g;
      ev.successors = true;
      ev.neighbour = *next.begin();
      return ev;
    }
    if (prev.size() == 1) {
      ev.generator = g;
      ev.successors = false;
      ev.neighbour = *prev.begin();
      return ev;
    }
  }
  return std::nullopt;
}

}  // namespace polyw
