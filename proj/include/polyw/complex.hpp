#pragma once

// Polygonal disks whose boundaries read powers of a cyclic word, side-pairings
// between their boundary slots, and the quotient surface.
//
// Slot j of a disk of power k > 0 reads w[j mod |w|]; for k < 0 it reads the
// inverse word. Slot j runs from corner j to corner j+1. A positive letter
// points the same way (tail at corner j), a negative letter the other way.
// Paired slots are glued tail to tail and head to head.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polyw/error.hpp"
#include "polyw/invariants.hpp"
#include "polyw/words.hpp"

namespace polyw {

struct DiskSpec {
  int power = 1;
  friend auto operator<=>(const DiskSpec&, const DiskSpec&) = default;
};

struct Slot {
  int disk = 0;
  int pos = 0;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

using SlotPair = std::pair<Slot, Slot>;

// Pairs normalized so first < second, sorted.
inline std::vector<SlotPair> normalize_pairing(std::vector<SlotPair> pairs) {
  for (auto& [a, b] : pairs) {
    if (b < a) std::swap(a, b);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

inline std::size_t disk_length(const CyclicWord& w, DiskSpec d) {
  return static_cast<std::size_t>(std::abs(d.power)) * w.size();
}

inline Letter slot_letter(const CyclicWord& w, int power, long long j) {
  const long long n = static_cast<long long>(w.size());
  const long long r = ((j % n) + n) % n;
  return power > 0 ? w[r] : w[n - 1 - r].inverse();
}

enum class Side { start, end };
enum class Role { tail, head };

inline Role slot_role(Letter x, Side side) {
  const bool forward = x.sign() > 0;
  return (side == Side::start) == forward ? Role::tail : Role::head;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Edge {
  int generator = 1;
  int tail = 0;
  int head = 0;
  std::vector<Slot> slots;  // one slot for a boundary edge, two for a glued edge
};

// An interior edge met while rounding a boundary vertex.
struct FanEdge {
  int edge = 0;
  Role role = Role::tail;  // tail: the edge leaves the vertex
};

struct BoundaryStep {
  Slot slot;
  bool forward = true;       // traversed from corner pos to corner pos+1
  std::vector<FanEdge> fan;  // interior edges at the vertex reached after this step
};

using BoundaryComponent = std::vector<BoundaryStep>;

struct ComponentCounts {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int chi() const { return vertices - edges + faces; }
};

class SurfaceComplex {
 public:
  // Throws pairing_error on an invalid pairing and precondition_error on a zero power.
  SurfaceComplex(CyclicWord w, std::vector<DiskSpec> disks, std::vector<SlotPair> pairing)
      : word_(std::move(w)), disks_(std::move(disks)), pairs_(normalize_pairing(std::move(pairing))) {
    if (disks_.empty()) throw precondition_error("at least one disk is required");
    for (std::size_t d = 0; d < disks_.size(); ++d) {
      if (disks_[d].power == 0) throw precondition_error("disk power must be nonzero");
      offset_.push_back(total_);
      total_ += disk_length(word_, disks_[d]);
    }
    partner_.assign(total_, npos);
    for (const auto& [a, b] : pairs_) {
      check_slot(a);
      check_slot(b);
      if (a == b) throw pairing_error("slot " + slot_str(a) + " is paired with itself");
      const std::size_t ia = index(a), ib = index(b);
      if (partner_[ia] != npos || partner_[ib] != npos) {
        throw pairing_error("slot " + slot_str(partner_[ia] != npos ? a : b) + " is paired twice");
      }
      if (letter(a).generator() != letter(b).generator()) {
        throw pairing_error("label mismatch between " + slot_str(a) + " and " + slot_str(b));
      }
      partner_[ia] = ib;
      partner_[ib] = ia;
    }
    build();
  }

  const CyclicWord& word() const { return word_; }
  const std::vector<DiskSpec>& disks() const { return disks_; }
  const std::vector<SlotPair>& pairing() const { return pairs_; }

  std::size_t slot_count() const { return total_; }
  std::size_t disk_size(int d) const { return disk_length(word_, disks_[static_cast<std::size_t>(d)]); }
  Letter letter(Slot s) const { return slot_letter(word_, disks_[static_cast<std::size_t>(s.disk)].power, s.pos); }
  std::optional<Slot> partner(Slot s) const {
    const std::size_t p = partner_[index(s)];
    if (p == npos) return std::nullopt;
    return slot_at(p);
  }

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(disks_.size()); }
  int euler_characteristic() const { return vertex_count() - edge_count() + face_count(); }
  bool closed() const { return boundary_.empty(); }

  const std::vector<Edge>& edges() const { return edges_; }
  int edge_of(Slot s) const { return slot_edge_[index(s)]; }
  // Vertex at corner c of disk d (corner c starts slot c).
  int corner_vertex(int d, long long c) const {
    const long long n = static_cast<long long>(disk_size(d));
    return corner_vertex_[offset_[static_cast<std::size_t>(d)] + static_cast<std::size_t>(((c % n) + n) % n)];
  }
  // Edge traversals around face d in slot order: (edge, traversed tail-to-head).
  std::vector<std::pair<int, bool>> face(int d) const {
    std::vector<std::pair<int, bool>> out;
    for (std::size_t j = 0; j < disk_size(d); ++j) {
      const Slot s{d, static_cast<int>(j)};
      out.emplace_back(edge_of(s), letter(s).sign() > 0);
    }
    return out;
  }

  const std::vector<BoundaryComponent>& boundary() const { return boundary_; }

  int component_count() const { return static_cast<int>(components_.size()); }
  int component_of_disk(int d) const { return disk_component_[static_cast<std::size_t>(d)]; }
  const std::vector<ComponentCounts>& components() const { return components_; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t index(Slot s) const { return offset_[static_cast<std::size_t>(s.disk)] + static_cast<std::size_t>(s.pos); }
  Slot slot_at(std::size_t g) const {
    const auto it = std::upper_bound(offset_.begin(), offset_.end(), g);
    const std::size_t d = static_cast<std::size_t>(it - offset_.begin()) - 1;
    return {static_cast<int>(d), static_cast<int>(g - offset_[d])};
  }
  static std::string slot_str(Slot s) { return "(" + std::to_string(s.disk) + "," + std::to_string(s.pos) + ")"; }
  void check_slot(Slot s) const {
    if (s.disk < 0 || static_cast<std::size_t>(s.disk) >= disks_.size() || s.pos < 0 ||
        static_cast<std::size_t>(s.pos) >= disk_size(s.disk)) {
      throw pairing_error("slot " + slot_str(s) + " does not exist");
    }
  }
  std::size_t corner_index(Slot s, Side side) const {
    const std::size_t n = disk_size(s.disk);
    const std::size_t c = side == Side::start ? static_cast<std::size_t>(s.pos) : (static_cast<std::size_t>(s.pos) + 1) % n;
    return offset_[static_cast<std::size_t>(s.disk)] + c;
  }
  std::size_t role_corner(Slot s, Role r) const {
    const bool forward = letter(s).sign() > 0;
    return corner_index(s, (r == Role::tail) == forward ? Side::start : Side::end);
  }
  Slot neighbour(Slot s, Side side, Side& neighbour_side) const {
    const int n = static_cast<int>(disk_size(s.disk));
    if (side == Side::end) {
      neighbour_side = Side::start;
      return {s.disk, (s.pos + 1) % n};
    }
    neighbour_side = Side::end;
    return {s.disk, (s.pos + n - 1) % n};
  }

  void build() {
    UnionFind corners(total_);
    UnionFind faces(disks_.size());
    for (const auto& [a, b] : pairs_) {
      corners.unite(role_corner(a, Role::tail), role_corner(b, Role::tail));
      corners.unite(role_corner(a, Role::head), role_corner(b, Role::head));
      faces.unite(static_cast<std::size_t>(a.disk), static_cast<std::size_t>(b.disk));
    }
    std::map<std::size_t, int> vid;
    corner_vertex_.resize(total_);
    for (std::size_t c = 0; c < total_; ++c) {
      auto [it, fresh] = vid.emplace(corners.find(c), static_cast<int>(vid.size()));
      corner_vertex_[c] = it->second;
    }
    vertex_count_ = static_cast<int>(vid.size());

    slot_edge_.assign(total_, -1);
    for (std::size_t g = 0; g < total_; ++g) {
      if (slot_edge_[g] >= 0) continue;
      const Slot s = slot_at(g);
      Edge e;
      e.generator = letter(s).generator();
      e.tail = corner_vertex_[role_corner(s, Role::tail)];
      e.head = corner_vertex_[role_corner(s, Role::head)];
      e.slots.push_back(s);
      slot_edge_[g] = static_cast<int>(edges_.size());
      if (partner_[g] != npos) {
        e.slots.push_back(slot_at(partner_[g]));
        slot_edge_[partner_[g]] = static_cast<int>(edges_.size());
      }
      edges_.push_back(std::move(e));
    }

    std::map<std::size_t, int> cid;
    disk_component_.resize(disks_.size());
    for (std::size_t d = 0; d < disks_.size(); ++d) {
      auto [it, fresh] = cid.emplace(faces.find(d), static_cast<int>(cid.size()));
      disk_component_[d] = it->second;
    }
    components_.assign(cid.size(), {});
    std::vector<int> vertex_comp(static_cast<std::size_t>(vertex_count_), -1);
    for (std::size_t c = 0; c < total_; ++c) {
      vertex_comp[static_cast<std::size_t>(corner_vertex_[c])] = disk_component_[static_cast<std::size_t>(slot_at(c).disk)];
    }
    for (int comp : vertex_comp) ++components_[static_cast<std::size_t>(comp)].vertices;
    for (const Edge& e : edges_) ++components_[static_cast<std::size_t>(disk_component_[static_cast<std::size_t>(e.slots[0].disk)])].edges;
    for (std::size_t d = 0; d < disks_.size(); ++d) ++components_[static_cast<std::size_t>(disk_component_[d])].faces;

    walk_boundary();
  }

  void walk_boundary() {
    std::vector<bool> visited(total_, false);
    for (std::size_t g0 = 0; g0 < total_; ++g0) {
      if (partner_[g0] != npos || visited[g0]) continue;
      BoundaryComponent comp;
      Slot x = slot_at(g0);
      Side at = Side::end;
      bool forward = true;
      for (;;) {
        visited[index(x)] = true;
        BoundaryStep step{x, forward, {}};
        // Round the vertex at side `at` of x until the next boundary slot.
        Side ys;
        Slot y = neighbour(x, at, ys);
        while (partner_[index(y)] != npos) {
          const Role r = slot_role(letter(y), ys);
          step.fan.push_back({edge_of(y), r});
          const Slot z = slot_at(partner_[index(y)]);
          const Side zs = slot_role(letter(z), Side::start) == r ? Side::start : Side::end;
          y = neighbour(z, zs, ys);
        }
        comp.push_back(std::move(step));
        x = y;
        forward = ys == Side::start;
        at = forward ? Side::end : Side::start;
        if (visited[index(x)]) break;
      }
      boundary_.push_back(std::move(comp));
    }
  }

  CyclicWord word_;
  std::vector<DiskSpec> disks_;
  std::vector<SlotPair> pairs_;
  std::vector<std::size_t> offset_;
  std::size_t total_ = 0;
  std::vector<std::size_t> partner_;
  std::vector<int> corner_vertex_;
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> slot_edge_;
  std::vector<int> disk_component_;
  std::vector<ComponentCounts> components_;
  std::vector<BoundaryComponent> boundary_;
};

inline SurfaceComplex build_complex(const CyclicWord& w, std::vector<DiskSpec> disks, std::vector<SlotPair> pairing) {
  return SurfaceComplex(w, std::move(disks), std::move(pairing));
}

// ---------------------------------------------------------------------------
// Immersion

struct ImmersionViolation {
  int vertex = 0;
  int generator = 1;
  bool outgoing = true;
  int count = 0;
};

struct ImmersionReport {
  bool ok = true;
  std::vector<ImmersionViolation> violations;
};

inline ImmersionReport check_immersion(const SurfaceComplex& s) {
  std::map<std::tuple<int, int, bool>, int> count;
  for (const Edge& e : s.edges()) {
    ++count[{e.tail, e.generator, true}];
    ++count[{e.head, e.generator, false}];
  }
  ImmersionReport r;
  for (const auto& [key, n] : count) {
    if (n > 1) {
      r.ok = false;
      r.violations.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), n});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Orientability and genus

struct GenusReport {
  bool orientable = true;
  int chi = 0;
  // Orientable genus, or the number of cross-caps when non-orientable.
  int genus = 0;
};

// One report per connected component. Requires a closed surface.
inline std::vector<GenusReport> genus_report(const SurfaceComplex& s) {
  if (!s.closed()) throw precondition_error("genus report needs a closed surface");
  const std::size_t m = s.disks().size();
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(m);
  for (const auto& [a, b] : s.pairing()) {
    const int need = -s.letter(a).sign() * s.letter(b).sign();
    adj[static_cast<std::size_t>(a.disk)].emplace_back(static_cast<std::size_t>(b.disk), need);
    adj[static_cast<std::size_t>(b.disk)].emplace_back(static_cast<std::size_t>(a.disk), need);
  }
  std::vector<int> eps(m, 0);
  std::vector<bool> orientable(static_cast<std::size_t>(s.component_count()), true);
  for (std::size_t d0 = 0; d0 < m; ++d0) {
    if (eps[d0]) continue;
    eps[d0] = 1;
    std::queue<std::size_t> q;
    q.push(d0);
    while (!q.empty()) {
      const std::size_t d = q.front();
      q.pop();
      for (auto [e, need] : adj[d]) {
        if (!eps[e]) {
          eps[e] = eps[d] * need;
          q.push(e);
        } else if (eps[e] != eps[d] * need) {
          orientable[static_cast<std::size_t>(s.component_of_disk(static_cast<int>(d)))] = false;
        }
      }
    }
  }
  std::vector<GenusReport> out;
  for (std::size_t c = 0; c < s.components().size(); ++c) {
    GenusReport g;
    g.orientable = orientable[c];
    g.chi = s.components()[c].chi();
    g.genus = g.orientable ? (2 - g.chi) / 2 : 2 - g.chi;
    out.push_back(g);
  }
  return out;
}

inline int euler_characteristic(const SurfaceComplex& s) { return s.euler_characteristic(); }

// ---------------------------------------------------------------------------
// Certification

struct Verdict {
  int chi = 0;
  int m = 0;
  int vertices = 0;
  bool immersion = false;
  bool closed = false;
  bool readings_ok = false;
  // chi < (disk count) on every connected component.
  bool chi_below_m = false;
  bool polygonal = false;
  std::string reason;  // first failed check, empty when polygonal

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct PolygonalityCertificate {
  CyclicWord word;
  std::vector<DiskSpec> disks;
  std::vector<SlotPair> pairing;
  Verdict verdict;
  // Proper powers are polygonal without a surface; power is the exponent.
  bool declarative = false;
  int proper_power = 1;
};

inline Verdict evaluate(const SurfaceComplex& s) {
  Verdict v;
  v.readings_ok = true;
  v.chi = s.euler_characteristic();
  v.m = s.face_count();
  v.vertices = s.vertex_count();
  v.closed = s.closed();
  v.immersion = check_immersion(s).ok;
  v.chi_below_m = std::all_of(s.components().begin(), s.components().end(),
                              [](const ComponentCounts& c) { return c.chi() < c.faces; });
  if (!v.closed) {
    v.reason = "pairing is partial";
  } else if (!v.immersion) {
    v.reason = "1-skeleton does not immerse";
  } else if (!v.chi_below_m) {
    v.reason = "some component has chi >= m";
  }
  v.polygonal = v.reason.empty();
  return v;
}

inline PolygonalityCertificate certify(const CyclicWord& w, std::vector<DiskSpec> disks, std::vector<SlotPair> pairing) {
  PolygonalityCertificate cert{w, disks, normalize_pairing(pairing), {}, false, 1};
  try {
    const SurfaceComplex s(w, std::move(disks), std::move(pairing));
    cert.verdict = evaluate(s);
  } catch (const error& e) {
    cert.verdict = Verdict{};
    cert.verdict.m = static_cast<int>(cert.disks.size());
    cert.verdict.reason = e.what();
  }
  return cert;
}

inline PolygonalityCertificate declarative_certificate(const CyclicWord& w) {
  const PrimitiveRoot r = primitive_root(w);
  if (r.power < 2) throw precondition_error("declarative certificates are for proper powers only");
  PolygonalityCertificate cert{w, {}, {}, {}, true, r.power};
  cert.verdict.readings_ok = true;
  cert.verdict.polygonal = true;
  return cert;
}

// Re-runs the certifier on the stored data; true iff it reproduces the verdict.
inline bool recheck(const PolygonalityCertificate& cert) {
  if (cert.declarative) return is_proper_power(cert.word) && primitive_root(cert.word).power == cert.proper_power;
  return certify(cert.word, cert.disks, cert.pairing).verdict == cert.verdict;
}

// ---------------------------------------------------------------------------
// lambda of the boundary of a consistent b-side-pairing

// One lambda term per boundary component, in boundary order, walking each
// along its a-edge orientation. Throws precondition_error when a component
// carries a non-a edge, has incoherent a-orientation, mixes b-directions, or
// meets no b-edge.
inline std::vector<LambdaTerm> boundary_terms(const SurfaceComplex& s, int a = 1, int b = 2) {
  std::vector<LambdaTerm> terms;
  for (const BoundaryComponent& comp : s.boundary()) {
    int dir = 0;
    int sign = 0;
    std::vector<bool> flag;
    for (const BoundaryStep& st : comp) {
      const Letter x = s.letter(st.slot);
      if (x.generator() != a) throw precondition_error("boundary component carries a non-a edge");
      const int d = (st.forward ? 1 : -1) * x.sign();
      if (dir != 0 && d != dir) throw precondition_error("incoherent a-orientation on a boundary component");
      dir = d;
      bool hit = false;
      for (const FanEdge& f : st.fan) {
        if (s.edges()[static_cast<std::size_t>(f.edge)].generator != b) continue;
        const int sg = f.role == Role::tail ? 1 : -1;
        if (sign != 0 && sg != sign) throw precondition_error("mixed b-directions on a boundary component");
        sign = sg;
        hit = true;
      }
      flag.push_back(hit);
    }
    if (sign == 0) throw precondition_error("boundary component meets no b-edge");
    // Runs between b-incident vertices; vertex k follows step k.
    std::vector<int> runs;
    const std::size_t n = flag.size();
    std::size_t first = 0;
    while (!flag[first]) ++first;
    int len = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      ++len;
      if (flag[(first + i) % n]) {
        runs.push_back(len);
        len = 0;
      }
    }
    if (dir < 0) std::reverse(runs.begin(), runs.end());
    terms.push_back(LambdaTerm::make(sign, runs));
  }
  return terms;
}

inline LambdaMultiset boundary_lambda(const SurfaceComplex& s, int a = 1, int b = 2) {
  return make_lambda(boundary_terms(s, a, b));
}

// ---------------------------------------------------------------------------
// DOT export of the 1-skeleton

inline std::string to_dot(const SurfaceComplex& s) {
  std::ostringstream out;
  out << "digraph S1 {\n";
  for (int v = 0; v < s.vertex_count(); ++v) out << "  v" << v << ";\n";
  for (const Edge& e : s.edges()) {
    out << "  v" << e.tail << " -> v" << e.head << " [label=\"a" << e.generator << "\""
        << (e.slots.size() == 1 ? ", style=dashed" : "") << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace polyw
