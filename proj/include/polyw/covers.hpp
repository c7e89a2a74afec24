#pragma once

// Finite covers of the rose: completing an immersed labeled graph to a cover
// without adding vertices, and the elevations of a cyclic word to it.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "polyw/complex.hpp"
#include "polyw/error.hpp"
#include "polyw/words.hpp"

namespace polyw {

// Per generator g, out[g-1][v] is the head of the g-edge leaving v, or -1.
struct LabeledGraph {
  int rank = 1;
  int vertices = 0;
  std::vector<std::vector<int>> out;

  struct LabeledEdge {
    int tail;
    int head;
    int generator;
  };

  // Throws precondition_error when the edges are not folded.
  static LabeledGraph from_edges(int rank, int vertices, const std::vector<LabeledEdge>& edges) {
    check_rank(rank);
    LabeledGraph g{rank, vertices, std::vector<std::vector<int>>(static_cast<std::size_t>(rank),
                                                                 std::vector<int>(static_cast<std::size_t>(vertices), -1))};
    std::vector<std::vector<bool>> has_in(static_cast<std::size_t>(rank),
                                          std::vector<bool>(static_cast<std::size_t>(vertices), false));
    for (const LabeledEdge& e : edges) {
      if (e.generator < 1 || e.generator > rank) throw rank_error("edge label exceeds rank");
      if (e.tail < 0 || e.tail >= vertices || e.head < 0 || e.head >= vertices) {
        throw precondition_error("edge endpoint out of range");
      }
      auto& o = g.out[static_cast<std::size_t>(e.generator - 1)][static_cast<std::size_t>(e.tail)];
      auto in = has_in[static_cast<std::size_t>(e.generator - 1)][static_cast<std::size_t>(e.head)];
      if (o != -1 || in) throw precondition_error("graph is not folded at vertex " + std::to_string(o != -1 ? e.tail : e.head));
      o = e.head;
      has_in[static_cast<std::size_t>(e.generator - 1)][static_cast<std::size_t>(e.head)] = true;
    }
    return g;
  }
};

// The 1-skeleton of a surface as a labeled graph. Throws when it does not immerse.
inline LabeledGraph skeleton(const SurfaceComplex& s) {
  std::vector<LabeledGraph::LabeledEdge> edges;
  for (const Edge& e : s.edges()) edges.push_back({e.tail, e.head, e.generator});
  return LabeledGraph::from_edges(s.word().rank(), s.vertex_count(), edges);
}

struct CoverGraph {
  int rank = 1;
  // perm[g-1] is the permutation of the vertices induced by generator g.
  std::vector<std::vector<int>> perm;
  int base = 0;

  int degree() const { return perm.empty() ? 0 : static_cast<int>(perm[0].size()); }
};

// Completes each partial injection to a permutation by matching tails with no
// outgoing edge to heads with no incoming edge, both in ascending order.
inline CoverGraph stallings_complete(const LabeledGraph& g) {
  CoverGraph c{g.rank, g.out, 0};
  const std::size_t n = static_cast<std::size_t>(g.vertices);
  for (auto& p : c.perm) {
    if (p.size() != n) throw precondition_error("generator map has the wrong size");
    std::vector<bool> has_in(n, false);
    for (int h : p) {
      if (h < 0) continue;
      if (has_in[static_cast<std::size_t>(h)]) throw precondition_error("graph is not folded");
      has_in[static_cast<std::size_t>(h)] = true;
    }
    std::vector<int> free_heads;
    for (std::size_t v = 0; v < n; ++v) {
      if (!has_in[v]) free_heads.push_back(static_cast<int>(v));
    }
    std::size_t k = 0;
    for (auto& h : p) {
      if (h < 0) h = free_heads[k++];
    }
  }
  return c;
}

struct Elevation {
  int representative = 0;  // least vertex of the orbit
  int n_g = 0;
};

struct ElevationReport {
  int degree = 0;
  std::vector<Elevation> elevations;
};

// Orbits of v -> v.w, reading w letter by letter through the permutations.
inline ElevationReport elevations(const CoverGraph& c, const CyclicWord& w) {
  if (c.rank != w.rank()) throw precondition_error("rank mismatch between cover and word");
  const std::size_t n = static_cast<std::size_t>(c.degree());
  std::vector<std::vector<int>> inv(c.perm.size(), std::vector<int>(n));
  for (std::size_t g = 0; g < c.perm.size(); ++g) {
    for (std::size_t v = 0; v < n; ++v) inv[g][static_cast<std::size_t>(c.perm[g][v])] = static_cast<int>(v);
  }
  const auto step = [&](int v) {
    for (Letter x : w.letters()) {
      const auto g = static_cast<std::size_t>(x.generator() - 1);
      v = x.sign() > 0 ? c.perm[g][static_cast<std::size_t>(v)] : inv[g][static_cast<std::size_t>(v)];
    }
    return v;
  };
  ElevationReport r{static_cast<int>(n), {}};
  std::vector<bool> seen(n, false);
  for (std::size_t v0 = 0; v0 < n; ++v0) {
    if (seen[v0]) continue;
    int len = 0;
    int v = static_cast<int>(v0);
    do {
      seen[static_cast<std::size_t>(v)] = true;
      v = step(v);
      ++len;
    } while (v != static_cast<int>(v0));
    r.elevations.push_back({static_cast<int>(v0), len});
  }
  return r;
}

struct DoubleSurfaceReport {
  int degree = 0;
  int chi_S0 = 0;
};

inline DoubleSurfaceReport double_surface_report(const PolygonalityCertificate& cert) {
  if (cert.declarative) throw precondition_error("declarative certificates carry no surface");
  if (!cert.verdict.polygonal) throw precondition_error("certificate does not certify polygonality");
  return {cert.verdict.vertices, 2 * (cert.verdict.chi - cert.verdict.m)};
}

inline std::string to_dot(const CoverGraph& c) {
  std::ostringstream out;
  out << "digraph cover {\n";
  for (int v = 0; v < c.degree(); ++v) out << "  v" << v << (v == c.base ? " [shape=doublecircle]" : "") << ";\n";
  for (std::size_t g = 0; g < c.perm.size(); ++g) {
    for (std::size_t v = 0; v < c.perm[g].size(); ++v) {
      out << "  v" << v << " -> v" << c.perm[g][v] << " [label=\"a" << g + 1 << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace polyw
