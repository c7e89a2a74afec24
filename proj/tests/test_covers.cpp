#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polyw/constructors.hpp"
#include "polyw/covers.hpp"

using namespace polyw;

namespace {

void expect_cover_is_permutation(const CoverGraph& c) {
  for (const auto& perm : c.perm) {
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], static_cast<int>(i));
  }
}

}  // namespace

TEST(Covers, TorusSkeletonIsRose) {
  const SurfaceComplex s = build_complex(parse_cyclic("a b A B", 2), {{1}}, {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}});
  const CoverGraph c = stallings_complete(skeleton(s));
  EXPECT_EQ(c.degree(), 1);
  const ElevationReport e = elevations(c, s.word());
  ASSERT_EQ(e.elevations.size(), 1U);
  EXPECT_EQ(e.elevations[0].n_g, 1);
}

TEST(Covers, CompletionKeepsVerticesAndEdges) {
  const Construction k = construct_height_one(parse_cyclic("a (a^2)^b", 2));
  const SurfaceComplex s(k.certificate.word, k.certificate.disks, k.certificate.pairing);
  const LabeledGraph g = skeleton(s);
  const CoverGraph c = stallings_complete(g);
  EXPECT_EQ(c.degree(), s.vertex_count());
  expect_cover_is_permutation(c);
  // Every skeleton edge survives in the cover.
  for (const Edge& e : s.edges()) {
    EXPECT_EQ(c.perm[static_cast<std::size_t>(e.generator - 1)][static_cast<std::size_t>(e.tail)], e.head);
  }
}

TEST(Covers, ElevationsPartitionTheFibre) {
  for (const char* text : {"a (a^2)^b", "a^2 (a^3)^b", "a^2 (a^-1)^b"}) {
    const Construction k = construct_height_one(parse_cyclic(text, 2));
    const CoverGraph c = stallings_complete(skeleton(SurfaceComplex(k.certificate.word, k.certificate.disks,
                                                                    k.certificate.pairing)));
    const ElevationReport e = elevations(c, k.certificate.word);
    int total = 0;
    for (const Elevation& el : e.elevations) total += el.n_g;
    EXPECT_EQ(total, e.degree) << text;
  }
}

TEST(Covers, DoubleSurfaceReport) {
  const Construction k = construct_height_one(parse_cyclic("a (a^2)^b", 2));
  const DoubleSurfaceReport d = double_surface_report(k.certificate);
  const oracle::Counts o = oracle::complex_counts(k.certificate);
  EXPECT_EQ(d.degree, o.V);
  EXPECT_EQ(d.chi_S0, 2 * (o.chi - o.m));
  EXPECT_THROW(double_surface_report(declarative_certificate(parse_cyclic("(a b)^2", 2))), precondition_error);
}

TEST(Covers, FoldedGraphRequired) {
  // Two a-edges leaving one vertex cannot be completed.
  EXPECT_THROW(LabeledGraph::from_edges(2, 3, {{0, 1, 1}, {0, 2, 1}}), precondition_error);
  EXPECT_THROW(LabeledGraph::from_edges(2, 3, {{0, 2, 1}, {1, 2, 1}}), precondition_error);
}

TEST(Covers, DotOutput) {
  const SurfaceComplex s = build_complex(parse_cyclic("a b A B", 2), {{1}}, {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}});
  EXPECT_NE(to_dot(stallings_complete(skeleton(s))).find("digraph"), std::string::npos);
}
