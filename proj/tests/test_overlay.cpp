#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cdm/errors.hpp"
#include <fstream>

#include "cdm/io.hpp"
#include "cdm/overlay.hpp"
#include "cdm/rng.hpp"
#include "cdm/sampling.hpp"

using namespace cdm;

namespace {

PointSet random_points(int n, int d, uint64_t seed, bool torus) {
  Rng rng(seed);
  PointSet ps(d);
  if (torus) ps.periodic.assign(size_t(d), 1);
  for (int i = 0; i < n * d; ++i) ps.coords.push_back(rng.uniform());
  if (torus) ps.quantize_periodic();
  return ps;
}

std::vector<SimplicialMosaic> mono_mosaics(const PointSet& ps, const Coloring& chi) {
  std::vector<SimplicialMosaic> out;
  for (int j = 0; j <= chi.s; ++j) {
    PointSet sub(ps.dim);
    sub.periodic = ps.periodic;
    for (int i = 0; i < ps.size(); ++i) {
      if (chi.color(i) != j) continue;
      sub.coords.insert(sub.coords.end(), ps.point(i), ps.point(i) + ps.dim);
      sub.ids.push_back(uint32_t(i));
    }
    out.push_back(ps.any_periodic() ? delaunay_periodic(sub) : delaunay(sub));
  }
  return out;
}

}  // namespace

TEST_CASE("overlay counts agree with the census and satisfy torus Euler") {
  PointSet ps = random_points(40, 2, 808, true);
  Coloring chi = random_coloring(ps, 1, 4);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  OverlayGraph g = membrane_overlay(cm, {0, 1});
  DensityReport rep = mp_np(census(cm), 40);
  CHECK(g.n_vertices == rep.n_p[0]);
  CHECK(g.n_edges == rep.n_p[1]);
  CHECK(g.n_faces == rep.n_p[2]);
  CHECK(g.n_vertices - g.n_edges + g.n_faces == 0);
  CHECK(g.mono_vertices == rep.m_p[0]);
  CHECK(g.crossings == rep.surplus);
}

TEST_CASE("singleton membrane is the mono Voronoi graph") {
  PointSet ps = random_points(30, 2, 123, true);
  Coloring chi = random_coloring(ps, 1, 5);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  auto monos = mono_mosaics(ps, chi);
  for (int j = 0; j <= 1; ++j) {
    OverlayGraph g = membrane_overlay(cm, {j});
    CHECK(g.n_vertices == monos[size_t(j)].n_cells());
    CHECK(g.crossings == 0);
    CHECK(g.n_vertices - g.n_edges + g.n_faces == 0);
  }
}

TEST_CASE("membrane overlay equals the arrangement oracle") {
  Rng rng(777);
  for (int rep = 0; rep < 6; ++rep) {
    int s = rep % 3 == 2 ? 2 : 1;
    PointSet ps = random_points(16 + int(rng.below(20)), 2, rng.next_u64(), true);
    Coloring chi = random_coloring(ps, s, rng.next_u64());
    if (min_class_size(chi) < 1) continue;
    ChromaticMosaic cm = chromatic_delaunay(ps, chi);
    std::vector<int> full;
    for (int j = 0; j <= s; ++j) full.push_back(j);
    OverlayGraph mem = membrane_overlay(cm, full);
    auto monos = mono_mosaics(ps, chi);
    std::vector<VoronoiSkeleton> skels;
    for (auto& m : monos) skels.push_back(voronoi_skeleton(m));
    ArrangementResult oracle = arrangement_overlay_2d(skels, true, true);
    CHECK(mem.n_vertices == oracle.graph.n_vertices);
    CHECK(mem.n_edges == oracle.graph.n_edges);
    CHECK(mem.n_faces == oracle.graph.n_faces);
    CHECK(mem.crossings == oracle.graph.crossings);
    CHECK(oracle.traced_faces == oracle.graph.n_faces);
  }
}

TEST_CASE("degree law: crossings have degree 4, mono vertices degree 3") {
  PointSet ps = random_points(100, 2, 31337, true);
  Coloring chi = random_coloring(ps, 1, 9);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  OverlayGraph g = membrane_overlay(cm, {0, 1});
  std::vector<int> degree(size_t(g.n_vertices), 0);
  for (const auto& e : g.edges) {
    ++degree[e.a];
    if (e.b != kBoundary) ++degree[e.b];
    if (e.a == e.b) { /* self loop counted twice already */ }
  }
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    int expect = g.vertices[v].kind == OverlayVertexKind::Crossing ? 4 : 3;
    CHECK(degree[v] == expect);
  }
}

TEST_CASE("one tessellation alone has zero crossings in the oracle") {
  PointSet ps = random_points(20, 2, 5150, true);
  Coloring chi;
  chi.s = 0;
  chi.chi.assign(20, 0);
  auto monos = mono_mosaics(ps, chi);
  std::vector<VoronoiSkeleton> skels{voronoi_skeleton(monos[0])};
  ArrangementResult oracle = arrangement_overlay_2d(skels, true);
  CHECK(oracle.graph.crossings == 0);
  CHECK(oracle.graph.n_vertices == monos[0].n_cells());
  CHECK(oracle.graph.n_vertices - oracle.graph.n_edges + oracle.graph.n_faces == 0);
}

TEST_CASE("orthogonal stripe patterns cross pairwise") {
  // two near-degenerate pencils of parallel Voronoi lines crossing at right
  // angles: (n0-1)*(n1-1) crossings
  const int n0 = 5, n1 = 4;
  PointSet a(2), b(2);
  for (int i = 0; i < n0; ++i) a.add({double(i), 1e-7 * i * i});
  for (int i = 0; i < n1; ++i) b.add({1e-7 * i * i, double(i)});
  SimplicialMosaic ma = delaunay(a), mb = delaunay(b);
  std::vector<VoronoiSkeleton> skels{voronoi_skeleton(ma), voronoi_skeleton(mb)};
  ArrangementResult oracle = arrangement_overlay_2d(skels, false);
  CHECK(oracle.crossings_by_pair[{0, 1}] == (n0 - 1) * (n1 - 1));
}

TEST_CASE("crossing census: no crossings for a single color") {
  PointSet ps = random_points(25, 2, 550, true);
  Coloring chi;
  chi.s = 0;
  chi.chi.assign(25, 0);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  CrossingCensus cc = crossing_census(cm, 25);
  CHECK(cc.total == 0);
  CHECK(cc.pair_counts.empty());
}

TEST_CASE("crossing census: 3D bi-color tallies are consistent") {
  PointSet ps = random_points(30, 3, 606, true);
  Coloring chi = random_coloring(ps, 1, 2);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  CrossingCensus cc = crossing_census(cm, 30);
  long long pair_total = 0;
  for (auto& [pr, cnt] : cc.pair_counts) pair_total += cnt;
  CHECK(cc.total == pair_total + cc.triple);
  CHECK(cc.triple == 0);  // s = 1 has no triple crossings
  // direct signature tally: N_23 + N_32
  CountTable t = census(cm);
  CHECK(cc.total == t.at({2, 3}) + t.at({3, 2}));
}

TEST_CASE("2D tri-color surplus matches the pair breakdown") {
  PointSet ps = random_points(36, 2, 931, true);
  Coloring chi = random_coloring(ps, 2, 8);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  CrossingCensus cc = crossing_census(cm, 36);
  long long pair_total = 0;
  for (auto& [pr, cnt] : cc.pair_counts) pair_total += cnt;
  CHECK(cc.total == pair_total);
  CountTable t = census(cm);
  CHECK(cc.total == t.at({1, 2, 2}) + t.at({2, 1, 2}) + t.at({2, 2, 1}));
}

TEST_CASE("overlay dumps") {
  PointSet ps = random_points(20, 2, 64, true);
  Coloring chi = random_coloring(ps, 1, 7);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  OverlayGraph g = membrane_overlay(cm, {0, 1});
  overlay_to_svg(g, "/tmp/cdm_test_overlay.svg");
  overlay_to_csv(g, "/tmp/cdm_test_overlay.csv");
  std::ifstream svg("/tmp/cdm_test_overlay.svg");
  std::string line;
  std::getline(svg, line);
  CHECK(line.find("<svg") != std::string::npos);
}
