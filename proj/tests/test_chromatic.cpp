#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cdm/chromatic.hpp"
#include "cdm/errors.hpp"
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

Coloring fixed_coloring(int s, std::vector<int> colors) {
  Coloring chi;
  chi.s = s;
  for (int c : colors) chi.chi.push_back(uint8_t(c));
  return chi;
}

// abstract-complex equality at every dimension
bool complexes_equal(const SimplicialMosaic& a, const SimplicialMosaic& b) {
  if (a.dim != b.dim) return false;
  for (int p = 0; p <= a.dim; ++p) {
    auto ka = all_face_keys(a, p);
    auto kb = all_face_keys(b, p);
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    if (ka != kb) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("simplex vertices") {
  auto u0 = simplex_vertices(0);
  CHECK(u0.size() == 1);
  CHECK(u0[0].empty());

  auto u1 = simplex_vertices(1);
  CHECK(u1[0][0] == 0.0);
  CHECK(u1[1][0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  for (int s = 2; s <= 4; ++s) {
    auto u = simplex_vertices(s);
    REQUIRE(u.size() == size_t(s) + 1);
    for (size_t i = 0; i < u.size(); ++i) {
      for (size_t j = i + 1; j < u.size(); ++j) {
        double d2 = 0;
        for (int c = 0; c < s; ++c) {
          double e = u[i][size_t(c)] - u[j][size_t(c)];
          d2 += e * e;
        }
        CHECK(std::sqrt(d2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
      }
    }
  }
  auto us = simplex_vertices(2, 3.0);
  double d2 = 0;
  for (int c = 0; c < 2; ++c) {
    double e = us[0][size_t(c)] - us[1][size_t(c)];
    d2 += e * e;
  }
  CHECK(std::sqrt(d2) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("embed") {
  PointSet ps(1);
  ps.add({0.3});
  ps.add({0.7});
  Coloring chi = fixed_coloring(1, {0, 1});
  PointSet emb = embed(ps, chi);
  CHECK(emb.dim == 2);
  CHECK(emb.point(0)[0] == 0.0);
  CHECK(emb.point(0)[1] == 0.3);
  CHECK(emb.point(1)[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(emb.point(1)[1] == 0.7);

  Coloring mono = fixed_coloring(0, {0, 0});
  PointSet emb0 = embed(ps, mono);
  CHECK(emb0.coords == ps.coords);

  PointSet p2(2);
  p2.add({0.1, 0.2});
  Coloring c2 = fixed_coloring(2, {2});
  PointSet e2 = embed(p2, c2);
  CHECK(e2.dim == 4);
  double n2 = e2.point(0)[0] * e2.point(0)[0] + e2.point(0)[1] * e2.point(0)[1];
  CHECK(std::sqrt(n2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(e2.point(0)[2] == 0.1);
  CHECK(e2.point(0)[3] == 0.2);
}

TEST_CASE("embed preserves within-layer distances and inflates across") {
  Rng rng(5);
  PointSet ps(2);
  for (int i = 0; i < 8; ++i) ps.add({rng.uniform(), rng.uniform()});
  Coloring chi = fixed_coloring(1, {0, 0, 0, 0, 1, 1, 1, 1});
  PointSet emb = embed(ps, chi);
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      double base = 0, lifted = 0;
      for (int c = 0; c < 2; ++c) {
        double e = ps.point(i)[c] - ps.point(j)[c];
        base += e * e;
      }
      for (int c = 0; c < 3; ++c) {
        double e = emb.point(i)[c] - emb.point(j)[c];
        lifted += e * e;
      }
      if (chi.color(i) == chi.color(j))
        CHECK(lifted == doctest::Approx(base).epsilon(1e-13));
      else
        CHECK(lifted == doctest::Approx(base + 2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("two points, one edge") {
  PointSet ps(1);
  ps.add({0.0});
  ps.add({1.0});
  ChromaticMosaic cm = chromatic_delaunay(ps, fixed_coloring(1, {0, 1}));
  CHECK(cm.base.dim == 2);
  CHECK(cm.base.n_cells() == 1);
  ColorSignature sig = cm.signature(cm.base.cell(0), 2);
  CHECK(sig.counts == std::vector<int>{1, 1});
  CHECK(faces(cm.base, 0).size() == 2);
}

TEST_CASE("top cells have s+d+1 vertices and are colorful for >= 2 colors") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    PointSet ps = random_points(10 + int(rng.below(8)), 2, rng.next_u64(), false);
    Coloring chi = random_coloring(ps, 1, rng.next_u64());
    if (min_class_size(chi) < 1) continue;
    ChromaticMosaic cm = chromatic_delaunay(ps, chi);
    for (int c = 0; c < cm.base.n_cells(); ++c) {
      ColorSignature sig = cm.signature(cm.base.cell(c), cm.base.cell_size());
      CHECK(sig.total() == 4);
      CHECK(sig.support() >= 2);  // generic: each layer is a d-flat in R^(s+d)
    }
  }
}

TEST_CASE("signature partition: every face is colorful for exactly its support") {
  PointSet ps = random_points(14, 2, 88, true);
  Coloring chi = random_coloring(ps, 2, 11);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  for (int p = 0; p <= cm.ambient_dim(); ++p) {
    FaceList fl = faces(cm.base, p);
    for (int f = 0; f < fl.size(); ++f) {
      ColorSignature sig = cm.signature(fl.face(f), p + 1);
      int colorful_for = 0;
      for (uint32_t mask = 1; mask < 8; ++mask) {
        std::vector<int> tau;
        for (int j = 0; j < 3; ++j)
          if (mask & (1u << j)) tau.push_back(j);
        if (sig.colorful_in(tau)) ++colorful_for;
      }
      CHECK(colorful_for == 1);
    }
  }
}

TEST_CASE("census totals match face counts") {
  PointSet ps = random_points(12, 2, 4242, true);
  Coloring chi = random_coloring(ps, 1, 7);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  CountTable table = census(cm);
  for (int p = 0; p <= cm.ambient_dim(); ++p)
    CHECK(table.total_faces(p) == faces(cm.base, p).size());
}

TEST_CASE("restriction: singleton equals the mono Delaunay mosaic") {
  Rng rng(31415);
  for (bool torus : {false, true}) {
    PointSet ps = random_points(12, 2, rng.next_u64(), torus);
    Coloring chi = random_coloring(ps, 1, rng.next_u64());
    while (min_class_size(chi) < 4)
      chi = random_coloring(ps, 1, rng.next_u64());
    ChromaticMosaic cm = chromatic_delaunay(ps, chi);
    for (int j = 0; j <= 1; ++j) {
      ChromaticMosaic restricted = restrict_mosaic(cm, {j});
      PointSet sub(2);
      sub.periodic = ps.periodic;
      for (int i = 0; i < ps.size(); ++i) {
        if (chi.color(i) != j) continue;
        sub.coords.insert(sub.coords.end(), ps.point(i), ps.point(i) + 2);
        sub.ids.push_back(uint32_t(i));
      }
      SimplicialMosaic mono = torus ? delaunay_periodic(sub) : delaunay(sub);
      CHECK(complexes_equal(restricted.base, mono));
    }
  }
}

TEST_CASE("restriction to the whole palette is the identity") {
  PointSet ps = random_points(10, 2, 2024, true);
  Coloring chi = random_coloring(ps, 1, 9);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  ChromaticMosaic whole = restrict_mosaic(cm, {0, 1});
  CHECK(complexes_equal(whole.base, cm.base));
  CHECK_THROWS_AS(restrict_mosaic(cm, {}), input_error);
  CHECK_THROWS_AS(restrict_mosaic(cm, {5}), input_error);
}

TEST_CASE("restriction equals the independent construction") {
  Rng rng(161803);
  for (int rep = 0; rep < 6; ++rep) {
    bool torus = rep % 2 == 0;
    PointSet ps = random_points(12, 2, rng.next_u64(), torus);
    Coloring chi = random_coloring(ps, 1, rng.next_u64());
    while (min_class_size(chi) < 4)
      chi = random_coloring(ps, 1, rng.next_u64());
    ChromaticMosaic cm = chromatic_delaunay(ps, chi);
    for (uint32_t mask = 1; mask < 4; ++mask) {
      std::vector<int> tau;
      for (int j = 0; j <= 1; ++j)
        if (mask & (1u << j)) tau.push_back(j);
      ChromaticMosaic restricted = restrict_mosaic(cm, tau);
      PointSet sub(2);
      sub.periodic = ps.periodic;
      Coloring sub_chi;
      sub_chi.s = int(tau.size()) - 1;
      for (int i = 0; i < ps.size(); ++i) {
        auto it = std::find(tau.begin(), tau.end(), chi.color(i));
        if (it == tau.end()) continue;
        sub.coords.insert(sub.coords.end(), ps.point(i), ps.point(i) + 2);
        sub.ids.push_back(uint32_t(i));
        sub_chi.chi.push_back(uint8_t(it - tau.begin()));
      }
      ChromaticMosaic indep = chromatic_delaunay(sub, sub_chi);
      CHECK(complexes_equal(restricted.base, indep.base));
    }
  }
}

TEST_CASE("lift check: single color is trivial") {
  PointSet ps = random_points(10, 2, 55, false);
  Coloring chi = fixed_coloring(0, std::vector<int>(10, 0));
  LiftCheckReport rep = lift_check(ps, chi);
  CHECK(rep.ok());
  CHECK(rep.checked > 0);
}

TEST_CASE("lift check: planar bi-colorings and d=1 tri-colorings") {
  Rng rng(2021);
  for (int rep = 0; rep < 8; ++rep) {
    PointSet ps = random_points(10 + int(rng.below(12)), 2, rng.next_u64(), rep % 2 == 0);
    Coloring chi = random_coloring(ps, 1, rng.next_u64());
    LiftCheckReport r = lift_check(ps, chi);
    CHECK(r.ok());
  }
  for (int rep = 0; rep < 6; ++rep) {
    PointSet ps = random_points(6 + int(rng.below(9)), 1, rng.next_u64(), rep % 2 == 0);
    Coloring chi = random_coloring(ps, 2, rng.next_u64());
    LiftCheckReport r = lift_check(ps, chi);
    CHECK(r.ok());
  }
}

TEST_CASE("chromatic torus mosaic validates and has zero Euler characteristic") {
  PointSet ps = random_points(30, 2, 999, true);
  Coloring chi = random_coloring(ps, 1, 3);
  ChromaticMosaic cm = chromatic_delaunay(ps, chi);
  validate_mosaic(cm.base);
  long long alt = 0;
  for (int p = 0; p <= cm.ambient_dim(); ++p)
    alt += (p % 2 == 0 ? 1 : -1) * faces(cm.base, p).size();
  CHECK(alt == 0);
}
