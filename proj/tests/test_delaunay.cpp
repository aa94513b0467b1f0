#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cdm/errors.hpp"
#include "cdm/predicates.hpp"
#include "cdm/rng.hpp"
#include "cdm/sampling.hpp"
#include "cdm/triangulation.hpp"

using namespace cdm;

namespace {

PointSet make_points(int d, std::vector<std::vector<double>> pts) {
  PointSet ps(d);
  for (auto& p : pts) ps.add(p);
  return ps;
}

// sorted original-index tuples of all cells
std::set<std::vector<uint32_t>> cell_set(const SimplicialMosaic& m) {
  std::set<std::vector<uint32_t>> out;
  for (int c = 0; c < m.n_cells(); ++c) {
    std::vector<uint32_t> cell;
    for (int i = 0; i < m.cell_size(); ++i) cell.push_back(m.vorig[m.cell(c)[i]]);
    std::sort(cell.begin(), cell.end());
    out.insert(cell);
  }
  return out;
}

PointSet random_points(int n, int d, uint64_t seed, bool torus = false) {
  Rng rng(seed);
  PointSet ps(d);
  if (torus) ps.periodic.assign(size_t(d), 1);
  for (int i = 0; i < n * d; ++i) ps.coords.push_back(rng.uniform());
  if (torus) ps.quantize_periodic();
  return ps;
}

void check_empty_sphere(const SimplicialMosaic& m) {
  for (int c = 0; c < m.n_cells(); ++c) {
    const double* verts[kMaxDim + 1];
    uint32_t pid[kMaxDim + 1];
    for (int i = 0; i < m.cell_size(); ++i) {
      verts[i] = m.vertex(int(m.cell(c)[i]));
      pid[i] = m.vorig[m.cell(c)[i]];
    }
    Sign orient = orientation_perturbed(m.dim, verts, pid);
    for (int v = 0; v < m.n_verts(); ++v) {
      bool incident = false;
      for (int i = 0; i < m.cell_size(); ++i) incident |= (m.cell(c)[i] == uint32_t(v));
      if (incident) continue;
      Sign s = insphere_det_perturbed(m.dim, verts, pid, m.vertex(v), m.vorig[v]) * orient;
      CHECK(s == Sign::Negative);
    }
  }
}

}  // namespace

TEST_CASE("1D path") {
  PointSet ps = make_points(1, {{0}, {1}, {3}});
  SimplicialMosaic m = delaunay(ps);
  auto cells = cell_set(m);
  CHECK(cells == std::set<std::vector<uint32_t>>{{0, 1}, {1, 2}});
  CHECK(m.n_cells() == 2);
  CHECK(validate_mosaic(m) == 2);  // the two endpoints
}

TEST_CASE("unit square picks the pinned diagonal") {
  PointSet ps = make_points(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  SimplicialMosaic m = delaunay(ps);
  auto cells = cell_set(m);
  // the schedule selects the 0-2 diagonal (pinned in the predicate tests)
  CHECK(cells == std::set<std::vector<uint32_t>>{{0, 1, 2}, {0, 2, 3}});
  auto bf = delaunay_bruteforce(ps);
  CHECK(std::set<std::vector<uint32_t>>(bf.begin(), bf.end()) == cells);
}

TEST_CASE("unit square plus center") {
  PointSet ps = make_points(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
  SimplicialMosaic m = delaunay(ps);
  CHECK(m.n_cells() == 4);
  auto cells = cell_set(m);
  for (const auto& cell : cells)
    CHECK(std::find(cell.begin(), cell.end(), 4u) != cell.end());
  auto bf = delaunay_bruteforce(ps);
  CHECK(std::set<std::vector<uint32_t>>(bf.begin(), bf.end()) == cells);
  CHECK(faces(m, 0).size() == 5);
  CHECK(faces(m, 0).size() - faces(m, 1).size() + faces(m, 2).size() == 1);
}

TEST_CASE("two-triangle square: face counts") {
  PointSet ps = make_points(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  SimplicialMosaic m = delaunay(ps);
  CHECK(faces(m, 1).size() == 5);  // 4 sides + 1 diagonal
  CHECK(faces(m, 2).size() == m.n_cells());
}

TEST_CASE("circumcenters") {
  PointSet tri = make_points(2, {{0, 0}, {1, 0}, {0, 1}});
  SimplicialMosaic m = delaunay(tri);
  auto c = circumcenter(m, 0);
  CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-12));

  PointSet seg = make_points(1, {{0}, {2}});
  auto c1 = circumcenter(delaunay(seg), 0);
  CHECK(c1[0] == doctest::Approx(1.0).epsilon(1e-12));

  PointSet tet = make_points(3, {{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}});
  auto c3 = circumcenter(delaunay(tet), 0);
  for (int i = 0; i < 3; ++i) CHECK(c3[size_t(i)] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("equidistance residual of circumcenters") {
  PointSet ps = random_points(40, 3, 555);
  SimplicialMosaic m = delaunay(ps);
  for (int c = 0; c < m.n_cells(); ++c) {
    std::vector<double> cc = circumcenter(m, c);
    double r0 = 0;
    for (int i = 0; i <= 3; ++i) {
      double r = 0;
      for (int j = 0; j < 3; ++j) {
        double e = cc[size_t(j)] - m.vertex(int(m.cell(c)[i]))[j];
        r += e * e;
      }
      r = std::sqrt(r);
      if (i == 0)
        r0 = r;
      else
        CHECK(std::fabs(r - r0) / r0 < 1e-8);
    }
  }
}

TEST_CASE("oracle equivalence on random instances") {
  Rng rng(2718);
  for (int d = 1; d <= 4; ++d) {
    for (int rep = 0; rep < 3; ++rep) {
      int n = d + 2 + int(rng.below(uint64_t(d <= 2 ? 9 : 5)));
      PointSet ps = random_points(n, d, rng.next_u64());
      SimplicialMosaic m = delaunay(ps);
      auto bf = delaunay_bruteforce(ps);
      CHECK(cell_set(m) == std::set<std::vector<uint32_t>>(bf.begin(), bf.end()));
      validate_mosaic(m);
    }
  }
}

TEST_CASE("empty sphere invariant, bounded") {
  PointSet ps = random_points(30, 2, 90210);
  SimplicialMosaic m = delaunay(ps);
  check_empty_sphere(m);
}

TEST_CASE("size error") {
  PointSet ps = make_points(2, {{0, 0}, {1, 1}});
  CHECK_THROWS_AS(delaunay(ps), size_error);
}

TEST_CASE("degenerate inputs still triangulate") {
  // all points collinear in 2D: the perturbation makes this a valid complex
  PointSet ps = make_points(2, {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  SimplicialMosaic m = delaunay(ps);
  CHECK(m.n_cells() >= 1);
  validate_mosaic(m);
  // duplicate coordinates with distinct indices
  PointSet dup = make_points(2, {{0, 0}, {1, 0}, {0, 1}, {1, 0}});
  SimplicialMosaic m2 = delaunay(dup);
  CHECK(m2.n_cells() >= 2);
  validate_mosaic(m2);
}

TEST_CASE("periodic: single point on the circle") {
  PointSet ps(1);
  ps.periodic = {1};
  ps.add({0.5});
  SimplicialMosaic m = delaunay_periodic(ps);
  CHECK(m.n_cells() == 1);
  CHECK(m.n_verts() == 2);  // the point and its own translate
  CHECK(m.vorig[0] == 0);
  CHECK(m.vorig[1] == 0);
  CHECK(validate_mosaic(m) == 0);
  CHECK(faces(m, 0).size() == 1);
  CHECK(faces(m, 1).size() == 1);
}

TEST_CASE("periodic: 2x2 perturbed grid on the torus") {
  PointSet ps(2);
  ps.periodic = {1, 1};
  Rng rng(12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      ps.add({0.25 + 0.5 * i + 0.04 * (rng.uniform() - 0.5),
              0.25 + 0.5 * j + 0.04 * (rng.uniform() - 0.5)});
  ps.quantize_periodic();
  SimplicialMosaic m = delaunay_periodic(ps);
  CHECK(m.n_cells() == 8);
  CHECK(validate_mosaic(m) == 0);
  long long v = faces(m, 0).size(), e = faces(m, 1).size(), f = faces(m, 2).size();
  CHECK(v == 4);
  CHECK(e == 12);
  CHECK(f == 8);
  CHECK(v - e + f == 0);
  check_empty_sphere(m);

  // brute-force periodic empty-circle test on the replicated set
  PointSet rep(2);
  for (int i = 0; i < ps.size(); ++i)
    for (int ox = -1; ox <= 1; ++ox)
      for (int oy = -1; oy <= 1; ++oy) {
        rep.add({ps.point(i)[0] + ox, ps.point(i)[1] + oy});
        rep.ids.push_back(uint32_t(i));
      }
  for (int c = 0; c < m.n_cells(); ++c) {
    const double* verts[3];
    uint32_t pid[3];
    for (int i = 0; i < 3; ++i) {
      verts[i] = m.vertex(int(m.cell(c)[i]));
      pid[i] = m.vorig[m.cell(c)[i]];
    }
    Sign orient = orientation_perturbed(2, verts, pid);
    for (int q = 0; q < rep.size(); ++q) {
      bool same = false;
      for (int i = 0; i < 3; ++i)
        same |= (verts[i][0] == rep.point(q)[0] && verts[i][1] == rep.point(q)[1]);
      if (same) continue;
      CHECK(insphere_det_perturbed(2, verts, pid, rep.point(q), rep.id_of(q)) * orient ==
            Sign::Negative);
    }
  }
}

TEST_CASE("periodic: Poisson sample Euler characteristic") {
  PointSet ps = random_points(40, 2, 777, true);
  SimplicialMosaic m = delaunay_periodic(ps);
  CHECK(validate_mosaic(m) == 0);
  long long v = faces(m, 0).size(), e = faces(m, 1).size(), f = faces(m, 2).size();
  CHECK(v == 40);
  CHECK(v - e + f == 0);
  check_empty_sphere(m);
}

TEST_CASE("periodic 3D: Euler characteristic") {
  PointSet ps = random_points(25, 3, 4242, true);
  SimplicialMosaic m = delaunay_periodic(ps);
  CHECK(validate_mosaic(m) == 0);
  long long v = faces(m, 0).size(), e = faces(m, 1).size(), f = faces(m, 2).size(),
            t = faces(m, 3).size();
  CHECK(v - e + f - t == 0);
}

TEST_CASE("periodic slab: torus rank < ambient dimension") {
  // two layers over a 2-torus: chi(T^2 x interval) = 0
  Rng rng(31);
  PointSet ps(3);
  ps.periodic = {0, 1, 1};
  for (int i = 0; i < 24; ++i)
    ps.add({(i % 2) * 1.2, rng.uniform(), rng.uniform()});
  ps.quantize_periodic();
  SimplicialMosaic m = delaunay_periodic(ps);
  validate_mosaic(m);
  long long v = faces(m, 0).size(), e = faces(m, 1).size(), f = faces(m, 2).size(),
            t = faces(m, 3).size();
  CHECK(v == 24);
  CHECK(v - e + f - t == 0);
}

TEST_CASE("periodic small instance sanity") {
  PointSet ps = random_points(6, 2, 99, true);
  SimplicialMosaic m = delaunay_periodic(ps);
  check_empty_sphere(m);
  CHECK(faces(m, 0).size() == 6);
  long long v = faces(m, 0).size(), e = faces(m, 1).size(), f = faces(m, 2).size();
  CHECK(v - e + f == 0);
}

TEST_CASE("moment curve is collinear in 1D") {
  PointSet ps = moment_curve(6, 1);
  SimplicialMosaic m = delaunay(ps);
  CHECK(m.n_cells() == 5);  // a path
}
