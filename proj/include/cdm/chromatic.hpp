#pragma once

#include <vector>

#include "cdm/constants.hpp"
#include "cdm/point_set.hpp"
#include "cdm/triangulation.hpp"

namespace cdm {

/// Vertices u_0, ..., u_s of an isometric copy of the standard s-simplex in
/// R^s: u_0 at the origin, pairwise distances exactly sqrt(2) * scale,
/// built by the deterministic recursive construction.
std::vector<std::vector<double>> simplex_vertices(int s, double scale = 1.0);

/// Color class j moves to the layer u_j + R^d: point a with chi(a) = j maps to
/// the concatenation (u_j | a) in R^(s+d). Identities carry over; the spatial
/// factor keeps its torus flags, the layer factor is never periodic.
PointSet embed(const PointSet& points, const Coloring& chi, double scale = 1.0);

/// Color multiplicity vector of a face.
struct ColorSignature {
  std::vector<int> counts;
  int total() const {
    int t = 0;
    for (int c : counts) t += c;
    return t;
  }
  int support() const {
    int t = 0;
    for (int c : counts) t += (c > 0);
    return t;
  }
  bool colored_in(const std::vector<int>& tau) const;
  bool colorful_in(const std::vector<int>& tau) const;
};

struct ChromaticMosaic {
  int s = 0;
  int d = 0;
  double scale = 1.0;
  SimplicialMosaic base;                 // ambient dimension s + d
  std::vector<uint8_t> color_by_id;      // identity -> color

  int ambient_dim() const { return s + d; }
  int color_of_replica(uint32_t v) const { return color_by_id[base.vorig[v]]; }
  ColorSignature signature(const uint32_t* reps, int count) const;
  /// Projection of a replica/center coordinate vector onto the spatial factor.
  void project_spatial(const double* amb, double* out) const {
    for (int c = 0; c < d; ++c) out[c] = amb[s + c];
  }
};

/// Del(chi): the Delaunay mosaic of the embedded set (periodic when the input
/// carries torus flags), annotated with colors.
ChromaticMosaic chromatic_delaunay(const PointSet& points, const Coloring& chi,
                                   double scale = 1.0, uint64_t seed = 1);

/// Subcomplex of tau-colored faces, re-embedded in R^(t+d) with the tau-local
/// simplex vertices. Combinatorially equal to chromatic_delaunay of the
/// restriction of chi (on original identities).
ChromaticMosaic restrict_mosaic(const ChromaticMosaic& cm, const std::vector<int>& tau);

/// Full census: signature of every face of every dimension.
CountTable census(const ChromaticMosaic& cm);

/// Face keys of all p-faces (helper for abstract-complex comparisons).
std::vector<std::vector<uint64_t>> all_face_keys(const SimplicialMosaic& m, int p);

/// Checks that every simplex of Del(A) lifts to a face of Del(chi); returns
/// the offending face keys (empty on success).
struct LiftCheckReport {
  std::vector<std::vector<uint64_t>> violations;
  long long checked = 0;
  bool ok() const { return violations.empty(); }
};
LiftCheckReport lift_check(const PointSet& points, const Coloring& chi,
                           double scale = 1.0, uint64_t seed = 1);

}  // namespace cdm
