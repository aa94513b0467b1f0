#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cdm/chromatic.hpp"

namespace cdm {

enum class OverlayVertexKind { Mono, Crossing };

struct OverlayVertex {
  double pos[2] = {0, 0};  // spatial position (d <= 2 geometry)
  OverlayVertexKind kind = OverlayVertexKind::Crossing;
  int mono_color = -1;
  std::vector<int> signature;
};

struct OverlayEdge {
  uint32_t a = 0;
  uint32_t b = 0;          // kBoundary when the dual edge is a ray (bounded case)
  int color = -1;          // mono tessellation the edge runs along (d = 2)
  int8_t shift[2] = {0, 0};  // torus shift of b's stored position relative to a
};

/// The overlay of mono-chromatic Voronoi tessellations, as counts plus (for
/// d <= 2) an embedded graph.
struct OverlayGraph {
  int d = 0;
  bool periodic = false;
  bool geometric = false;  // vertices/edges populated (d <= 2 only)
  long long n_vertices = 0;
  long long n_edges = 0;    // torus: quotient 1-cells; bounded: segments + rays
  long long n_faces = 0;    // d = 2: 2-cells (torus exact; bounded: Euler count)
  long long mono_vertices = 0;
  long long crossings = 0;
  long long rays = 0;       // bounded case only
  std::vector<OverlayVertex> vertices;
  std::vector<OverlayEdge> edges;
};

/// Overlay of the tessellations of the colors in tau, computed by projecting
/// the tau-membrane: vertices are circumcenters of tau-colorful top cells of
/// the restricted mosaic, edges are dual to colorful facets, faces to
/// colorful co-dimension-2 faces. Counts in any d; geometry for d <= 2.
OverlayGraph membrane_overlay(const ChromaticMosaic& cm, const std::vector<int>& tau);

/// 1-skeleton of one mono-chromatic Voronoi tessellation (dual edges of a
/// Delaunay mosaic), the input format of the arrangement oracle.
struct VoronoiSkeleton {
  int d = 0;
  bool periodic = false;
  std::vector<double> vpos;  // nv * d circumcenters
  struct Seg {
    uint32_t a = 0;
    uint32_t b = 0;
    int8_t shift[2] = {0, 0};  // torus shift of b relative to a
    bool ray = false;          // b unused; extends from a in direction dir
    double dir[2] = {0, 0};
  };
  std::vector<Seg> segs;
  int n_vertices() const { return d == 0 ? 0 : int(vpos.size() / size_t(d)); }
};

VoronoiSkeleton voronoi_skeleton(const SimplicialMosaic& mono);

/// Independent oracle: the planar subdivision induced by drawing the given
/// 1-skeletons on top of each other. Exact segment predicates; crossings
/// reported per color pair. d = 2 only.
struct ArrangementResult {
  OverlayGraph graph;
  std::map<std::pair<int, int>, long long> crossings_by_pair;
  long long traced_faces = -1;  // cycle-traced face count (torus cross-check)
};
ArrangementResult arrangement_overlay_2d(const std::vector<VoronoiSkeleton>& tess,
                                         bool periodic, bool trace_faces = false);

/// 1-dimensional overlay oracle: merge of the mono breakpoint sets on the
/// circle (periodic) or line.
OverlayGraph overlay_oracle_1d(const std::vector<SimplicialMosaic>& monos);

/// Crossing counts straight from the census: total surplus n_0 - m_0 with the
/// per-pair signature breakdown (and the triple-crossing count when s >= 2,
/// d = 3).
struct CrossingCensus {
  long long total = 0;
  std::map<std::pair<int, int>, long long> pair_counts;
  long long triple = 0;
  DensityReport density;
};
CrossingCensus crossing_census(const ChromaticMosaic& cm, double rho);

}  // namespace cdm
