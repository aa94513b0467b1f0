#include "cdm/overlay.hpp"

#include <algorithm>
#include <cmath>

#include "cdm/errors.hpp"

namespace cdm {

namespace {

// A full-support top cell is the image of a mono Voronoi vertex exactly when
// one color contributes a full-dimensional mono simplex (count d+1) and every
// other color one extension vertex.
int mono_color_of(const ColorSignature& sig, int d) {
  int heavy = -1;
  for (size_t j = 0; j < sig.counts.size(); ++j) {
    if (sig.counts[j] == d + 1 && heavy < 0)
      heavy = int(j);
    else if (sig.counts[j] != 1)
      return -1;
  }
  return heavy;
}

}  // namespace

OverlayGraph membrane_overlay(const ChromaticMosaic& cm_full, const std::vector<int>& tau_in) {
  std::vector<int> tau = tau_in;
  std::sort(tau.begin(), tau.end());
  tau.erase(std::unique(tau.begin(), tau.end()), tau.end());
  if (tau.empty()) throw input_error("membrane_overlay: tau must be non-empty");
  std::vector<int> full(size_t(cm_full.s) + 1);
  for (int j = 0; j <= cm_full.s; ++j) full[size_t(j)] = j;
  const bool is_full = tau == full;
  const ChromaticMosaic cm_restricted =
      is_full ? ChromaticMosaic{} : restrict_mosaic(cm_full, tau);
  const ChromaticMosaic& cm = is_full ? cm_full : cm_restricted;

  const int s = cm.s, d = cm.d;
  const SimplicialMosaic& m = cm.base;
  const int cs = m.cell_size();

  OverlayGraph g;
  g.d = d;
  g.periodic = m.periodic.end() != std::find(m.periodic.begin(), m.periodic.end(), 1);
  g.geometric = d <= 2;

  // vertices: colorful top cells
  std::vector<int32_t> vertex_of_cell(size_t(m.n_cells()), -1);
  for (int c = 0; c < m.n_cells(); ++c) {
    ColorSignature sig = cm.signature(m.cell(c), cs);
    if (sig.support() != s + 1) continue;
    vertex_of_cell[size_t(c)] = int32_t(g.vertices.size());
    OverlayVertex v;
    int heavy = mono_color_of(sig, d);
    v.kind = heavy >= 0 ? OverlayVertexKind::Mono : OverlayVertexKind::Crossing;
    v.mono_color = heavy;
    v.signature = sig.counts;
    if (g.geometric) {
      double amb[kMaxDim];
      for (int c2 = 0; c2 < m.dim; ++c2) amb[c2] = m.centers[size_t(c) * m.dim + c2];
      double sp[kMaxDim];
      cm.project_spatial(amb, sp);
      for (int c2 = 0; c2 < d && c2 < 2; ++c2) v.pos[c2] = sp[c2];
    }
    g.vertices.push_back(std::move(v));
    if (g.vertices.back().kind == OverlayVertexKind::Mono)
      ++g.mono_vertices;
  }
  g.n_vertices = (long long)g.vertices.size();
  g.crossings = g.n_vertices - g.mono_vertices;

  // edges: colorful facets (each once; boundary facets become rays)
  for (int c = 0; c < m.n_cells(); ++c) {
    if (vertex_of_cell[size_t(c)] < 0) continue;
    for (int k = 0; k < cs; ++k) {
      uint32_t nb = m.nbr[size_t(c) * cs + k];
      // facet signature: drop the slot-k vertex
      ColorSignature fsig = cm.signature(m.cell(c), cs);
      --fsig.counts[size_t(cm.color_of_replica(m.cell(c)[k]))];
      if (fsig.support() != s + 1) continue;
      if (nb != kBoundary && (nb < uint32_t(c))) continue;  // count each interior facet once
      if (nb != kBoundary && nb == uint32_t(c)) {
        // self-adjacent quotient facet: keep the first slot carrying this key
        std::vector<uint32_t> f;
        for (int i = 0; i < cs; ++i)
          if (i != k) f.push_back(m.cell(c)[i]);
        auto key = m.face_key(f.data(), cs - 1);
        bool earlier = false;
        for (int k2 = 0; k2 < k && !earlier; ++k2) {
          if (m.nbr[size_t(c) * cs + k2] != uint32_t(c)) continue;
          std::vector<uint32_t> f2;
          for (int i = 0; i < cs; ++i)
            if (i != k2) f2.push_back(m.cell(c)[i]);
          earlier = (m.face_key(f2.data(), cs - 1) == key);
        }
        if (earlier) continue;
      }
      OverlayEdge e;
      e.a = uint32_t(vertex_of_cell[size_t(c)]);
      int heavy = -1;
      for (size_t j = 0; j < fsig.counts.size(); ++j)
        if (fsig.counts[j] >= 2) heavy = int(j);
      e.color = heavy;
      if (nb == kBoundary) {
        e.b = kBoundary;
        ++g.rays;
      } else {
        e.b = uint32_t(vertex_of_cell[size_t(nb)]);
        // spatial part of the neighbor shift
        for (int c2 = 0; c2 < d && c2 < 2; ++c2)
          e.shift[c2] = m.nshift[(size_t(c) * cs + size_t(k)) * size_t(m.dim) + size_t(s + c2)];
      }
      g.edges.push_back(e);
      ++g.n_edges;
    }
  }

  // faces: colorful (s+d-2)-faces (meaningful for d >= 2)
  if (d >= 2) {
    FaceList fl = faces(m, s + d - 2);
    for (int f = 0; f < fl.size(); ++f) {
      ColorSignature sig = cm.signature(fl.face(f), s + d - 1);
      if (sig.support() == s + 1) ++g.n_faces;
    }
  }
  return g;
}

CrossingCensus crossing_census(const ChromaticMosaic& cm, double rho) {
  CrossingCensus out;
  CountTable table = census(cm);
  out.density = mp_np(table, rho);
  out.total = out.density.surplus;
  const int d = cm.d;
  for (auto& [sig, cnt] : table.entries) {
    int tot = 0, support = 0;
    for (int c : sig) {
      tot += c;
      support += (c > 0);
    }
    if (tot != cm.s + d + 1 || support != cm.s + 1) continue;
    std::vector<int> heavy;
    for (size_t j = 0; j < sig.size(); ++j)
      if (sig[j] >= 2) heavy.push_back(int(j));
    if (heavy.size() == 2)
      out.pair_counts[{heavy[0], heavy[1]}] += cnt;
    else if (heavy.size() >= 3)
      out.triple += cnt;
  }
  return out;
}

}  // namespace cdm
