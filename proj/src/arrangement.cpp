#include <algorithm>
#include <cmath>
#include <map>

#include "cdm/errors.hpp"
#include "cdm/overlay.hpp"
#include "cdm/predicates.hpp"

namespace cdm {

namespace {

Sign orient2(const double* a, const double* b, const double* c) {
  const double* pts[3] = {a, b, c};
  return orientation(2, pts);
}

struct GeoSeg {
  double a[2];
  double b[2];  // for rays: a clipped far endpoint
  uint32_t va = kBoundary, vb = kBoundary;  // skeleton vertex ids (vb none for rays)
  int color = -1;
  uint32_t seg_id = 0;
  int8_t shift[2] = {0, 0};  // copy shift applied (torus enumeration)
  double lo[2], hi[2];
  void finish() {
    for (int c = 0; c < 2; ++c) {
      lo[c] = std::min(a[c], b[c]);
      hi[c] = std::max(a[c], b[c]);
    }
  }
};

// strict interior crossing of two segments, exact signs
bool seg_cross(const GeoSeg& s, const GeoSeg& t, double* pos, double* tpar_s,
               double* tpar_t) {
  for (int c = 0; c < 2; ++c)
    if (s.hi[c] < t.lo[c] || t.hi[c] < s.lo[c]) return false;
  Sign s1 = orient2(s.a, s.b, t.a);
  Sign s2 = orient2(s.a, s.b, t.b);
  if (to_int(s1) * to_int(s2) >= 0) return false;
  Sign s3 = orient2(t.a, t.b, s.a);
  Sign s4 = orient2(t.a, t.b, s.b);
  if (to_int(s3) * to_int(s4) >= 0) return false;
  double r[2] = {s.b[0] - s.a[0], s.b[1] - s.a[1]};
  double q[2] = {t.b[0] - t.a[0], t.b[1] - t.a[1]};
  double denom = r[0] * q[1] - r[1] * q[0];
  double w[2] = {t.a[0] - s.a[0], t.a[1] - s.a[1]};
  double u = (w[0] * q[1] - w[1] * q[0]) / denom;
  double v = (w[0] * r[1] - w[1] * r[0]) / denom;
  pos[0] = s.a[0] + u * r[0];
  pos[1] = s.a[1] + u * r[1];
  *tpar_s = u;
  *tpar_t = v;
  return true;
}

}  // namespace

VoronoiSkeleton voronoi_skeleton(const SimplicialMosaic& mono) {
  const int d = mono.dim;
  if (d != 2) throw input_error("voronoi_skeleton: d = 2 only");
  VoronoiSkeleton sk;
  sk.d = d;
  sk.periodic = std::find(mono.periodic.begin(), mono.periodic.end(), 1) != mono.periodic.end();
  sk.vpos = mono.centers;
  const int cs = mono.cell_size();
  for (int c = 0; c < mono.n_cells(); ++c) {
    for (int k = 0; k < cs; ++k) {
      uint32_t nb = mono.nbr[size_t(c) * cs + k];
      if (nb != kBoundary && nb < uint32_t(c)) continue;
      if (nb == uint32_t(c)) {
        std::vector<uint32_t> f;
        for (int i = 0; i < cs; ++i)
          if (i != k) f.push_back(mono.cell(c)[i]);
        auto key = mono.face_key(f.data(), cs - 1);
        bool earlier = false;
        for (int k2 = 0; k2 < k && !earlier; ++k2) {
          if (mono.nbr[size_t(c) * cs + k2] != uint32_t(c)) continue;
          std::vector<uint32_t> f2;
          for (int i = 0; i < cs; ++i)
            if (i != k2) f2.push_back(mono.cell(c)[i]);
          earlier = (mono.face_key(f2.data(), cs - 1) == key);
        }
        if (earlier) continue;
      }
      VoronoiSkeleton::Seg seg;
      seg.a = uint32_t(c);
      if (nb == kBoundary) {
        seg.ray = true;
        // outward normal of the hull facet, away from the opposite vertex
        const double* f0 = mono.vertex(int(mono.cell(c)[(k + 1) % cs]));
        const double* f1 = mono.vertex(int(mono.cell(c)[(k + 2) % cs]));
        const double* opp = mono.vertex(int(mono.cell(c)[k]));
        double nx = -(f1[1] - f0[1]), ny = f1[0] - f0[0];
        if (nx * (opp[0] - f0[0]) + ny * (opp[1] - f0[1]) > 0) {
          nx = -nx;
          ny = -ny;
        }
        double len = std::hypot(nx, ny);
        seg.dir[0] = nx / len;
        seg.dir[1] = ny / len;
      } else {
        seg.b = nb;
        for (int c2 = 0; c2 < 2; ++c2)
          seg.shift[c2] = mono.nshift[(size_t(c) * cs + size_t(k)) * size_t(d) + size_t(c2)];
      }
      sk.segs.push_back(seg);
    }
  }
  return sk;
}

ArrangementResult arrangement_overlay_2d(const std::vector<VoronoiSkeleton>& tess,
                                         bool periodic, bool trace_faces) {
  for (const auto& t : tess) {
    if (t.d != 2) throw input_error("arrangement: d = 2 only");
    if (t.periodic != periodic) throw input_error("arrangement: periodic flag mismatch");
  }
  const int ncolors = int(tess.size());

  // materialize geometric segments (canonical copies); clip rays far out
  double span = 1.0;
  for (const auto& t : tess)
    for (int v = 0; v < t.n_vertices(); ++v)
      for (int c = 0; c < 2; ++c) span = std::max(span, std::fabs(t.vpos[size_t(v) * 2 + c]));
  const double far = 64.0 * (span + 1.0);

  auto segs = std::vector<std::vector<GeoSeg>>(size_t(ncolors));
  for (int col = 0; col < ncolors; ++col) {
    const auto& t = tess[size_t(col)];
    for (size_t i = 0; i < t.segs.size(); ++i) {
      const auto& s = t.segs[i];
      GeoSeg g;
      g.color = col;
      g.seg_id = uint32_t(i);
      g.va = s.a;
      g.a[0] = t.vpos[size_t(s.a) * 2];
      g.a[1] = t.vpos[size_t(s.a) * 2 + 1];
      if (s.ray) {
        g.b[0] = g.a[0] + far * s.dir[0];
        g.b[1] = g.a[1] + far * s.dir[1];
      } else {
        g.vb = s.b;
        g.b[0] = t.vpos[size_t(s.b) * 2] + s.shift[0];
        g.b[1] = t.vpos[size_t(s.b) * 2 + 1] + s.shift[1];
      }
      g.finish();
      segs[size_t(col)].push_back(g);
    }
  }

  ArrangementResult out;
  OverlayGraph& g = out.graph;
  g.d = 2;
  g.periodic = periodic;
  g.geometric = true;

  // mono vertices
  auto mono_vid = std::vector<std::vector<uint32_t>>(size_t(ncolors));
  for (int col = 0; col < ncolors; ++col) {
    const auto& t = tess[size_t(col)];
    mono_vid[size_t(col)].resize(size_t(t.n_vertices()));
    for (int v = 0; v < t.n_vertices(); ++v) {
      mono_vid[size_t(col)][size_t(v)] = uint32_t(g.vertices.size());
      OverlayVertex ov;
      ov.pos[0] = t.vpos[size_t(v) * 2];
      ov.pos[1] = t.vpos[size_t(v) * 2 + 1];
      ov.kind = OverlayVertexKind::Mono;
      ov.mono_color = col;
      g.vertices.push_back(ov);
    }
  }
  g.mono_vertices = (long long)g.vertices.size();

  // crossings: canonical copy of color i against shifted copies of color j
  struct Crossing {
    uint32_t vertex;
    double t_on[2];  // parameter on each participating segment copy
  };
  // per (color, seg): list of (t, vertex id) for splitting
  auto cuts = std::vector<std::vector<std::vector<std::pair<double, uint32_t>>>>(size_t(ncolors));
  for (int col = 0; col < ncolors; ++col)
    cuts[size_t(col)].resize(segs[size_t(col)].size());

  int shift_range = 0;
  if (periodic) {
    // cover every copy of b that can reach the canonical copy of a
    double lmax = 0;
    for (const auto& per_color : segs)
      for (const GeoSeg& s : per_color)
        lmax = std::max(lmax, std::max(s.hi[0] - s.lo[0], s.hi[1] - s.lo[1]));
    shift_range = std::min(4, 1 + int(std::ceil(2.0 * lmax)));
  }
  for (int ci = 0; ci < ncolors; ++ci) {
    for (int cj = ci + 1; cj < ncolors; ++cj) {
      long long count = 0;
      for (const GeoSeg& a : segs[size_t(ci)]) {
        for (const GeoSeg& b0 : segs[size_t(cj)]) {
          for (int sx = -shift_range; sx <= shift_range; ++sx) {
            for (int sy = -shift_range; sy <= shift_range; ++sy) {
              GeoSeg b = b0;
              b.a[0] += sx;
              b.b[0] += sx;
              b.a[1] += sy;
              b.b[1] += sy;
              b.finish();
              double pos[2], ta, tb;
              if (!seg_cross(a, b, pos, &ta, &tb)) continue;
              ++count;
              uint32_t vid = uint32_t(g.vertices.size());
              OverlayVertex ov;
              ov.pos[0] = pos[0];
              ov.pos[1] = pos[1];
              ov.kind = OverlayVertexKind::Crossing;
              g.vertices.push_back(ov);
              cuts[size_t(ci)][a.seg_id].emplace_back(ta, vid);
              // register on b in b's own frame: same parameter, position shifted
              cuts[size_t(cj)][b.seg_id].emplace_back(tb, vid);
            }
          }
        }
      }
      out.crossings_by_pair[{ci, cj}] = count;
      g.crossings += count;
    }
  }
  g.n_vertices = (long long)g.vertices.size();

  // edges: every segment split by its crossings
  long long base_edges = 0, rays = 0;
  for (int col = 0; col < ncolors; ++col) {
    base_edges += (long long)segs[size_t(col)].size();
    for (const auto& t : tess[size_t(col)].segs) rays += t.ray ? 1 : 0;
  }
  g.rays = rays;
  g.n_edges = base_edges + 2 * g.crossings;
  if (periodic) {
    g.n_faces = g.n_edges - g.n_vertices;  // chi(T^2) = 0
  } else {
    // regions of the subdivision with all rays meeting at infinity
    g.n_faces = g.n_edges - g.n_vertices + 1;
  }

  if (trace_faces && periodic) {
    // explicit face tracing: split every segment, build the rotation system
    struct Half {
      uint32_t from, to;
      double angle;
      uint32_t twin;
      uint32_t next = 0;
      bool used = false;
    };
    std::vector<Half> halves;
    std::vector<std::vector<uint32_t>> out_at(g.vertices.size());
    for (int col = 0; col < ncolors; ++col) {
      for (size_t si = 0; si < segs[size_t(col)].size(); ++si) {
        const GeoSeg& s = segs[size_t(col)][si];
        auto& cut = cuts[size_t(col)][si];
        std::sort(cut.begin(), cut.end());
        std::vector<uint32_t> chain{mono_vid[size_t(col)][s.va]};
        for (auto& [t, vid] : cut) chain.push_back(vid);
        chain.push_back(mono_vid[size_t(col)][s.vb]);
        double dir[2] = {s.b[0] - s.a[0], s.b[1] - s.a[1]};
        double fwd = std::atan2(dir[1], dir[0]);
        double bwd = std::atan2(-dir[1], -dir[0]);
        for (size_t e = 0; e + 1 < chain.size(); ++e) {
          uint32_t h1 = uint32_t(halves.size());
          halves.push_back({chain[e], chain[e + 1], fwd, h1 + 1});
          halves.push_back({chain[e + 1], chain[e], bwd, h1});
          out_at[chain[e]].push_back(h1);
          out_at[chain[e + 1]].push_back(h1 + 1);
        }
      }
    }
    for (auto& lst : out_at)
      std::sort(lst.begin(), lst.end(), [&](uint32_t x, uint32_t y) {
        return halves[x].angle < halves[y].angle;
      });
    // next(h): clockwise successor of twin(h) around the head vertex
    for (uint32_t h = 0; h < halves.size(); ++h) {
      uint32_t tw = halves[h].twin;
      const auto& lst = out_at[halves[h].to];
      size_t idx = size_t(std::find(lst.begin(), lst.end(), tw) - lst.begin());
      halves[h].next = lst[(idx + lst.size() - 1) % lst.size()];
    }
    long long fcount = 0;
    for (uint32_t h = 0; h < halves.size(); ++h) {
      if (halves[h].used) continue;
      ++fcount;
      uint32_t cur = h;
      while (!halves[cur].used) {
        halves[cur].used = true;
        cur = halves[cur].next;
      }
    }
    out.traced_faces = fcount;
  }
  return out;
}

OverlayGraph overlay_oracle_1d(const std::vector<SimplicialMosaic>& monos) {
  OverlayGraph g;
  g.d = 1;
  g.geometric = true;
  bool periodic = false;
  for (const auto& m : monos) {
    if (m.dim != 1) throw input_error("overlay_oracle_1d: d = 1 only");
    periodic |= std::find(m.periodic.begin(), m.periodic.end(), 1) != m.periodic.end();
  }
  g.periodic = periodic;
  for (size_t col = 0; col < monos.size(); ++col) {
    for (int c = 0; c < monos[col].n_cells(); ++c) {
      OverlayVertex v;
      double x = monos[col].centers[size_t(c)];
      if (periodic) x -= std::floor(x);
      v.pos[0] = x;
      v.kind = OverlayVertexKind::Mono;
      v.mono_color = int(col);
      g.vertices.push_back(v);
    }
  }
  g.mono_vertices = (long long)g.vertices.size();
  g.n_vertices = g.mono_vertices;
  g.n_edges = periodic ? g.n_vertices : g.n_vertices + 1;
  return g;
}

}  // namespace cdm
