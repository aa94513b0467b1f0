#include "cdm/chromatic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cdm/errors.hpp"

namespace cdm {

std::vector<std::vector<double>> simplex_vertices(int s, double scale) {
  if (s < 0) throw input_error("simplex_vertices: s must be >= 0");
  std::vector<std::vector<double>> u(1, std::vector<double>{});
  for (int t = 1; t <= s; ++t) {
    // embed the (t-1)-simplex with a trailing zero, apex above its centroid
    std::vector<std::vector<double>> next;
    for (auto& v : u) {
      std::vector<double> w = v;
      w.push_back(0.0);
      next.push_back(std::move(w));
    }
    std::vector<double> apex(size_t(t), 0.0);
    for (int c = 0; c < t - 1; ++c) {
      double g = 0;
      for (const auto& v : u) g += v[size_t(c)];
      apex[size_t(c)] = g / double(u.size());
    }
    double r2 = 0;
    for (int c = 0; c < t - 1; ++c) {
      double e = apex[size_t(c)] - u[0][size_t(c)];
      r2 += e * e;
    }
    apex[size_t(t) - 1] = std::sqrt(2.0 - r2);
    next.push_back(std::move(apex));
    u = std::move(next);
  }
  if (scale != 1.0)
    for (auto& v : u)
      for (double& c : v) c *= scale;
  return u;
}

PointSet embed(const PointSet& points, const Coloring& chi, double scale) {
  if (int(chi.chi.size()) != points.size())
    throw input_error("embed: coloring does not cover the point set");
  const int s = chi.s, d = points.dim;
  auto u = simplex_vertices(s, scale);
  PointSet out(s + d);
  out.unperturbed_prefix = s;
  out.periodic.assign(size_t(s + d), 0);
  for (int c = 0; c < d; ++c)
    out.periodic[size_t(s + c)] = points.periodic.empty() ? 0 : points.periodic[size_t(c)];
  out.ids.resize(size_t(points.size()));
  // outward bulge direction per layer: away from the layer barycenter
  std::vector<double> ubar(size_t(std::max(s, 1)), 0.0);
  for (int j = 0; j <= s; ++j)
    for (int c = 0; c < s; ++c) ubar[size_t(c)] += u[size_t(j)][size_t(c)] / double(s + 1);
  for (int i = 0; i < points.size(); ++i) {
    out.ids[size_t(i)] = points.id_of(i);
    const auto& uj = u[size_t(chi.color(i))];
    for (int c = 0; c < s; ++c) out.coords.push_back(uj[size_t(c)]);
    for (int c = 0; c < d; ++c) out.coords.push_back(points.point(i)[c]);
    if (s > 0) {
      for (int c = 0; c < s; ++c) out.bulge.push_back(uj[size_t(c)] - ubar[size_t(c)]);
      for (int c = 0; c < d; ++c) out.bulge.push_back(0.0);
    }
  }
  return out;
}

bool ColorSignature::colored_in(const std::vector<int>& tau) const {
  std::vector<char> in(counts.size(), 0);
  for (int j : tau) in[size_t(j)] = 1;
  for (size_t j = 0; j < counts.size(); ++j)
    if (counts[j] > 0 && !in[j]) return false;
  return true;
}

bool ColorSignature::colorful_in(const std::vector<int>& tau) const {
  if (!colored_in(tau)) return false;
  for (int j : tau)
    if (counts[size_t(j)] == 0) return false;
  return true;
}

ColorSignature ChromaticMosaic::signature(const uint32_t* reps, int count) const {
  ColorSignature sig;
  sig.counts.assign(size_t(s) + 1, 0);
  for (int i = 0; i < count; ++i) ++sig.counts[size_t(color_of_replica(reps[i]))];
  return sig;
}

ChromaticMosaic chromatic_delaunay(const PointSet& points, const Coloring& chi,
                                   double scale, uint64_t seed) {
  PointSet emb = embed(points, chi, scale);
  ChromaticMosaic cm;
  cm.s = chi.s;
  cm.d = points.dim;
  cm.scale = scale;
  if (emb.any_periodic())
    cm.base = delaunay_periodic(emb, seed);
  else if (emb.size() <= emb.dim)
    cm.base = simplex_mosaic(emb);  // fewer points than ambient dim + 1
  else
    cm.base = delaunay(emb, seed);
  uint32_t max_id = 0;
  for (int i = 0; i < points.size(); ++i) max_id = std::max(max_id, points.id_of(i));
  cm.color_by_id.assign(size_t(max_id) + 1, 0);
  for (int i = 0; i < points.size(); ++i)
    cm.color_by_id[points.id_of(i)] = uint8_t(chi.color(i));
  return cm;
}

CountTable census(const ChromaticMosaic& cm) {
  CountTable table;
  table.s = cm.s;
  table.d = cm.d;
  const int top = cm.ambient_dim();
  for (int p = 0; p <= top; ++p) {
    FaceList fl = faces(cm.base, p);
    for (int f = 0; f < fl.size(); ++f) {
      ColorSignature sig = cm.signature(fl.face(f), p + 1);
      ++table.entries[sig.counts];
    }
  }
  return table;
}

std::vector<std::vector<uint64_t>> all_face_keys(const SimplicialMosaic& m, int p) {
  FaceList fl = faces(m, p);
  return fl.keys;
}

ChromaticMosaic restrict_mosaic(const ChromaticMosaic& cm, const std::vector<int>& tau_in) {
  std::vector<int> tau = tau_in;
  std::sort(tau.begin(), tau.end());
  tau.erase(std::unique(tau.begin(), tau.end()), tau.end());
  if (tau.empty()) throw input_error("restrict: tau must be non-empty");
  for (int j : tau)
    if (j < 0 || j > cm.s) throw input_error("restrict: color out of range");

  const int t = int(tau.size()) - 1;
  const int d = cm.d, s = cm.s;
  std::vector<int> rank(size_t(s) + 1, -1);
  for (size_t i = 0; i < tau.size(); ++i) rank[size_t(tau[i])] = int(i);

  auto u = simplex_vertices(t, cm.scale);

  ChromaticMosaic out;
  out.s = t;
  out.d = d;
  out.scale = cm.scale;
  out.color_by_id.assign(cm.color_by_id.size(), 0);
  for (size_t i = 0; i < cm.color_by_id.size(); ++i) {
    int r = rank[cm.color_by_id[i]];
    out.color_by_id[i] = uint8_t(r < 0 ? 0 : r);
  }

  SimplicialMosaic& rm = out.base;
  rm.dim = t + d;
  rm.periodic.assign(size_t(t + d), 0);
  for (int c = 0; c < d; ++c) rm.periodic[size_t(t + c)] = cm.base.periodic[size_t(s + c)];

  // collect the highest-dimensional tau-colored faces; they are the top
  // cells of Del(chi|tau) (pure below t+d only for tiny color classes)
  int top_p = std::min(t + d, cm.base.top);
  FaceList top = faces(cm.base, top_p);
  while (top_p > 0) {
    bool any = false;
    for (int f = 0; f < top.size() && !any; ++f)
      any = cm.signature(top.face(f), top_p + 1).colored_in(tau);
    if (any) break;
    top = faces(cm.base, --top_p);
  }
  rm.top = top_p;
  std::vector<int32_t> replica_map(size_t(cm.base.n_verts()), -1);
  auto map_replica = [&](uint32_t v) -> uint32_t {
    if (replica_map[v] < 0) {
      replica_map[v] = int32_t(rm.vorig.size());
      rm.vorig.push_back(cm.base.vorig[v]);
      int color = cm.color_of_replica(v);
      const auto& uj = u[size_t(rank[size_t(color)])];
      for (int c = 0; c < t; ++c) {
        rm.vcoords.push_back(uj[size_t(c)]);
        rm.voff.push_back(0);
      }
      for (int c = 0; c < d; ++c) {
        rm.vcoords.push_back(cm.base.vcoords[size_t(v) * cm.ambient_dim() + s + c]);
        rm.voff.push_back(cm.base.voff[size_t(v) * cm.ambient_dim() + s + c]);
      }
    }
    return uint32_t(replica_map[v]);
  };

  const int cs = top_p + 1;
  for (int f = 0; f < top.size(); ++f) {
    ColorSignature sig = cm.signature(top.face(f), cs);
    if (!sig.colored_in(tau)) continue;
    auto reps = std::vector<uint32_t>(size_t(cs));
    for (int i = 0; i < cs; ++i) reps[size_t(i)] = map_replica(top.face(f)[i]);
    std::sort(reps.begin(), reps.end(), [&](uint32_t a, uint32_t b) {
      if (rm.vorig[a] != rm.vorig[b]) return rm.vorig[a] < rm.vorig[b];
      return std::lexicographical_compare(
          rm.voff.begin() + size_t(a) * rm.dim, rm.voff.begin() + size_t(a) * rm.dim + rm.dim,
          rm.voff.begin() + size_t(b) * rm.dim, rm.voff.begin() + size_t(b) * rm.dim + rm.dim);
    });
    rm.cells.insert(rm.cells.end(), reps.begin(), reps.end());
  }
  if (rm.cells.empty()) return out;

  wire_adjacency(rm);
  const int nc = rm.n_cells();
  rm.centers.assign(size_t(nc) * rm.dim, 0);
  rm.radius2.assign(size_t(nc), 0);
  rm.cc_flag.assign(size_t(nc), 0);
  for (int c = 0; c < nc; ++c) {
    const double* verts[kMaxDim + 1];
    for (int i = 0; i < cs; ++i) verts[i] = rm.vertex(int(rm.cell(c)[i]));
    long double y[kMaxDim];
    double r2 = 0;
    bool ok = rm.top == rm.dim ? detail::circumcenter_translated(rm.dim, verts, y, &r2)
                               : detail::circumcenter_lowrank(rm.dim, rm.top, verts, y, &r2);
    if (!ok) {
      rm.cc_flag[size_t(c)] = 1;
      continue;
    }
    for (int c2 = 0; c2 < rm.dim; ++c2)
      rm.centers[size_t(c) * rm.dim + c2] = double((long double)verts[0][c2] + y[c2]);
    rm.radius2[size_t(c)] = r2;
  }
  return out;
}

LiftCheckReport lift_check(const PointSet& points, const Coloring& chi, double scale,
                           uint64_t seed) {
  LiftCheckReport report;
  SimplicialMosaic base =
      points.any_periodic() ? delaunay_periodic(points, seed) : delaunay(points, seed);
  ChromaticMosaic cm = chromatic_delaunay(points, chi, scale, seed);
  for (int p = 0; p <= points.dim; ++p) {
    FaceList lower = faces(base, p);
    std::set<std::vector<uint64_t>> upper;
    for (auto& k : all_face_keys(cm.base, p)) upper.insert(k);
    for (int f = 0; f < lower.size(); ++f) {
      // base keys and chromatic keys pack the same periodic coordinates, so
      // the lifted face is present iff the key is
      report.checked++;
      if (!upper.count(lower.keys[size_t(f)]))
        report.violations.push_back(lower.keys[size_t(f)]);
    }
  }
  return report;
}

}  // namespace cdm
