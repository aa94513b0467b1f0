#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cdm/errors.hpp"
#include "cdm/predicates.hpp"
#include "cdm/rng.hpp"
#include "cdm/triangulation.hpp"

namespace cdm {

namespace {

struct ReplicaInfo {
  uint32_t orig;
  std::array<int8_t, kMaxDim> off;
};

struct QuotientBuild {
  SimplicialMosaic mosaic;
  double rmax = 0;
  std::vector<std::vector<uint64_t>> cell_keys;  // sorted canonical keys
};

// Triangulate the (2R+1)^k replicated cover and keep one canonical copy of
// each cell: the one whose circumcenter lies in [0,1)^k on the periodic
// coordinates.
QuotientBuild build_cover(const PointSet& points, uint64_t seed, int R) {
  const int d = points.dim;
  const int n = points.size();
  std::vector<int> pcoords;
  for (int c = 0; c < d; ++c)
    if (points.periodic[size_t(c)]) pcoords.push_back(c);
  const int k = int(pcoords.size());

  // offsets ordered canonical-first so the first insertions carry offset 0
  std::vector<std::array<int8_t, kMaxDim>> offsets;
  {
    std::vector<int> idx(size_t(k), -R);
    while (true) {
      std::array<int8_t, kMaxDim> o{};
      for (int i = 0; i < k; ++i) o[size_t(pcoords[size_t(i)])] = int8_t(idx[size_t(i)]);
      offsets.push_back(o);
      int i = 0;
      while (i < k && ++idx[size_t(i)] > R) idx[size_t(i++)] = -R;
      if (i == k) break;
      if (k == 0) break;
    }
    if (k == 0) offsets.assign(1, std::array<int8_t, kMaxDim>{});
    std::sort(offsets.begin(), offsets.end(), [&](const auto& a, const auto& b) {
      int na = 0, nb = 0;
      for (int c = 0; c < d; ++c) {
        na = std::max(na, std::abs(int(a[size_t(c)])));
        nb = std::max(nb, std::abs(int(b[size_t(c)])));
      }
      if (na != nb) return na < nb;
      return a < b;
    });
  }

  detail::BwEngine eng(d, points.unperturbed_prefix);
  std::vector<ReplicaInfo> info;
  std::vector<double> replica_bulge;
  Rng rng(seed, 0x7E810D1C);
  std::vector<uint32_t> order;
  for (const auto& off : offsets) {
    auto layer = std::vector<uint32_t>(size_t(n));
    std::iota(layer.begin(), layer.end(), 0);
    for (size_t i = layer.size(); i > 1; --i) std::swap(layer[i - 1], layer[rng.below(i)]);
    for (uint32_t orig : layer) {
      double p[kMaxDim];
      for (int c = 0; c < d; ++c) p[c] = points.point(int(orig))[c] + double(off[size_t(c)]);
      uint32_t id = eng.add_point(p, points.id_of(int(orig)));
      if (!points.bulge.empty())
        replica_bulge.insert(replica_bulge.end(), points.bulge.begin() + size_t(orig) * d,
                             points.bulge.begin() + size_t(orig) * d + d);
      info.push_back({orig, off});
      order.push_back(id);
    }
  }
  // scaffold vertices beyond each layer flat (see layer_scaffolds); they
  // cone off the flat hull faces of the replicated cover
  const uint32_t first_sky = uint32_t(info.size());
  if (points.unperturbed_prefix > 0 && !points.bulge.empty()) {
    const int k = points.unperturbed_prefix;
    double span = 1.0;
    for (double c : eng.coords) span = std::max(span, std::fabs(c));
    const double far = 4096.0 * (span + 1.0);
    uint32_t max_id = 0;
    for (int i = 0; i < n; ++i) max_id = std::max(max_id, points.id_of(i));
    std::vector<std::vector<double>> prefixes;
    for (int i = 0; i < n; ++i) {
      std::vector<double> key(points.point(i), points.point(i) + k);
      bool seen = false;
      for (auto& p : prefixes) seen |= (p == key);
      if (seen) continue;
      prefixes.push_back(key);
      Rng srng(0x5CAFF01D ^ uint64_t(prefixes.size()));
      double pt[kMaxDim];
      for (int c2 = 0; c2 < d; ++c2) pt[c2] = 0.25 + 0.5 * srng.uniform();
      for (int c2 = 0; c2 < k; ++c2)
        pt[c2] = key[size_t(c2)] + far * points.bulge[size_t(i) * d + c2];
      uint32_t id = eng.add_point(pt, max_id + 1 + uint32_t(prefixes.size()));
      replica_bulge.resize(replica_bulge.size() + size_t(d), 0.0);
      order.insert(order.begin() + long(prefixes.size()) - 1, id);
    }
  }
  if (!replica_bulge.empty()) eng.set_bulge(replica_bulge.data(), int(eng.pids.size()));
  eng.build(order, seed);

  QuotientBuild out;
  SimplicialMosaic& m = out.mosaic;
  m.dim = d;
  m.top = d;
  m.periodic = points.periodic;

  const int cs = d + 1;
  std::vector<int32_t> replica_of(info.size(), -1);
  auto get_replica = [&](uint32_t eng_pt) -> uint32_t {
    if (replica_of[eng_pt] < 0) {
      replica_of[eng_pt] = int32_t(m.vorig.size());
      m.vorig.push_back(points.id_of(int(info[eng_pt].orig)));
      for (int c = 0; c < d; ++c) {
        m.voff.push_back(info[eng_pt].off[size_t(c)]);
        m.vcoords.push_back(eng.coords[size_t(eng_pt) * d + c]);
      }
    }
    return uint32_t(replica_of[eng_pt]);
  };

  // canonical selection
  std::vector<uint32_t> selected;
  for (uint32_t c = 0; c < eng.alive.size(); ++c) {
    if (!eng.alive[c] || eng.inf_slot[c] >= 0) continue;
    bool scaffold = false;
    for (int i = 0; i < cs; ++i) scaffold |= (eng.cv[size_t(c) * cs + i] >= first_sky);
    if (scaffold) continue;
    const double* verts[kMaxDim + 1];
    for (int i = 0; i < cs; ++i)
      verts[i] = eng.coords.data() + size_t(eng.cv[size_t(c) * cs + i]) * d;
    if (points.unperturbed_prefix > 0 && orientation(d, verts) == Sign::Zero)
      continue;  // zero-volume artifact on a flat layer face
    long double y[kMaxDim];
    double r2 = 0;
    // flat translate slivers on the cover hull have no circumcenter and are
    // never canonical
    if (!detail::circumcenter_translated(d, verts, y, &r2)) continue;
    bool canonical = true;
    for (int pc : pcoords) {
      long double v = (long double)verts[0][pc] + y[pc];
      if (!(v >= 0.0L && v < 1.0L)) canonical = false;
    }
    if (!canonical) continue;
    selected.push_back(c);
    out.rmax = std::max(out.rmax, std::sqrt(r2));
  }
  if (selected.empty()) throw degeneracy_error("periodic: no canonical cells");

  std::map<std::vector<uint64_t>, int> seen;
  for (uint32_t ec : selected) {
    std::array<uint32_t, kMaxDim + 1> reps{};
    for (int i = 0; i < cs; ++i) reps[size_t(i)] = get_replica(eng.cv[size_t(ec) * cs + i]);
    // slot-sort by identity
    std::sort(reps.begin(), reps.begin() + cs, [&](uint32_t a, uint32_t b) {
      if (m.vorig[a] != m.vorig[b]) return m.vorig[a] < m.vorig[b];
      return std::lexicographical_compare(
          m.voff.begin() + size_t(a) * d, m.voff.begin() + size_t(a) * d + d,
          m.voff.begin() + size_t(b) * d, m.voff.begin() + size_t(b) * d + d);
    });
    std::vector<uint64_t> key = m.face_key(reps.data(), cs);
    if (!seen.emplace(key, int(out.cell_keys.size())).second)
      throw degeneracy_error("periodic: canonical selection picked a cell twice");
    out.cell_keys.push_back(key);
    for (int i = 0; i < cs; ++i) m.cells.push_back(reps[size_t(i)]);
    const double* verts[kMaxDim + 1];
    for (int i = 0; i < cs; ++i) verts[i] = m.vertex(int(reps[size_t(i)]));
    long double y[kMaxDim];
    double r2 = 0;
    bool ok = detail::circumcenter_translated(d, verts, y, &r2);
    if (!ok) throw degeneracy_error("periodic: singular canonical cell");
    for (int c2 = 0; c2 < d; ++c2)
      m.centers.push_back(double((long double)verts[0][c2] + y[c2]));
    m.radius2.push_back(r2);
    m.cc_flag.push_back(0);
  }

  wire_adjacency(m);
  return out;
}

}  // namespace

SimplicialMosaic delaunay_periodic(const PointSet& points, uint64_t seed) {
  const int d = points.dim;
  if (d < 1 || d > kMaxDim) throw input_error("periodic: unsupported dimension");
  if (points.size() < 1) throw size_error("periodic: empty point set");
  if (!points.any_periodic()) return delaunay(points, seed);
  for (int i = 0; i < points.size(); ++i)
    for (int c = 0; c < d; ++c)
      if (points.periodic[size_t(c)] &&
          !(points.point(i)[c] >= 0.0 && points.point(i)[c] < 1.0))
        throw input_error("periodic: coordinates must lie in [0,1)");

  PointSet snapped = points;
  snapped.quantize_periodic();

  QuotientBuild q3 = build_cover(snapped, seed, 1);
  // A canonical cell with circumradius r only sees lattice offsets up to
  // floor(1+r) on each periodic coordinate, so the 3^k cover is sufficient
  // for r < 1. Near that limit, rebuild with a 5^k cover and compare.
  if (q3.rmax > 0.98) {
    QuotientBuild q5 = build_cover(snapped, seed, 2);
    std::vector<std::vector<uint64_t>> a = q3.cell_keys, b = q5.cell_keys;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw replication_error(
          "periodic: 3^k replication insufficient and the 5^k cover disagrees");
    if (q5.rmax > 1.98)
      throw replication_error("periodic: circumradius too large even for the 5^k cover");
  }
  return std::move(q3.mosaic);
}

}  // namespace cdm
