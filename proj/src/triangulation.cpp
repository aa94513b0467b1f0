#include "cdm/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <numeric>

#include "cdm/errors.hpp"
#include "cdm/predicates.hpp"
#include "cdm/rng.hpp"

namespace cdm {

namespace detail {

bool circumcenter_translated(int D, const double* const* verts, long double* y,
                             double* r2) {
  long double a[kMaxDim][kMaxDim], b[kMaxDim];
  for (int k = 0; k < D; ++k) {
    long double n2 = 0;
    for (int c = 0; c < D; ++c) {
      long double e = (long double)verts[k + 1][c] - (long double)verts[0][c];
      a[k][c] = e;
      n2 += e * e;
    }
    b[k] = n2 / 2;
  }
  for (int col = 0; col < D; ++col) {
    int piv = col;
    for (int r = col + 1; r < D; ++r)
      if (fabsl(a[r][col]) > fabsl(a[piv][col])) piv = r;
    if (a[piv][col] == 0) return false;
    if (piv != col) {
      for (int c = 0; c < D; ++c) std::swap(a[piv][c], a[col][c]);
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < D; ++r) {
      long double f = a[r][col] / a[col][col];
      for (int c = col; c < D; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  long double rr = 0;
  for (int col = D - 1; col >= 0; --col) {
    long double s = b[col];
    for (int c = col + 1; c < D; ++c) s -= a[col][c] * y[c];
    y[col] = s / a[col][col];
  }
  for (int c = 0; c < D; ++c) rr += y[c] * y[c];
  *r2 = double(rr);
  return std::isfinite(*r2);
}

bool circumcenter_lowrank(int D, int m, const double* const* verts, long double* y,
                          double* r2) {
  // center within the affine hull of m+1 points in R^D: least-norm solution
  // of the bisector system via the normal equations (A A^T) w = b, y = A^T w
  long double a[kMaxDim][kMaxDim], b[kMaxDim], g[kMaxDim][kMaxDim], w[kMaxDim];
  for (int k = 0; k < m; ++k) {
    long double n2 = 0;
    for (int c = 0; c < D; ++c) {
      a[k][c] = (long double)verts[k + 1][c] - (long double)verts[0][c];
      n2 += a[k][c] * a[k][c];
    }
    b[k] = n2 / 2;
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      long double s = 0;
      for (int c = 0; c < D; ++c) s += a[i][c] * a[j][c];
      g[i][j] = s;
    }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (fabsl(g[r][col]) > fabsl(g[piv][col])) piv = r;
    if (g[piv][col] == 0) return false;
    if (piv != col) {
      for (int c = 0; c < m; ++c) std::swap(g[piv][c], g[col][c]);
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < m; ++r) {
      long double f = g[r][col] / g[col][col];
      for (int c = col; c < m; ++c) g[r][c] -= f * g[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int col = m - 1; col >= 0; --col) {
    long double s = b[col];
    for (int c = col + 1; c < m; ++c) s -= g[col][c] * w[c];
    w[col] = s / g[col][col];
  }
  long double rr = 0;
  for (int c = 0; c < D; ++c) {
    long double s = 0;
    for (int k = 0; k < m; ++k) s += a[k][c] * w[k];
    y[c] = s;
    rr += s * s;
  }
  *r2 = double(rr);
  return std::isfinite(*r2);
}

uint32_t BwEngine::add_point(const double* p, uint32_t pid) {
  coords.insert(coords.end(), p, p + D);
  pids.push_back(pid);
  return uint32_t(pids.size() - 1);
}

void BwEngine::set_bulge(const double* dirs, int n) {
  bulge.assign(dirs, dirs + size_t(n) * D);
}

uint32_t BwEngine::alloc_cell() {
  if (!freelist_.empty()) {
    uint32_t c = freelist_.back();
    freelist_.pop_back();
    alive[c] = 1;
    return c;
  }
  uint32_t c = uint32_t(alive.size());
  cv.resize(cv.size() + size_t(cs()), kInf);
  cn.resize(cn.size() + size_t(cs()), kInf);
  inf_slot.push_back(-1);
  alive.push_back(1);
  cc.resize(cc.size() + size_t(D), 0);
  cr2.push_back(0);
  cflag.push_back(0);
  mark_.push_back(0);
  return c;
}

void BwEngine::set_circumdata(uint32_t c) {
  int slot = -1;
  for (int i = 0; i < cs(); ++i)
    if (cv[size_t(c) * cs() + i] == kInf) slot = i;
  inf_slot[c] = int8_t(slot);
  if (slot >= 0) return;
  const double* verts[kMaxDim + 1];
  for (int i = 0; i < cs(); ++i)
    verts[i] = coords.data() + size_t(cv[size_t(c) * cs() + i]) * D;
  long double y[kMaxDim];
  double r2 = 0;
  if (!circumcenter_translated(D, verts, y, &r2)) {
    cflag[c] = 1;
    cr2[c] = 0;
    return;
  }
  cflag[c] = 0;
  cr2[c] = r2;
  for (int i = 0; i < D; ++i) cc[size_t(c) * D + i] = double((long double)verts[0][i] + y[i]);
}

bool BwEngine::conflict(uint32_t c, uint32_t q) const {
  const double* qp = coords.data() + size_t(q) * D;
  const size_t base = size_t(c) * cs();
  if (inf_slot[c] >= 0) {
    const double* pts[kMaxDim + 1];
    uint32_t pid[kMaxDim + 1];
    uint32_t sec[kMaxDim + 1];
    const double* outs[kMaxDim + 1];
    for (int i = 0; i < cs(); ++i) {
      uint32_t v = cv[base + i];
      uint32_t src_pt = v == kInf ? q : v;
      pts[i] = coords.data() + size_t(src_pt) * D;
      pid[i] = pids[src_pt];
      sec[i] = src_pt;
      outs[i] = bulge.empty() ? nullptr : bulge.data() + size_t(src_pt) * D;
    }
    return orientation_perturbed(D, pts, pid, sec, skip,
                                 bulge.empty() ? nullptr : outs) == Sign::Positive;
  }
  if (!cflag[c]) {
    // circumsphere prefilter: decide clearly-in / clearly-out cheaply
    double dist2 = 0;
    for (int i = 0; i < D; ++i) {
      double e = qp[i] - cc[size_t(c) * D + i];
      dist2 += e * e;
    }
    double gap = dist2 - cr2[c];
    double slack = 1e-7 * (dist2 + cr2[c]) + 1e-280;
    if (gap > slack) return false;
    if (gap < -slack) return true;
  }
  const double* pts[kMaxDim + 1];
  uint32_t pid[kMaxDim + 1];
  uint32_t sec[kMaxDim + 1];
  const double* outs[kMaxDim + 1];
  for (int i = 0; i < cs(); ++i) {
    uint32_t v = cv[base + i];
    pts[i] = coords.data() + size_t(v) * D;
    pid[i] = pids[v];
    sec[i] = v;
    outs[i] = bulge.empty() ? nullptr : bulge.data() + size_t(v) * D;
  }
  return insphere_det_perturbed(D, pts, pid, qp, pids[q], sec, q, skip,
                                bulge.empty() ? nullptr : outs,
                                bulge.empty() ? nullptr : bulge.data() + size_t(q) * D) ==
         Sign::Positive;
}

long long g_dbg_conf_walkverify = 0, g_dbg_conf_recovery = 0, g_dbg_conf_cavity = 0,
          g_dbg_walk_steps = 0, g_dbg_recovery_runs = 0;

uint32_t BwEngine::locate_conflict(uint32_t q) {
  const double* qp = coords.data() + size_t(q) * D;
  uint32_t c = hint_;
  if (c >= alive.size() || !alive[c]) {
    c = kInf;
    for (uint32_t i = 0; i < alive.size(); ++i)
      if (alive[i]) {
        c = i;
        break;
      }
  }
  size_t steps = 0, max_steps = 30 * alive.size() + 1000;
  while (steps++ < max_steps) {
    if (inf_slot[c] >= 0) {
      if (conflict(c, q)) return c;
      c = cn[size_t(c) * cs() + inf_slot[c]];
      continue;
    }
    // stochastic visibility walk: leave through any facet that separates
    const size_t base = size_t(c) * cs();
    const double* pts[kMaxDim + 1];
    uint32_t pid[kMaxDim + 1];
    uint32_t sec[kMaxDim + 1];
    for (int i = 0; i < cs(); ++i) {
      uint32_t v = cv[base + i];
      pts[i] = coords.data() + size_t(v) * D;
      pid[i] = pids[v];
      sec[i] = v;
    }
    walk_state_ = Rng::mix(walk_state_);
    int start = int(walk_state_ % uint64_t(cs()));
    bool moved = false;
    for (int t = 0; t < cs(); ++t) {
      int k = (start + t) % cs();
      const double* save_p = pts[k];
      uint32_t save_id = pid[k];
      uint32_t save_sec = sec[k];
      pts[k] = qp;
      pid[k] = pids[q];
      sec[k] = q;
      // raw sign suffices for walking: strictly Negative crosses, a tie gets
      // verified below. Tuples inside one layer flat are zero structurally.
      bool same_prefix = skip > 0;
      for (int i = 1; i <= D && same_prefix; ++i)
        for (int c = 0; c < skip; ++c) same_prefix &= (pts[i][c] == pts[0][c]);
      Sign s = same_prefix ? Sign::Zero : orientation(D, pts);
      pts[k] = save_p;
      pid[k] = save_id;
      sec[k] = save_sec;
      if (s == Sign::Negative) {
        c = cn[base + k];
        moved = true;
        break;
      }
    }
    if (!moved) break;  // no strictly separating facet: candidate found
  }
  // verify; walk ties (queries on facet planes) can leave us one off
  ++g_dbg_conf_walkverify;
  if (c < alive.size() && alive[c] && conflict(c, q)) return c;
  ++g_dbg_recovery_runs;
  ++epoch_;
  const uint32_t mk = 2 * epoch_;
  // best-first recovery over the adjacency graph, nearest cells first
  auto cell_key = [&](uint32_t cell) {
    double s = 0;
    int cnt = 0;
    for (int i = 0; i < cs(); ++i) {
      uint32_t v = cv[size_t(cell) * cs() + i];
      if (v == kInf) continue;
      for (int c2 = 0; c2 < D; ++c2) {
        double e = coords[size_t(v) * D + c2] - qp[c2];
        s += e * e;
      }
      ++cnt;
    }
    return cnt ? s / cnt : 1e300;
  };
  std::priority_queue<std::pair<double, uint32_t>, std::vector<std::pair<double, uint32_t>>,
                      std::greater<>> frontier;
  if (c < alive.size() && alive[c]) {
    frontier.emplace(cell_key(c), c);
    mark_[c] = mk;
  }
  for (size_t visited = 0; !frontier.empty() && visited < 4096; ++visited) {
    uint32_t cur = frontier.top().second;
    frontier.pop();
    for (int k = 0; k < cs(); ++k) {
      uint32_t nb = cn[size_t(cur) * cs() + k];
      if (nb >= alive.size() || !alive[nb] || mark_[nb] == mk) continue;
      mark_[nb] = mk;
      ++g_dbg_conf_recovery;
      if (conflict(nb, q)) return nb;
      frontier.emplace(cell_key(nb), nb);
    }
  }
  // last resort: exhaustive scan
  for (uint32_t i = 0; i < alive.size(); ++i)
    if (alive[i] && conflict(i, q)) return i;
  throw degeneracy_error("locate: no conflict cell found");
}

void BwEngine::init_first_simplex(const std::vector<uint32_t>& first) {
  uint32_t verts[kMaxDim + 1];
  for (int i = 0; i < cs(); ++i) verts[i] = first[size_t(i)];
  {
    const double* pts[kMaxDim + 1];
    uint32_t pid[kMaxDim + 1];
    uint32_t sec[kMaxDim + 1];
    const double* outs[kMaxDim + 1];
    for (int i = 0; i < cs(); ++i) {
      pts[i] = coords.data() + size_t(verts[i]) * D;
      pid[i] = pids[verts[i]];
      sec[i] = verts[i];
      outs[i] = bulge.empty() ? nullptr : bulge.data() + size_t(verts[i]) * D;
    }
    if (orientation_perturbed(D, pts, pid, sec, skip,
                              bulge.empty() ? nullptr : outs) == Sign::Negative)
      std::swap(verts[0], verts[1]);
  }
  // one finite cell plus an infinite cell per facet
  std::vector<uint32_t> ids;
  uint32_t c0 = alloc_cell();
  for (int i = 0; i < cs(); ++i) cv[size_t(c0) * cs() + i] = verts[i];
  set_circumdata(c0);
  ids.push_back(c0);
  for (int k = 0; k < cs(); ++k) {
    uint32_t c = alloc_cell();
    for (int i = 0; i < cs(); ++i) cv[size_t(c) * cs() + i] = verts[i];
    cv[size_t(c) * cs() + k] = kInf;
    // one transposition fixes the conflict-side convention
    std::swap(cv[size_t(c) * cs() + k], cv[size_t(c) * cs() + (k + 1) % cs()]);
    set_circumdata(c);
    ids.push_back(c);
  }
  // wire adjacency by facet matching
  struct Entry {
    std::array<uint32_t, kMaxDim> key;
    uint32_t cell;
    int slot;
  };
  std::vector<Entry> entries;
  for (uint32_t c : ids) {
    for (int k = 0; k < cs(); ++k) {
      Entry e;
      e.key.fill(kInf - 1);
      int w = 0;
      for (int i = 0; i < cs(); ++i)
        if (i != k) e.key[size_t(w++)] = cv[size_t(c) * cs() + i];
      std::sort(e.key.begin(), e.key.begin() + w);
      e.cell = c;
      e.slot = k;
      entries.push_back(e);
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  for (size_t i = 0; i + 1 < entries.size(); i += 2) {
    if (entries[i].key != entries[i + 1].key)
      throw degeneracy_error("initial simplex wiring failed");
    cn[size_t(entries[i].cell) * cs() + entries[i].slot] = entries[i + 1].cell;
    cn[size_t(entries[i + 1].cell) * cs() + entries[i + 1].slot] = entries[i].cell;
  }
  hint_ = c0;
}

void BwEngine::insert(uint32_t q) {
  uint32_t seed = locate_conflict(q);
  ++epoch_;
  const uint32_t mk_conflict = 2 * epoch_, mk_clear = 2 * epoch_ + 1;
  std::vector<uint32_t> region{seed};
  std::vector<std::pair<uint32_t, int>> boundary;
  mark_[seed] = mk_conflict;
  for (size_t head = 0; head < region.size(); ++head) {
    uint32_t c = region[head];
    for (int k = 0; k < cs(); ++k) {
      uint32_t n = cn[size_t(c) * cs() + k];
      if (mark_[n] == mk_conflict) continue;
      if (mark_[n] != mk_clear) {
        ++g_dbg_conf_cavity;
        if (conflict(n, q)) {
          mark_[n] = mk_conflict;
          region.push_back(n);
          continue;
        }
        mark_[n] = mk_clear;
      }
      boundary.emplace_back(c, k);
    }
  }

  struct Entry {
    std::array<uint32_t, kMaxDim> key;
    uint32_t cell;
    int slot;
  };
  std::vector<Entry> entries;
  entries.reserve(boundary.size() * size_t(D));
  uint32_t last = kInf;
  for (auto [c, k] : boundary) {
    uint32_t n = cn[size_t(c) * cs() + k];
    uint32_t id = alloc_cell();
    for (int i = 0; i < cs(); ++i)
      cv[size_t(id) * cs() + i] = (i == k) ? q : cv[size_t(c) * cs() + i];
    set_circumdata(id);
    mark_[id] = 0;
    cn[size_t(id) * cs() + k] = n;
    for (int j = 0; j < cs(); ++j)
      if (cn[size_t(n) * cs() + j] == c) {
        cn[size_t(n) * cs() + j] = id;
        break;
      }
    for (int i = 0; i < cs(); ++i) {
      if (i == k) continue;
      Entry e;
      e.key.fill(kInf - 1);
      int w = 0;
      for (int t = 0; t < cs(); ++t)
        if (t != i && t != k) e.key[size_t(w++)] = cv[size_t(id) * cs() + t];
      std::sort(e.key.begin(), e.key.begin() + w);
      e.cell = id;
      e.slot = i;
      entries.push_back(e);
    }
    last = id;
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  for (size_t i = 0; i + 1 < entries.size(); i += 2) {
    if (entries[i].key != entries[i + 1].key)
      throw degeneracy_error("cavity boundary is not a closed ball");
    cn[size_t(entries[i].cell) * cs() + entries[i].slot] = entries[i + 1].cell;
    cn[size_t(entries[i + 1].cell) * cs() + entries[i + 1].slot] = entries[i].cell;
  }
  for (uint32_t c : region) {
    alive[c] = 0;
    freelist_.push_back(c);
  }
  hint_ = last;
}

void BwEngine::build(const std::vector<uint32_t>& order, uint64_t seed) {
  if (int(order.size()) < cs()) throw size_error("delaunay: need at least d+1 points");
  walk_state_ = Rng::mix(seed ^ 0xB0B5);
  // prefer an affinely independent start with distinct perturbation keys so
  // the early cells are not flat
  std::vector<uint32_t> first;
  std::vector<uint8_t> used(order.size(), 0);
  {
    double basis[kMaxDim][kMaxDim];
    int rank = 0;
    std::vector<uint32_t> seen_pids;
    for (size_t i = 0; i < order.size() && int(first.size()) < cs(); ++i) {
      uint32_t p = order[i];
      bool dup = false;
      for (uint32_t s : seen_pids) dup |= (s == pids[p]);
      if (dup) continue;
      if (first.empty()) {
        seen_pids.push_back(pids[p]);
        first.push_back(p);
        used[i] = 1;
        continue;
      }
      // Gram-Schmidt residual of the edge vector against the current basis
      double v[kMaxDim], norm0 = 0;
      for (int c = 0; c < D; ++c) {
        v[c] = coords[size_t(p) * D + c] - coords[size_t(first[0]) * D + c];
        norm0 += v[c] * v[c];
      }
      for (int r = 0; r < rank; ++r) {
        double dot = 0;
        for (int c = 0; c < D; ++c) dot += v[c] * basis[r][c];
        for (int c = 0; c < D; ++c) v[c] -= dot * basis[r][c];
      }
      double res = 0;
      for (int c = 0; c < D; ++c) res += v[c] * v[c];
      if (!(res > 1e-16 * (norm0 + 1e-300))) continue;
      double inv = 1.0 / std::sqrt(res);
      for (int c = 0; c < D; ++c) basis[rank][c] = v[c] * inv;
      ++rank;
      seen_pids.push_back(pids[p]);
      first.push_back(p);
      used[i] = 1;
    }
    for (size_t i = 0; i < order.size() && int(first.size()) < cs(); ++i) {
      if (!used[i]) {
        first.push_back(order[i]);
        used[i] = 1;
      }
    }
  }
  init_first_simplex(first);
  for (size_t i = 0; i < order.size(); ++i)
    if (!used[i]) insert(order[i]);
}

std::vector<std::array<uint32_t, kMaxDim + 1>> BwEngine::finite_cells() const {
  std::vector<std::array<uint32_t, kMaxDim + 1>> out;
  for (uint32_t c = 0; c < alive.size(); ++c) {
    if (!alive[c] || inf_slot[c] >= 0) continue;
    std::array<uint32_t, kMaxDim + 1> cell{};
    cell.fill(kInf);
    for (int i = 0; i < cs(); ++i) cell[size_t(i)] = cv[size_t(c) * cs() + i];
    out.push_back(cell);
  }
  return out;
}

}  // namespace detail

uint64_t SimplicialMosaic::packed(int v, const int8_t* shift) const {
  uint64_t key = uint64_t(vorig[size_t(v)]) << 20;
  int pc = 0;
  for (int c = 0; c < dim; ++c) {
    if (c < int(periodic.size()) && periodic[size_t(c)]) {
      int o = voff[size_t(v) * dim + c] - (shift ? shift[c] : 0);
      key |= uint64_t(o + 8) << (5 * pc);
      ++pc;
    }
  }
  return key;
}

std::vector<uint64_t> SimplicialMosaic::face_key(const uint32_t* reps, int count) const {
  auto idx = std::vector<int>(size_t(count));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    uint32_t va = reps[a], vb = reps[b];
    if (vorig[va] != vorig[vb]) return vorig[va] < vorig[vb];
    return std::lexicographical_compare(voff.begin() + size_t(va) * dim,
                                        voff.begin() + size_t(va) * dim + dim,
                                        voff.begin() + size_t(vb) * dim,
                                        voff.begin() + size_t(vb) * dim + dim);
  });
  const int8_t* shift = voff.data() + size_t(reps[idx[0]]) * dim;
  auto key = std::vector<uint64_t>(size_t(count));
  for (int i = 0; i < count; ++i) key[size_t(i)] = packed(int(reps[idx[size_t(i)]]), shift);
  return key;
}

FaceList faces(const SimplicialMosaic& m, int p) {
  if (p < 0 || p > m.dim) throw input_error("faces: p out of range");
  if (p > m.top) return FaceList{p, {}, {}};
  struct Item {
    std::vector<uint64_t> key;
    std::vector<uint32_t> reps;
  };
  std::vector<Item> items;
  const int cs = m.cell_size();
  std::vector<int> pick(size_t(p) + 1);
  for (int c = 0; c < m.n_cells(); ++c) {
    const uint32_t* cell = m.cell(c);
    // enumerate (p+1)-subsets of the cell
    for (int i = 0; i <= p; ++i) pick[size_t(i)] = i;
    while (true) {
      Item it;
      it.reps.resize(size_t(p) + 1);
      for (int i = 0; i <= p; ++i) it.reps[size_t(i)] = cell[pick[size_t(i)]];
      it.key = m.face_key(it.reps.data(), p + 1);
      items.push_back(std::move(it));
      int i = p;
      while (i >= 0 && pick[size_t(i)] == cs - (p + 1 - i)) --i;
      if (i < 0) break;
      ++pick[size_t(i)];
      for (int j = i + 1; j <= p; ++j) pick[size_t(j)] = pick[size_t(j - 1)] + 1;
    }
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.key < b.key; });
  FaceList out;
  out.p = p;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0 && items[i].key == items[i - 1].key) continue;
    out.keys.push_back(items[i].key);
    out.reps.insert(out.reps.end(), items[i].reps.begin(), items[i].reps.end());
  }
  return out;
}

std::vector<double> circumcenter(const SimplicialMosaic& m, int c) {
  const uint32_t* cell = m.cell(c);
  const double* verts[kMaxDim + 1];
  for (int i = 0; i < m.cell_size(); ++i) verts[i] = m.vertex(int(cell[i]));
  long double y[kMaxDim];
  double r2 = 0;
  bool ok = m.top == m.dim
                ? detail::circumcenter_translated(m.dim, verts, y, &r2)
                : detail::circumcenter_lowrank(m.dim, m.top, verts, y, &r2);
  if (!ok) throw degeneracy_error("circumcenter: singular cell");
  std::vector<double> out(size_t(m.dim));
  for (int i = 0; i < m.dim; ++i) out[size_t(i)] = double((long double)verts[0][i] + y[i]);
  return out;
}

SimplicialMosaic simplex_mosaic(const PointSet& points) {
  const int d = points.dim;
  const int n = points.size();
  if (n < 1 || n > d) throw input_error("simplex_mosaic: expects 1 <= n <= d points");
  SimplicialMosaic m;
  m.dim = d;
  m.top = n - 1;
  m.periodic.assign(size_t(d), 0);
  m.vcoords = points.coords;
  m.vorig.resize(size_t(n));
  for (int i = 0; i < n; ++i) m.vorig[size_t(i)] = points.id_of(i);
  m.voff.assign(size_t(n) * d, 0);
  auto cell = std::vector<uint32_t>(size_t(n));
  std::iota(cell.begin(), cell.end(), 0);
  std::sort(cell.begin(), cell.end(),
            [&](uint32_t a, uint32_t b) { return m.vorig[a] < m.vorig[b]; });
  m.cells = cell;
  m.nbr.assign(size_t(n), kBoundary);
  m.nshift.assign(size_t(n) * d, 0);
  const double* verts[kMaxDim + 1];
  for (int i = 0; i < n; ++i) verts[i] = m.vertex(int(cell[size_t(i)]));
  long double y[kMaxDim];
  double r2 = 0;
  if (!detail::circumcenter_lowrank(d, n - 1, verts, y, &r2))
    throw degeneracy_error("simplex_mosaic: affinely dependent points");
  for (int c2 = 0; c2 < d; ++c2)
    m.centers.push_back(double((long double)verts[0][c2] + y[c2]));
  m.radius2.push_back(r2);
  m.cc_flag.push_back(0);
  return m;
}

void wire_adjacency(SimplicialMosaic& m) {
  const int cs = m.cell_size();
  const int d = m.dim;
  struct Side {
    int cell;
    int slot;
    std::array<int8_t, kMaxDim> shift;
  };
  std::map<std::vector<uint64_t>, std::vector<Side>> facets;
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int slot = 0; slot < cs; ++slot) {
      std::vector<uint32_t> f;
      for (int i = 0; i < cs; ++i)
        if (i != slot) f.push_back(m.cell(c)[i]);
      uint32_t vmin = f[0];
      for (uint32_t v : f) {
        bool smaller =
            m.vorig[v] != m.vorig[vmin]
                ? m.vorig[v] < m.vorig[vmin]
                : std::lexicographical_compare(
                      m.voff.begin() + size_t(v) * d, m.voff.begin() + size_t(v) * d + d,
                      m.voff.begin() + size_t(vmin) * d,
                      m.voff.begin() + size_t(vmin) * d + d);
        if (smaller) vmin = v;
      }
      Side s;
      s.cell = c;
      s.slot = slot;
      for (int c2 = 0; c2 < d; ++c2) s.shift[size_t(c2)] = m.voff[size_t(vmin) * d + c2];
      facets[m.face_key(f.data(), cs - 1)].push_back(s);
    }
  }
  m.nbr.assign(size_t(m.n_cells()) * cs, kBoundary);
  m.nshift.assign(size_t(m.n_cells()) * cs * size_t(d), 0);
  for (auto& [key, sides] : facets) {
    if (sides.size() > 2)
      throw degeneracy_error("facet with more than two cofaces");
    if (sides.size() == 2) {
      for (int t = 0; t < 2; ++t) {
        const Side& a = sides[size_t(t)];
        const Side& b = sides[size_t(1 - t)];
        m.nbr[size_t(a.cell) * cs + a.slot] = uint32_t(b.cell);
        for (int c2 = 0; c2 < d; ++c2)
          m.nshift[(size_t(a.cell) * cs + size_t(a.slot)) * size_t(d) + size_t(c2)] =
              int8_t(a.shift[size_t(c2)] - b.shift[size_t(c2)]);
      }
    }
  }
}

int validate_mosaic(const SimplicialMosaic& m) {
  const int cs = m.cell_size();
  std::map<std::vector<uint64_t>, int> facet_count;
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int k = 0; k < cs; ++k) {
      std::vector<uint32_t> f;
      for (int i = 0; i < cs; ++i)
        if (i != k) f.push_back(m.cell(c)[i]);
      ++facet_count[m.face_key(f.data(), cs - 1)];
    }
  }
  int boundary = 0;
  for (auto& [key, cnt] : facet_count) {
    if (cnt > 2) throw degeneracy_error("facet shared by more than two cells");
    if (cnt == 1) ++boundary;
  }
  // adjacency must agree with the facet census
  int marked_boundary = 0;
  for (int c = 0; c < m.n_cells(); ++c)
    for (int k = 0; k < cs; ++k)
      if (m.nbr[size_t(c) * cs + k] == kBoundary) ++marked_boundary;
  if (marked_boundary != boundary)
    throw degeneracy_error("adjacency disagrees with facet census");
  return boundary;
}

namespace {

// Scaffold vertices far beyond each layer flat: they cone off the otherwise
// flat hull faces of a layered embedding, so no zero-volume hull cells can
// be Delaunay and no structurally degenerate predicates reach the hot path.
// Cells touching a scaffold vertex are dropped at extraction, leaving the
// true boundary facets. Scaffolds sit so far out that no cell of interest
// has a circumball reaching them.
std::vector<std::vector<double>> layer_scaffolds(const PointSet& points) {
  std::vector<std::vector<double>> sky;
  const int d = points.dim;
  const int k = points.unperturbed_prefix;
  if (k <= 0 || points.bulge.empty() || points.size() == 0) return sky;
  double span = 1.0, lo = 0.0, hi = 1.0;
  for (double c : points.coords) span = std::max(span, std::fabs(c));
  for (int i = 0; i < points.size(); ++i)
    for (int c2 = k; c2 < d; ++c2) {
      lo = std::min(lo, points.point(i)[c2]);
      hi = std::max(hi, points.point(i)[c2]);
    }
  const double far = 4096.0 * (span + 1.0);
  std::vector<std::vector<double>> prefixes;
  for (int i = 0; i < points.size(); ++i) {
    std::vector<double> key(points.point(i), points.point(i) + k);
    bool seen = false;
    for (auto& p : prefixes) seen |= (p == key);
    if (seen) continue;
    prefixes.push_back(key);
    // pseudo-random spatial position inside the data box so scaffolds share
    // no coordinates with each other or with lattice translates
    Rng srng(0x5CAFF01D ^ uint64_t(prefixes.size()));
    std::vector<double> pt(size_t(d), 0.0);
    for (int c2 = k; c2 < d; ++c2)
      pt[size_t(c2)] = lo + (hi - lo) * (0.25 + 0.5 * srng.uniform());
    for (int c2 = 0; c2 < k; ++c2)
      pt[size_t(c2)] = key[size_t(c2)] + far * points.bulge[size_t(i) * d + c2];
    sky.push_back(std::move(pt));
  }
  return sky;
}

}  // namespace

SimplicialMosaic delaunay(const PointSet& points, uint64_t seed) {
  const int d = points.dim;
  if (d < 1 || d > kMaxDim) throw input_error("delaunay: unsupported dimension");
  if (points.size() < d + 1) throw size_error("delaunay: need at least d+1 points");
  detail::BwEngine eng(d, points.unperturbed_prefix);
  for (int i = 0; i < points.size(); ++i) eng.add_point(points.point(i), points.id_of(i));
  uint32_t max_id = 0;
  for (int i = 0; i < points.size(); ++i) max_id = std::max(max_id, points.id_of(i));
  auto sky = layer_scaffolds(points);
  const uint32_t first_sky = uint32_t(points.size());
  std::vector<uint32_t> sky_pts;
  for (size_t j = 0; j < sky.size(); ++j)
    sky_pts.push_back(eng.add_point(sky[j].data(), max_id + 1 + uint32_t(j)));
  if (!points.bulge.empty()) {
    std::vector<double> bl = points.bulge;
    bl.resize(size_t(points.size() + int(sky.size())) * d, 0.0);
    eng.set_bulge(bl.data(), points.size() + int(sky.size()));
  }
  std::vector<uint32_t> order = sky_pts;
  {
    auto shuffled = std::vector<uint32_t>(size_t(points.size()));
    std::iota(shuffled.begin(), shuffled.end(), 0);
    Rng rng(seed, 0x0D31);
    for (size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    order.insert(order.end(), shuffled.begin(), shuffled.end());
  }
  eng.build(order, seed);

  SimplicialMosaic m;
  m.dim = d;
  m.top = d;
  m.periodic.assign(size_t(d), 0);
  m.vcoords.assign(eng.coords.begin(), eng.coords.begin() + size_t(points.size()) * d);
  m.vorig.resize(size_t(points.size()));
  for (int i = 0; i < points.size(); ++i) m.vorig[size_t(i)] = points.id_of(i);
  m.voff.assign(size_t(points.size()) * d, 0);

  const int cs = d + 1;
  // map engine cell -> compact id for adjacency; scaffold cells and any
  // residual zero-volume artifacts on flat hull faces are dropped
  std::vector<int32_t> compact(eng.alive.size(), -1);
  std::vector<uint32_t> engine_ids;
  for (uint32_t c = 0; c < eng.alive.size(); ++c) {
    if (!eng.alive[c] || eng.inf_slot[c] >= 0) continue;
    bool scaffold = false;
    for (int i = 0; i < cs; ++i) scaffold |= (eng.cv[size_t(c) * cs + i] >= first_sky);
    if (scaffold) continue;
    if (points.unperturbed_prefix > 0) {
      const double* verts[kMaxDim + 1];
      for (int i = 0; i < cs; ++i)
        verts[i] = eng.coords.data() + size_t(eng.cv[size_t(c) * cs + i]) * d;
      if (orientation(d, verts) == Sign::Zero) continue;
    }
    compact[c] = int32_t(engine_ids.size());
    engine_ids.push_back(c);
  }
  for (uint32_t ec : engine_ids) {
    std::array<int, kMaxDim + 1> perm{};
    std::iota(perm.begin(), perm.begin() + cs, 0);
    const uint32_t* verts = eng.cv.data() + size_t(ec) * cs;
    std::sort(perm.begin(), perm.begin() + cs,
              [&](int a, int b) { return verts[a] < verts[b]; });
    for (int i = 0; i < cs; ++i) m.cells.push_back(verts[perm[size_t(i)]]);
    for (int i = 0; i < cs; ++i) {
      uint32_t nb = eng.cn[size_t(ec) * cs + perm[size_t(i)]];
      bool gone = eng.inf_slot[nb] >= 0 || compact[nb] < 0;
      m.nbr.push_back(gone ? kBoundary : uint32_t(compact[nb]));
      for (int c2 = 0; c2 < d; ++c2) m.nshift.push_back(0);
    }
    for (int c2 = 0; c2 < d; ++c2) m.centers.push_back(eng.cc[size_t(ec) * d + c2]);
    m.radius2.push_back(eng.cr2[ec]);
    m.cc_flag.push_back(eng.cflag[ec]);
  }
  return m;
}

std::vector<std::vector<uint32_t>> delaunay_bruteforce(const PointSet& points) {
  const int d = points.dim;
  const int n = points.size();
  if (n < d + 1) throw size_error("bruteforce: need at least d+1 points");
  std::vector<std::vector<uint32_t>> out;
  std::vector<int> pick(size_t(d) + 1);
  for (int i = 0; i <= d; ++i) pick[size_t(i)] = i;
  while (true) {
    const double* pts[kMaxDim + 1];
    uint32_t pid[kMaxDim + 1];
    for (int i = 0; i <= d; ++i) {
      pts[i] = points.point(pick[size_t(i)]);
      pid[i] = points.id_of(pick[size_t(i)]);
    }
    const bool has_bulge = !points.bulge.empty();
    const double* outs[kMaxDim + 1];
    for (int i = 0; i <= d; ++i)
      outs[i] = has_bulge ? points.bulge.data() + size_t(pick[size_t(i)]) * d : nullptr;
    Sign orient = orientation_perturbed(d, pts, pid, nullptr, points.unperturbed_prefix,
                                        has_bulge ? outs : nullptr);
    bool empty = true;
    for (int q = 0; q < n && empty; ++q) {
      bool in_simplex = false;
      for (int i = 0; i <= d; ++i) in_simplex |= (pick[size_t(i)] == q);
      if (in_simplex) continue;
      Sign s = insphere_det_perturbed(
                   d, pts, pid, points.point(q), points.id_of(q), nullptr, 0,
                   points.unperturbed_prefix, has_bulge ? outs : nullptr,
                   has_bulge ? points.bulge.data() + size_t(q) * d : nullptr) *
               orient;
      if (s == Sign::Positive) empty = false;
    }
    if (empty) {
      std::vector<uint32_t> cell(pick.begin(), pick.end());
      out.push_back(cell);
    }
    int i = d;
    while (i >= 0 && pick[size_t(i)] == n - (d + 1 - i)) --i;
    if (i < 0) break;
    ++pick[size_t(i)];
    for (int j = i + 1; j <= d; ++j) pick[size_t(j)] = pick[size_t(j - 1)] + 1;
  }
  return out;
}

}  // namespace cdm
