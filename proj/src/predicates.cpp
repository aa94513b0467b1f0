#include "cdm/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>

#include "cdm/errors.hpp"
#include "cdm/exact_det.hpp"

namespace cdm {

long long g_dbg_sameprefix = 0;
long long g_dbg_resolve_hist[8][8] = {};
long long g_dbg_cascade_orient = 0, g_dbg_cascade_insphere = 0, g_dbg_exact_det = 0,
          g_dbg_coeff_exact = 0, g_dbg_tuples = 0;

namespace {

// (-1)^d relates the homogeneous determinant, rows (x_i | 1), to the
// edge-vector determinant rooted at the first point.
int hom_parity(int d) { return (d & 1) ? -1 : 1; }

Sign hom_det_sign(const DetMatrix& m, const Dyadic* exact_entries) {
  FilteredDet f = filtered_det(m);
  if (f.decided()) return f.sign();
  f = filtered_det_homogeneous(m);
  if (f.decided()) return f.sign();
  return exact_det_sign(exact_entries, m.n);
}

void fill_orientation_matrices(int d, const double* const* pts, DetMatrix& m,
                               std::vector<Dyadic>& e) {
  const int n = d + 1;
  m.n = n;
  e.resize(size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      m.at(i, j) = pts[i][j];
      e[size_t(i) * n + j] = Dyadic::from_double(pts[i][j]);
    }
    m.at(i, d) = 1.0;
    e[size_t(i) * n + d] = Dyadic::from_int(1);
  }
}

Dyadic exact_norm2(int d, const double* p) {
  Dyadic s;
  for (int j = 0; j < d; ++j) {
    Dyadic c = Dyadic::from_double(p[j]);
    s = s + c * c;
  }
  return s;
}

void fill_lifted_matrices(int d, const double* const* pts, int n, DetMatrix& m,
                          std::vector<Dyadic>& e) {
  m.n = n;
  e.resize(size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    double norm2 = 0;
    for (int j = 0; j < d; ++j) {
      m.at(i, j) = pts[i][j];
      e[size_t(i) * n + j] = Dyadic::from_double(pts[i][j]);
      norm2 += pts[i][j] * pts[i][j];
    }
    m.at(i, d) = norm2;
    e[size_t(i) * n + d] = exact_norm2(d, pts[i]);
    m.at(i, d + 1) = 1.0;
    e[size_t(i) * n + d + 1] = Dyadic::from_int(1);
  }
}

// Perturbation row for point key t = pid+1: moment-curve powers over the
// perturbed coordinates. `skip` leading coordinates stay zero (the chromatic
// layer factor); `lifted` adds the next power in the weight column.
void fill_moment_row(uint32_t pid, int skip, int d, bool lifted, int n,
                     std::vector<Dyadic>& row) {
  row.assign(size_t(n), Dyadic());
  uint64_t t = uint64_t(pid) + 1;
  int cols = d - skip;
  for (int k = 1; k <= cols; ++k)
    row[size_t(skip + k - 1)] = Dyadic(BigInt::pow_uint(t, unsigned(k)), 0);
  if (lifted) row[size_t(d)] = Dyadic(BigInt::pow_uint(t, unsigned(cols + 1)), 0);
}

// Deterministic antisymmetric fallback for configurations the schedule cannot
// resolve (degeneracies among replicas of one point, which perturb in
// lockstep). Sign = parity of the permutation sorting rows by (pid, coords);
// translation of all points preserves the sorted order, so the quotient
// complex stays consistent.
Sign tie_break(int n, int d, const double* const* pts, const uint32_t* pids) {
  std::array<int, kMaxDetDim> idx{};
  std::iota(idx.begin(), idx.begin() + n, 0);
  auto less = [&](int a, int b) {
    if (pids[a] != pids[b]) return pids[a] < pids[b];
    return std::lexicographical_compare(pts[a], pts[a] + d, pts[b], pts[b] + d);
  };
  int swaps = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (less(idx[j], idx[i])) ++swaps;
  return (swaps & 1) ? Sign::Negative : Sign::Positive;
}

// Multi-scale expansion of det(A + t_0 L_0 + t_1 L_1 + ...) with
// t_0 >> t_1 >> ... all infinitesimal. Terms are ordered by the degree of
// the weakest scale first (it varies slowest), i.e. exponent tuples compare
// lexicographically from the last level backwards. Rows of an empty level
// are never chosen. Returns the sign of the first nonzero coefficient, or
// Zero when the whole polynomial vanishes.
// prefix_cols > 0 marks a same-layer tuple whose A rows contribute nothing
// to the first prefix_cols columns; a coefficient can only be nonzero if the
// chosen perturbation rows cover them. prefix_rank[k] is the column rank the
// rows of level k can contribute: 0 (in-layer moments), 1 shared across rows
// (a common bulge direction, encoded -1), or 1 per row (replica moments).
Sign cascade_sign_multi(int n, const std::vector<Dyadic>& a_rows,
                        const std::vector<std::vector<std::vector<Dyadic>>>& levels,
                        int prefix_cols = 0, const std::vector<int>& prefix_rank = {}) {
  const int L = int(levels.size());
  std::vector<std::vector<int>> tuples;
  auto cur = std::vector<int>(size_t(L), 0);
  while (true) {
    int total = 0;
    for (int v : cur) total += v;
    if (total > 0 && total <= n) tuples.push_back(cur);
    int i = 0;
    while (i < L && ++cur[size_t(i)] > n) cur[size_t(i++)] = 0;
    if (i == L) break;
  }
  std::sort(tuples.begin(), tuples.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });

  // double images of all rows for the coefficient filter, with every column
  // normalized by a power of two: the same columns appear in every term, so
  // the summed coefficient only scales by a positive factor
  auto a_dbl = std::vector<double>(size_t(n) * n);
  for (int i = 0; i < n * n; ++i) a_dbl[size_t(i)] = a_rows[size_t(i)].to_double();
  auto lv_dbl = std::vector<std::vector<double>>(size_t(L));
  for (int k = 0; k < L; ++k) {
    if (levels[size_t(k)].empty()) continue;
    lv_dbl[size_t(k)].resize(size_t(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        lv_dbl[size_t(k)][size_t(i) * n + j] =
            levels[size_t(k)][size_t(i)][size_t(j)].to_double();
  }
  for (int j = 0; j < n; ++j) {
    double cmax = 0;
    for (int i = 0; i < n; ++i) {
      cmax = std::max(cmax, std::fabs(a_dbl[size_t(i) * n + j]));
      for (int k = 0; k < L; ++k)
        if (!lv_dbl[size_t(k)].empty())
          cmax = std::max(cmax, std::fabs(lv_dbl[size_t(k)][size_t(i) * n + j]));
    }
    if (!(cmax > 0) || !std::isfinite(cmax)) continue;
    int e = 0;
    std::frexp(cmax, &e);
    double f2 = std::ldexp(1.0, -e);
    for (int i = 0; i < n; ++i) {
      a_dbl[size_t(i) * n + j] *= f2;
      for (int k = 0; k < L; ++k)
        if (!lv_dbl[size_t(k)].empty()) lv_dbl[size_t(k)][size_t(i) * n + j] *= f2;
    }
  }

  auto work = std::vector<Dyadic>(size_t(n) * n);
  auto assign = std::vector<int>(size_t(n));
  std::vector<uint64_t> res_cache[2];
  for (const auto& tup : tuples) {
    bool feasible = true;
    for (int k = 0; k < L; ++k)
      if (tup[size_t(k)] > 0 && levels[size_t(k)].empty()) feasible = false;
    if (feasible && prefix_cols > 0) {
      int cover = 0;
      for (int k = 0; k < L && k < int(prefix_rank.size()); ++k) {
        if (tup[size_t(k)] == 0) continue;
        if (prefix_rank[size_t(k)] < 0)
          cover += std::min(tup[size_t(k)], -prefix_rank[size_t(k)]);
        else
          cover += prefix_rank[size_t(k)] * tup[size_t(k)];
      }
      if (cover < prefix_cols) feasible = false;  // prefix columns uncovered
    }
    if (!feasible) continue;

    // enumerate the disjoint row assignments for this exponent tuple once
    std::vector<std::vector<int>> assignments;
    std::fill(assign.begin(), assign.end(), -1);
    std::function<void(int)> enumerate = [&](int level) {
      if (level == L) {
        assignments.push_back(assign);
        return;
      }
      int need = tup[size_t(level)];
      if (need == 0) {
        enumerate(level + 1);
        return;
      }
      std::vector<int> freeslots;
      for (int i = 0; i < n; ++i)
        if (assign[size_t(i)] < 0) freeslots.push_back(i);
      if (int(freeslots.size()) < need) return;
      auto pick = std::vector<int>(size_t(need));
      std::iota(pick.begin(), pick.end(), 0);
      while (true) {
        for (int j = 0; j < need; ++j) assign[size_t(freeslots[size_t(pick[size_t(j)])])] = level;
        enumerate(level + 1);
        for (int j = 0; j < need; ++j) assign[size_t(freeslots[size_t(pick[size_t(j)])])] = -1;
        int i = need - 1;
        while (i >= 0 && pick[size_t(i)] == int(freeslots.size()) - (need - i)) --i;
        if (i < 0) break;
        ++pick[size_t(i)];
        for (int j = i + 1; j <= need - 1; ++j) pick[size_t(j)] = pick[size_t(j - 1)] + 1;
      }
    };
    enumerate(0);
    if (assignments.empty()) continue;

    // filtered pass: sum of LU determinants with accumulated error bounds;
    // doubled to absorb the rounding of the row images themselves
    double value = 0, bound = 0;
    for (const auto& as : assignments) {
      DetMatrix m;
      m.n = n;
      for (int i = 0; i < n; ++i) {
        const double* srcrow = as[size_t(i)] < 0 ? a_dbl.data() + size_t(i) * n
                                                 : lv_dbl[size_t(as[size_t(i)])].data() + size_t(i) * n;
        std::copy(srcrow, srcrow + n, m.a + size_t(i) * n);
      }
      FilteredDet f = filtered_det(m);
      value += f.value;
      bound += 2.0 * f.bound;
    }
    if (std::isfinite(value) && std::isfinite(bound) && (value > bound || value < -bound))
      return sign_of(value);

    // modular zero test first: coefficients that vanish identically are the
    // common case on structurally degenerate tuples, and two independent
    // 61/63-bit primes dismiss them in microseconds. Row residues are cached
    // across the whole cascade.
    ++g_dbg_coeff_exact;
    static constexpr uint64_t kPrimes[2] = {(uint64_t(1) << 61) - 1,
                                            9223372036854775783ULL};
    if (res_cache[0].empty()) {
      for (int pi = 0; pi < 2; ++pi) {
        res_cache[pi].resize(size_t(L + 1) * n * n, 0);
        for (int i = 0; i < n * n; ++i)
          res_cache[pi][size_t(i)] = dyadic_mod(a_rows[size_t(i)], kPrimes[pi]);
        for (int k = 0; k < L; ++k) {
          if (levels[size_t(k)].empty()) continue;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              res_cache[pi][size_t(k + 1) * n * n + size_t(i) * n + j] =
                  dyadic_mod(levels[size_t(k)][size_t(i)][size_t(j)], kPrimes[pi]);
        }
      }
    }
    bool maybe_nonzero = false;
    for (int pi = 0; pi < 2 && !maybe_nonzero; ++pi) {
      const uint64_t p = kPrimes[pi];
      uint64_t sum = 0;
      auto res = std::vector<uint64_t>(size_t(n) * n);
      for (const auto& as : assignments) {
        for (int i = 0; i < n; ++i) {
          int srcidx = as[size_t(i)] < 0 ? 0 : as[size_t(i)] + 1;
          const uint64_t* srcrow =
              res_cache[pi].data() + size_t(srcidx) * n * n + size_t(i) * n;
          std::copy(srcrow, srcrow + n, res.begin() + size_t(i) * n);
        }
        sum = (sum + det_mod(res.data(), n, p)) % p;
      }
      maybe_nonzero = (sum != 0);
    }
    if (!maybe_nonzero) continue;

    // exact pass for the sign
    Dyadic coeff;
    for (const auto& as : assignments) {
      for (int i = 0; i < n; ++i) {
        const Dyadic* srcrow = as[size_t(i)] < 0
                                   ? a_rows.data() + size_t(i) * n
                                   : levels[size_t(as[size_t(i)])][size_t(i)].data();
        std::copy(srcrow, srcrow + n, work.begin() + size_t(i) * n);
      }
      coeff = coeff + exact_det(work.data(), n);
    }
    if (!coeff.is_zero()) {
      if (tup.size() == 2) ++g_dbg_resolve_hist[std::min(7, tup[0])][std::min(7, tup[1])];
      if (tup.size() == 3)
        ++g_dbg_resolve_hist[std::min(7, tup[1])][std::min(7, tup[2])];
      return sign_of_int(coeff.sign());
    }
  }
  return Sign::Zero;
}

// Number of distinct layer prefixes among n rows (bitwise comparison).
int count_layers(int n, int skip, const double* const* pts) {
  int distinct = 0;
  for (int i = 0; i < n; ++i) {
    bool seen = false;
    for (int j = 0; j < i && !seen; ++j) {
      bool eq = true;
      for (int c = 0; c < skip; ++c) eq &= (pts[i][c] == pts[j][c]);
      seen = eq;
    }
    if (!seen) ++distinct;
  }
  return distinct;
}

// Anisotropic convex magnitude of the perturbed (spatial) coordinates:
// sum (1 + (c-skip+1)/16) x_c^2, exactly. Anisotropy keeps the bulge column
// independent of the paraboloid lift column, which uses the plain norm.
Dyadic exact_bulge_magnitude(const double* p, int skip, int d) {
  Dyadic s;
  for (int c = skip; c < d; ++c) {
    Dyadic v = Dyadic::from_double(p[c]);
    s = s + Dyadic(BigInt(17 + c - skip), -4) * v * v;
  }
  return s;
}

// Bulge row: outward direction scaled by the convex magnitude; weight and
// homogeneous entries zero. The bulge pushes every layer outward so flat
// layer faces resolve convexly and never become interior cells.
void fill_bulge_row(const double* outward, const double* coords, int skip, int d, int n,
                    std::vector<Dyadic>& row) {
  row.assign(size_t(n), Dyadic());
  Dyadic g = exact_bulge_magnitude(coords, skip, d);
  for (int c = 0; c < d; ++c) {
    if (outward[c] == 0.0) continue;
    row[size_t(c)] = Dyadic::from_double(outward[c]) * g;
  }
}

void check_duplicates(int n, int d, const double* const* pts, const uint32_t* pids) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (pids[i] == pids[j] && std::equal(pts[i], pts[i] + d, pts[j]))
        throw input_error("duplicate point (same coordinates and same index)");
}

}  // namespace

Sign orientation(int d, const double* const* pts) {
  if (d < 1 || d + 1 > kMaxDetDim) throw input_error("orientation: unsupported dimension");
  DetMatrix m;
  std::vector<Dyadic> e;
  fill_orientation_matrices(d, pts, m, e);
  Sign s = hom_det_sign(m, e.data());
  return s * sign_of_int(hom_parity(d));
}

Sign orientation_perturbed(int d, const double* const* pts, const uint32_t* pids,
                           const uint32_t* secondary, int skip_prefix,
                           const double* const* outward) {
  const int n = d + 1;
  // points of one layer share the exempt prefix, which keeps them affinely
  // dependent under every primary motion: the raw test and the primary
  // level vanish identically
  bool same_prefix = skip_prefix > 0;
  for (int i = 1; i < n && same_prefix; ++i)
    for (int c = 0; c < skip_prefix; ++c) same_prefix &= (pts[i][c] == pts[0][c]);
  Sign raw = same_prefix ? Sign::Zero : orientation(d, pts);
  if (raw != Sign::Zero) return raw;
  check_duplicates(n, d, pts, pids);
  auto a = std::vector<Dyadic>(size_t(n) * n);
  DetMatrix m;
  fill_orientation_matrices(d, pts, m, a);
  std::vector<std::vector<std::vector<Dyadic>>> levels;
  if (!same_prefix) {
    levels.emplace_back(size_t(n));
    for (int i = 0; i < n; ++i)
      fill_moment_row(pids[i], skip_prefix, d, false, n, levels.back()[size_t(i)]);
  }
  if (outward) {
    levels.emplace_back(size_t(n));
    for (int i = 0; i < n; ++i)
      fill_bulge_row(outward[i], pts[i], skip_prefix, d, n, levels.back()[size_t(i)]);
  }
  if (secondary) {
    levels.emplace_back(size_t(n));
    for (int i = 0; i < n; ++i)
      fill_moment_row(secondary[i], 0, d, false, n, levels.back()[size_t(i)]);
  }
  ++g_dbg_cascade_orient;
  Sign s = cascade_sign_multi(n, a, levels);
  if (s != Sign::Zero) return s * sign_of_int(hom_parity(d));
  return tie_break(n, d, pts, pids);
}

Sign insphere(int d, const double* const* simplex, const double* q) {
  if (d < 1 || d + 2 > kMaxDetDim) throw input_error("insphere: unsupported dimension");
  Sign orient = orientation(d, simplex);
  if (orient == Sign::Zero) throw degeneracy_error("insphere: flat simplex");
  const int n = d + 2;
  std::array<const double*, kMaxDetDim> pts{};
  for (int i = 0; i <= d; ++i) pts[size_t(i)] = simplex[i];
  pts[size_t(d) + 1] = q;
  DetMatrix m;
  std::vector<Dyadic> e;
  fill_lifted_matrices(d, pts.data(), n, m, e);
  Sign s = hom_det_sign(m, e.data());
  return s * orient * sign_of_int(hom_parity(d));
}

Sign insphere_det_perturbed(int d, const double* const* simplex, const uint32_t* spids,
                            const double* q, uint32_t qpid, const uint32_t* ssec,
                            uint32_t qsec, int skip_prefix, const double* const* souts,
                            const double* qout) {
  if (d < 1 || d + 2 > kMaxDetDim) throw input_error("insphere: unsupported dimension");
  const int n = d + 2;
  std::array<const double*, kMaxDetDim> pts{};
  std::array<uint32_t, kMaxDetDim> pids{};
  std::array<uint32_t, kMaxDetDim> sec{};
  std::array<const double*, kMaxDetDim> outs{};
  for (int i = 0; i <= d; ++i) {
    pts[size_t(i)] = simplex[i];
    pids[size_t(i)] = spids[i];
    sec[size_t(i)] = ssec ? ssec[i] : spids[i];
    outs[size_t(i)] = souts ? souts[i] : nullptr;
  }
  pts[size_t(d) + 1] = q;
  pids[size_t(d) + 1] = qpid;
  sec[size_t(d) + 1] = ssec ? qsec : qpid;
  outs[size_t(d) + 1] = qout;
  check_duplicates(n, d, pts.data(), pids.data());

  // a tuple inside lambda layer flats is affinely dependent together with
  // its paraboloid lift whenever lambda <= skip, and stays so under the
  // layer-preserving primary motions: the raw test and the whole primary
  // level vanish identically
  const int lambda = skip_prefix > 0 ? count_layers(n, skip_prefix, pts.data()) : 1;
  const bool structural = skip_prefix > 0 && lambda <= skip_prefix;

  DetMatrix m;
  std::vector<Dyadic> a;
  fill_lifted_matrices(d, pts.data(), n, m, a);
  Sign s = structural ? Sign::Zero : hom_det_sign(m, a.data());
  if (s == Sign::Zero) {
    // single layer coordinate: the first bulge coefficient factors into one
    // bordered determinant det[(g_i | spatial_i | w_i | 1)]
    if (lambda == 1 && skip_prefix == 1 && souts && qout) {
      bool same_dir = (qout[0] == souts[0][0]);
      for (int i = 1; i <= d && same_dir; ++i) same_dir &= (souts[i][0] == souts[0][0]);
      if (same_dir && souts[0][0] != 0.0) {
        DetMatrix bm;
        bm.n = n;
        std::vector<Dyadic> be(size_t(n) * n);
        for (int i = 0; i < n; ++i) {
          Dyadic g = exact_bulge_magnitude(pts[size_t(i)], 1, d);
          bm.at(i, 0) = g.to_double();
          be[size_t(i) * n] = g;
          double w = 0;
          Dyadic we;
          for (int c = 1; c < d; ++c) {
            bm.at(i, c) = pts[size_t(i)][c];
            Dyadic v = Dyadic::from_double(pts[size_t(i)][c]);
            be[size_t(i) * n + c] = v;
            w += pts[size_t(i)][c] * pts[size_t(i)][c];
            we = we + v * v;
          }
          bm.at(i, d) = w;
          be[size_t(i) * n + d] = we;
          bm.at(i, d + 1) = 1.0;
          be[size_t(i) * n + d + 1] = Dyadic::from_int(1);
        }
        Sign bd = hom_det_sign(bm, be.data());
        if (bd != Sign::Zero)
          return bd * sign_of(souts[0][0]) * sign_of_int(hom_parity(d));
      }
    }
    std::vector<std::vector<std::vector<Dyadic>>> levels;
    std::vector<int> prefix_rank;
    if (!structural) {
      levels.emplace_back(size_t(n));
      for (int i = 0; i < n; ++i)
        fill_moment_row(pids[size_t(i)], skip_prefix, d, true, n, levels.back()[size_t(i)]);
      prefix_rank.push_back(0);
    }
    if (souts && qout) {
      levels.emplace_back(size_t(n));
      for (int i = 0; i < n; ++i)
        fill_bulge_row(outs[size_t(i)], pts[size_t(i)], skip_prefix, d, n,
                       levels.back()[size_t(i)]);
      prefix_rank.push_back(-lambda);
    }
    if (ssec) {
      levels.emplace_back(size_t(n));
      for (int i = 0; i < n; ++i)
        fill_moment_row(sec[size_t(i)], 0, d, true, n, levels.back()[size_t(i)]);
      prefix_rank.push_back(1);
    }
    ++g_dbg_cascade_insphere;
    if (g_dbg_cascade_insphere <= 8) {
      fprintf(stderr, "[icasc] d=%d skip=%d lambda=%d structural=%d pids:", d,
              skip_prefix, lambda, int(structural));
      for (int i = 0; i < n; ++i) fprintf(stderr, " %u", pids[size_t(i)]);
      fprintf(stderr, "\n");
      for (int i = 0; i < n; ++i) {
        fprintf(stderr, "  row %d pid=%u:", i, pids[size_t(i)]);
        for (int c = 0; c < d; ++c) fprintf(stderr, " %.17g", pts[size_t(i)][c]);
        fprintf(stderr, "\n");
      }
    }
    s = cascade_sign_multi(n, a, levels, structural ? skip_prefix - (lambda - 1) : 0,
                           prefix_rank);
    if (s == Sign::Zero) s = tie_break(n, d, pts.data(), pids.data());
  }
  return s * sign_of_int(hom_parity(d));
}

Sign insphere_perturbed(int d, const double* const* simplex, const uint32_t* spids,
                        const double* q, uint32_t qpid) {
  Sign raw_orient = orientation(d, simplex);
  if (raw_orient != Sign::Zero) {
    Sign raw = insphere(d, simplex, q);
    if (raw != Sign::Zero) return raw;
  }
  // Degenerate: the perturbed determinant compensated by the perturbed
  // orientation, so the answer stays independent of vertex order.
  return insphere_det_perturbed(d, simplex, spids, q, qpid) *
         orientation_perturbed(d, simplex, spids);
}

std::vector<double> lift(const std::vector<double>& p) {
  std::vector<double> r = p;
  double s = 0;
  for (double c : p) s += c * c;
  r.push_back(s);
  return r;
}

}  // namespace cdm
