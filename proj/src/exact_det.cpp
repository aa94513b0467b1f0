#include "cdm/exact_det.hpp"

#include <cmath>
#include <cstring>
#include <vector>

namespace cdm {

namespace {
// 2^(2n+12) * u with u = 2^-53. Generous over the worst-case forward error
// of an LU determinant with partial pivoting at n <= 8 (growth factor
// <= 2^(n-1), elimination constant ~n^3) plus the entry rounding slack the
// callers introduce when assembling lifted coordinates. The exact kernel
// backs every undecided case, so the only cost of slack here is speed.
double err_scale(int n) { return std::ldexp(1.0, 2 * n + 12 - 53); }
}  // namespace

bool FilteredDet::decided() const {
  return std::isfinite(value) && std::isfinite(bound) &&
         (value > bound || value < -bound);
}

Sign FilteredDet::sign() const { return sign_of(value); }

FilteredDet filtered_det_homogeneous(const DetMatrix& m) {
  // The last column is all ones: subtracting the last row from the others
  // and dropping that column leaves the determinant unchanged, and the
  // Hadamard bound then lives at the cluster scale of the data. The
  // subtraction error is carried explicitly per row.
  const int full = m.n;
  const int n = full - 1;
  constexpr double u = 0x1.0p-53;
  DetMatrix t;
  t.n = n;
  double row_norm[kMaxDetDim], row_delta[kMaxDetDim];
  for (int i = 0; i < n; ++i) {
    double norm2 = 0, delta2 = 0;
    for (int j = 0; j < n; ++j) {
      double a = m.at(i, j), b = m.at(full - 1, j);
      double e = a - b;
      t.at(i, j) = e;
      norm2 += e * e;
      double de = u * (std::fabs(a) + std::fabs(b) + std::fabs(e));
      delta2 += de * de;
    }
    row_norm[i] = std::sqrt(norm2);
    row_delta[i] = std::sqrt(delta2);
  }
  // normalize each row by a power of two (exact), so wildly different row
  // scales (scaffold vertices vs local data) cannot starve the filter
  double inv_scale = 1.0;
  for (int i = 0; i < n; ++i) {
    if (!(row_norm[i] > 0) || !std::isfinite(row_norm[i])) continue;
    int e = 0;
    std::frexp(row_norm[i], &e);
    double f2 = std::ldexp(1.0, -e);
    for (int j = 0; j < n; ++j) t.at(i, j) *= f2;
    row_norm[i] *= f2;
    row_delta[i] *= f2;
    inv_scale *= f2;
  }
  FilteredDet f = filtered_det(t);
  // |det(A+D) - det(A)| <= sum_i ||D_i|| * prod_{r != i} ||A_r + D_r||
  double extra = 0;
  for (int i = 0; i < n; ++i) {
    double prod = 1;
    for (int r = 0; r < n; ++r)
      if (r != i) prod *= row_norm[r] + row_delta[r];
    extra += row_delta[i] * prod;
  }
  f.bound += 2.0 * extra;
  (void)inv_scale;  // sign-only use: positive scaling never flips it
  return f;
}

FilteredDet filtered_det(const DetMatrix& m) {
  const int n = m.n;
  double lu[kMaxDetDim * kMaxDetDim];
  std::memcpy(lu, m.a, sizeof(double) * n * n);

  // Hadamard bound on |det| from the original rows.
  double had = 1.0;
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int j = 0; j < n; ++j) s += m.at(i, j) * m.at(i, j);
    had *= std::sqrt(s);
  }

  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(lu[k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      double v = std::fabs(lu[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) {
      det = 0.0;
      break;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[piv * n + j]);
      det = -det;
    }
    det *= lu[k * n + k];
    double inv = 1.0 / lu[k * n + k];
    for (int i = k + 1; i < n; ++i) {
      double f = lu[i * n + k] * inv;
      for (int j = k + 1; j < n; ++j) lu[i * n + j] -= f * lu[k * n + j];
    }
  }

  FilteredDet r;
  r.value = det;
  r.bound = err_scale(n) * had;
  return r;
}

namespace {

// Scale every entry by a common 2^E so all become integers; positive uniform
// scaling preserves both the sign and (after undoing 2^(nE)) the value.
struct ScaledMatrix {
  std::vector<BigInt> e;  // n*n
  int n = 0;
  int total_shift = 0;  // det(scaled) = det(true) * 2^total_shift
};

ScaledMatrix scale_common(const Dyadic* entries, int n) {
  int min_exp = 0;
  bool any = false;
  for (int i = 0; i < n * n; ++i) {
    if (!entries[i].is_zero()) {
      if (!any || entries[i].exp2 < min_exp) min_exp = entries[i].exp2;
      any = true;
    }
  }
  if (!any) min_exp = 0;
  ScaledMatrix s;
  s.n = n;
  s.e.resize(n * n);
  for (int i = 0; i < n * n; ++i) {
    if (entries[i].is_zero()) continue;
    s.e[i] = entries[i].num.shifted_left(unsigned(entries[i].exp2 - min_exp));
  }
  s.total_shift = -min_exp * n;
  return s;
}

// Division-free determinant by dynamic programming over column subsets:
// state[mask] = minor of the first popcount(mask) rows on columns in mask.
BigInt det_bigint(const std::vector<BigInt>& a, int n) {
  std::vector<BigInt> cur(1 << n), next;
  cur[0] = BigInt(1);
  for (int row = 0; row < n; ++row) {
    next.assign(1 << n, BigInt());
    for (int mask = 0; mask < (1 << n); ++mask) {
      if (__builtin_popcount(unsigned(mask)) != row) continue;
      if (cur[mask].is_zero()) continue;
      int below = 0;
      for (int col = 0; col < n; ++col) {
        if (mask & (1 << col)) {
          ++below;
          continue;
        }
        const BigInt& entry = a[row * n + col];
        if (!entry.is_zero()) {
          BigInt term = cur[mask] * entry;
          // inversions added by sigma(row) = col
          if ((row - below) & 1) term = -term;
          next[mask | (1 << col)] += term;
        }
      }
    }
    cur.swap(next);
  }
  return cur[(1 << n) - 1];
}

}  // namespace

namespace {
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return uint64_t((unsigned __int128)a * b % p);
}
uint64_t powmod(uint64_t b, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}
}  // namespace

uint64_t dyadic_mod(const Dyadic& v, uint64_t p) {
  if (v.is_zero()) return 0;
  uint64_t m = v.num.mod_u64(p);
  if (v.exp2 >= 0) return mulmod(m, powmod(2, uint64_t(v.exp2), p), p);
  uint64_t inv2 = (p + 1) / 2;  // 2^{-1} mod odd p
  return mulmod(m, powmod(inv2, uint64_t(-int64_t(v.exp2)), p), p);
}

uint64_t det_mod(const uint64_t* entries, int n, uint64_t p) {
  // same division-free DP over column subsets as the exact kernel
  std::vector<uint64_t> cur(size_t(1) << n, 0), next;
  cur[0] = 1 % p;
  for (int row = 0; row < n; ++row) {
    next.assign(size_t(1) << n, 0);
    for (int mask = 0; mask < (1 << n); ++mask) {
      if (__builtin_popcount(unsigned(mask)) != row) continue;
      if (cur[size_t(mask)] == 0) continue;
      int below = 0;
      for (int col = 0; col < n; ++col) {
        if (mask & (1 << col)) {
          ++below;
          continue;
        }
        uint64_t e = entries[size_t(row) * n + col];
        if (e == 0) continue;
        uint64_t term = mulmod(cur[size_t(mask)], e, p);
        size_t idx = size_t(mask | (1 << col));
        if ((row - below) & 1)
          next[idx] = (next[idx] + p - term) % p;
        else
          next[idx] = (next[idx] + term) % p;
      }
    }
    cur.swap(next);
  }
  return cur[(size_t(1) << n) - 1];
}

Sign exact_det_sign(const Dyadic* entries, int n) {
  ScaledMatrix s = scale_common(entries, n);
  return sign_of_int(det_bigint(s.e, n).sign());
}

Dyadic exact_det(const Dyadic* entries, int n) {
  ScaledMatrix s = scale_common(entries, n);
  BigInt d = det_bigint(s.e, n);
  return Dyadic(std::move(d), -s.total_shift);
}

}  // namespace cdm
