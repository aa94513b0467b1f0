#pragma once

#include <cstdint>

#include "cdm/bigint.hpp"
#include "cdm/sign.hpp"

namespace cdm {

constexpr int kMaxDetDim = 8;

/// Row-major square matrix view with fixed capacity, used by both the
/// floating filter and the exact kernel.
struct DetMatrix {
  int n = 0;
  double a[kMaxDetDim * kMaxDetDim] = {};
  double& at(int i, int j) { return a[i * n + j]; }
  double at(int i, int j) const { return a[i * n + j]; }
};

/// Floating determinant with a conservative error bound. `value` is the LU
/// estimate, `bound` an upper bound on |value - det| that also absorbs the
/// rounding of squared-norm entries assembled by the caller.
struct FilteredDet {
  double value = 0;
  double bound = 0;
  bool decided() const;
  Sign sign() const;
};

FilteredDet filtered_det(const DetMatrix& m);

/// Sharper filter for matrices whose last column is all ones (the
/// homogeneous predicate family): evaluates the translated minor so the
/// error bound scales with the data spread, not its magnitude.
FilteredDet filtered_det_homogeneous(const DetMatrix& m);

/// Exact sign of the determinant of a matrix given as Dyadic entries
/// (row-major, n x n).
Sign exact_det_sign(const Dyadic* entries, int n);

/// Exact determinant value.
Dyadic exact_det(const Dyadic* entries, int n);

/// Determinant residue modulo an odd prime (entries as dyadic residues).
uint64_t det_mod(const uint64_t* entries, int n, uint64_t p);

/// Residue of a dyadic value modulo an odd prime.
uint64_t dyadic_mod(const Dyadic& v, uint64_t p);

}  // namespace cdm
