#pragma once

#include <cstdint>
#include <vector>

#include "cdm/point_set.hpp"

namespace cdm {

/// Spherical k-set oracle for |A| <= 16 points (bitmask representation).
struct KSetReport {
  int k = 0;
  std::vector<uint32_t> subsets;  // index bitmasks, sorted
  long long count = 0;
  /// Subsets of size k separable with B *outside* the sphere (the symmetric
  /// reading of "separates"), reported for transparency.
  long long outside_count = 0;
};

/// True iff some sphere (or halfspace, as a limit) has B strictly inside and
/// A \ B strictly outside, decided exactly on the symbolically perturbed
/// points: a separating sphere exists iff one through d+1 of the points does,
/// with the on-points assignable to either side by an infinitesimal tilt.
bool is_separable(const std::vector<int>& b, const PointSet& a);

KSetReport spherical_ksets(const PointSet& a, int k);

/// All sizes at once (shares the candidate-sphere enumeration).
std::vector<KSetReport> spherical_ksets_all(const PointSet& a);

}  // namespace cdm
