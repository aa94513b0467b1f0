#pragma once

#include <cstdint>
#include <vector>

#include "cdm/errors.hpp"

namespace cdm {

/// A finite set of d-dimensional points. The position in `coords` is the
/// point's identity (its index), which also keys the symbolic perturbation.
/// `periodic[c] != 0` marks coordinate c as living on the unit circle [0,1).
struct PointSet {
  int dim = 0;
  std::vector<double> coords;     // n * dim, row-major
  std::vector<uint8_t> periodic;  // size dim, or empty when fully bounded
  std::vector<uint32_t> ids;      // optional explicit identities; empty = position
  // leading coordinates exempt from the primary perturbation: the chromatic
  // layer factor, which must stay an exact d-flat per color
  int unperturbed_prefix = 0;
  // optional n*dim outward bulge directions (layered inputs): the weak
  // perturbation scale that resolves flat layer faces convexly
  std::vector<double> bulge;

  PointSet() = default;
  explicit PointSet(int d) : dim(d), periodic(size_t(d), 0) {}

  int size() const { return dim == 0 ? 0 : int(coords.size() / size_t(dim)); }
  const double* point(int i) const { return coords.data() + size_t(i) * dim; }
  double* point(int i) { return coords.data() + size_t(i) * dim; }

  void add(const std::vector<double>& p) {
    if (int(p.size()) != dim) throw input_error("point dimension mismatch");
    coords.insert(coords.end(), p.begin(), p.end());
  }

  uint32_t id_of(int i) const { return ids.empty() ? uint32_t(i) : ids[size_t(i)]; }

  int torus_rank() const {
    int k = 0;
    for (uint8_t b : periodic) k += (b != 0);
    return k;
  }
  bool any_periodic() const { return torus_rank() > 0; }

  /// Snap periodic coordinates to multiples of 2^-30 so that +-1 offsets of
  /// replicas are exact in double arithmetic. Bounded coordinates untouched.
  void quantize_periodic();
};

/// chi: point index -> color in {0, ..., s}.
struct Coloring {
  int s = 0;
  std::vector<uint8_t> chi;

  int num_colors() const { return s + 1; }
  int color(int i) const { return chi[size_t(i)]; }
  std::vector<int> class_sizes() const {
    std::vector<int> c(size_t(s) + 1, 0);
    for (uint8_t v : chi) ++c[v];
    return c;
  }
};

inline int min_class_size(const Coloring& chi) {
  int m = int(chi.chi.size());
  for (int v : chi.class_sizes()) m = v < m ? v : m;
  return m;
}

}  // namespace cdm
