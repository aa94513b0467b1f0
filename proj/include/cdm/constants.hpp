#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdm {

/// Gamma function for x > 0, relative error well under 1e-12 (Lanczos).
double gamma_fn(double x);

/// (d-1)-dimensional volume of the unit sphere in R^d: 2 pi^(d/2) / Gamma(d/2).
double omega(int d);

/// The two families of skeleton/crossing constants and their combination
/// X(d) = 1/2 sum_p V(p,d) D(p,d), defined for d >= 2, 1 <= p <= d-1.
double V_const(int p, int d);
double D_const(int p, int d);
double X_const(int d);

/// Closed-form crossing density predictions for a unit-intensity-normalized
/// Poisson model. Returns nothing for the open (d >= 3, s+1 >= 3) case.
struct PlaneConfig {
  int s = 1;
  double rho = 1;
};
struct TwoColorConfig {
  int d = 2;
  double rho = 1;
};
struct BiasedPlaneConfig {
  double lambda = 0.5;
  double rho = 1;
};
double predicted_crossing_density(const PlaneConfig& c);        // 4s/pi * rho
std::optional<double> predicted_crossing_density(const TwoColorConfig& c);  // X(d) * rho
double predicted_crossing_density(const BiasedPlaneConfig& c);  // 8/pi sqrt(l(1-l)) rho

/// Census of a chromatic mosaic: full (s+1)-component color signature of every
/// face (all dimensions) -> count.
struct CountTable {
  int s = 0;
  int d = 0;
  std::map<std::vector<int>, long long> entries;

  long long at(const std::vector<int>& sig) const {
    auto it = entries.find(sig);
    return it == entries.end() ? 0 : it->second;
  }
  /// Sum of counts over faces with `total` vertices matching a predicate.
  long long total_faces(int p) const;  // all faces of dimension p
};

/// m_p: p-cells of the mono-chromatic Voronoi tessellations (mono signatures
/// of total d-p+1); n_p: colorful p-cells of the chromatic tessellation
/// (full-support signatures of total s+d-p+1); surplus = n_0 - m_0.
struct DensityReport {
  double rho = 0;
  std::vector<long long> m_p;  // index 0..d
  std::vector<long long> n_p;  // index 0..d
  long long surplus = 0;
  double normalized_crossings = 0;  // surplus / rho
};

DensityReport mp_np(const CountTable& table, double rho);

}  // namespace cdm
