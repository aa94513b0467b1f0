#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cdm/point_set.hpp"
#include "cdm/rng.hpp"

namespace cdm {

/// Number of points of a Poisson(rho) draw; exact inversion, chunked so the
/// running product never underflows.
int poisson_count(double rho, Rng& rng);

/// Stationary Poisson process on the unit d-torus [0,1)^d with intensity rho
/// (points per unit volume). Coordinates are quantized for periodic use.
PointSet poisson_torus(double rho, int d, uint64_t seed);

/// i.i.d. coloring of A with s+1 colors. `weights` (size s+1, summing to 1)
/// biases the draw; colors come from thresholding one uniform per point, so
/// runs with equal seeds and different weights share randomness.
Coloring random_coloring(const PointSet& a, int s, uint64_t seed,
                         const std::vector<double>* weights = nullptr);

struct GridSample {
  PointSet points;
  double density = 0;  // max pairwise distance / min pairwise distance
};

/// ceil(n^(1/d))^d lattice points at unit spacing with uniform jitter in
/// [-jitter, jitter] per coordinate; density measured by exact O(n^2) scan.
GridSample perturbed_grid(int n, double jitter, int d, uint64_t seed);

/// Points (t, t^2, ..., t^d) at t = i/n, i = 1..n.
PointSet moment_curve(int n, int d);

/// Exact pairwise density scan (exposed for tests).
double set_density(const PointSet& a);

}  // namespace cdm
