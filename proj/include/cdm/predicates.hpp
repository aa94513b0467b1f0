#pragma once

#include <cstdint>
#include <vector>

#include "cdm/sign.hpp"

namespace cdm {

// Exact-sign predicates in arbitrary dimension (d <= 6). Evaluation is
// two-stage: a floating determinant with a conservative forward error bound,
// then exact dyadic arithmetic when the filter cannot decide.
//
// The perturbed variants never return Zero. Point index i is treated as the
// symbolic perturbation key: conceptually every point moves to
//   x_i + eps * (t, t^2, ..., t^m),   t = i + 1,
// over its m perturbable coordinates (the trailing ones when a layered input
// exempts a prefix), and its paraboloid lift picks up an extra eps * t^(m+1),
// with eps an infinitesimal. Signs are read off the eps-expansion of the
// predicate determinant, so points sharing an index (periodic replicas)
// perturb in lockstep and the scheme is translation invariant. Layered
// constructions add two weaker scales: an outward convex bulge per layer
// (so flat layer faces triangulate as their own in-layer Delaunay mosaic)
// and replica-unique moment keys as the final resort for ties among lattice
// copies of one point.

/// Sign of the d x d edge-vector determinant of d+1 points; Positive for the
/// canonical basis in every dimension.
Sign orientation(int d, const double* const* pts);

/// orientation with ties broken by the perturbation schedule. `secondary`
/// optionally supplies per-replica keys for a second, infinitesimally weaker
/// perturbation level: periodic covers use it to resolve configurations that
/// are degenerate for every translation-invariant schedule (ties among
/// lattice copies of one point).
Sign orientation_perturbed(int d, const double* const* pts, const uint32_t* pids,
                           const uint32_t* secondary = nullptr, int skip_prefix = 0,
                           const double* const* outward = nullptr);

/// Positive iff q is strictly inside the circumsphere of the simplex, for any
/// vertex order (orientation compensated). Throws degeneracy_error on a flat
/// simplex.
Sign insphere(int d, const double* const* simplex, const double* q);

/// insphere with ties broken by the perturbation schedule; orientation
/// compensated like insphere, so the answer is independent of vertex order.
Sign insphere_perturbed(int d, const double* const* simplex, const uint32_t* spids,
                        const double* q, uint32_t qpid);

/// Perturbed lifted-determinant sign times (-1)^d: equals "q strictly inside
/// the perturbed circumsphere" when the simplex is positively oriented under
/// orientation_perturbed. This is the conflict test the triangulation uses.
/// `ssec`/`qsec` are the optional secondary keys (see orientation_perturbed).
Sign insphere_det_perturbed(int d, const double* const* simplex, const uint32_t* spids,
                            const double* q, uint32_t qpid,
                            const uint32_t* ssec = nullptr, uint32_t qsec = 0,
                            int skip_prefix = 0, const double* const* souts = nullptr,
                            const double* qout = nullptr);

/// Paraboloid lift: (x_1, ..., x_d) -> (x_1, ..., x_d, sum x_i^2).
std::vector<double> lift(const std::vector<double>& p);

}  // namespace cdm
