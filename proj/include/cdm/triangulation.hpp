#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cdm/point_set.hpp"

namespace cdm {

constexpr uint32_t kBoundary = 0xFFFFFFFFu;
constexpr int kMaxDim = 6;

/// A Delaunay mosaic, bounded or the canonical quotient of a periodic input.
///
/// Vertices are "replicas": an original point index plus an integer offset on
/// each periodic coordinate (all zero for bounded inputs). Cells hold replica
/// ids; `nbr` crosses the facet opposite the same slot, and `nshift` is the
/// integer translation that moves the neighbor's stored copy so it actually
/// touches this cell's copy (always zero when bounded).
struct SimplicialMosaic {
  int dim = 0;  // ambient dimension
  int top = 0;  // dimension of the cells (= dim, except for tiny point sets)
  std::vector<uint8_t> periodic;  // per-coordinate mask

  // replica store
  std::vector<double> vcoords;   // nv * dim
  std::vector<uint32_t> vorig;   // nv
  std::vector<int8_t> voff;      // nv * dim

  // cells, each slot-sorted by (orig, offset)
  std::vector<uint32_t> cells;   // nc * (dim+1)
  std::vector<uint32_t> nbr;     // nc * (dim+1), kBoundary outside
  std::vector<int8_t> nshift;    // nc * (dim+1) * dim
  std::vector<double> centers;   // nc * dim
  std::vector<double> radius2;   // nc
  std::vector<uint8_t> cc_flag;  // circumcenter solve was ill-conditioned

  int n_verts() const { return int(vorig.size()); }
  int n_cells() const { return cells.empty() ? 0 : int(cells.size() / size_t(top + 1)); }
  int cell_size() const { return top + 1; }
  const uint32_t* cell(int c) const { return cells.data() + size_t(c) * (top + 1); }
  const double* vertex(int v) const { return vcoords.data() + size_t(v) * dim; }
  const int8_t* offset(int v) const { return voff.data() + size_t(v) * dim; }

  /// Packed (orig, offset) identity of a replica, usable as a map key.
  uint64_t packed(int v, const int8_t* shift = nullptr) const;

  /// Canonical face key: replicas sorted by identity, offsets normalized by a
  /// common shift. Two faces that are torus translates get equal keys.
  std::vector<uint64_t> face_key(const uint32_t* reps, int count) const;
};

/// Deduplicated p-faces; `reps` holds one representative replica tuple per
/// face, in key order.
struct FaceList {
  int p = 0;
  std::vector<uint32_t> reps;             // nf * (p+1)
  std::vector<std::vector<uint64_t>> keys;  // nf, each sorted
  int size() const { return int(keys.size()); }
  const uint32_t* face(int f) const { return reps.data() + size_t(f) * (p + 1); }
};

/// Delaunay mosaic of a bounded point set (>= d+1 points). The symbolically
/// perturbed input is triangulated, so the result is always simplicial.
SimplicialMosaic delaunay(const PointSet& points, uint64_t seed = 1);

/// Delaunay mosaic of the infinite periodic set, one canonical copy of each
/// cell: 3^k replication, keep cells whose circumcenter lands in [0,1)^k on
/// the periodic coordinates. Escalates to 5^k when a circumradius exceeds
/// 1/2 and raises replication_error if the two disagree.
SimplicialMosaic delaunay_periodic(const PointSet& points, uint64_t seed = 1);

/// All p-faces of all cells, deduplicated; empty for p above the top cell
/// dimension.
FaceList faces(const SimplicialMosaic& m, int p);

/// Mosaic of n <= d affinely independent (after perturbation) points: the
/// single full simplex on all of them. Used by the chromatic construction
/// for very small color classes.
SimplicialMosaic simplex_mosaic(const PointSet& points);

/// Circumcenter of a cell, recomputed from its replica coordinates.
std::vector<double> circumcenter(const SimplicialMosaic& m, int c);

/// Facet audit: every facet is shared by at most two cells, adjacency is
/// mutual, and interior/boundary counts are consistent. Throws on violation;
/// returns the number of boundary facets.
int validate_mosaic(const SimplicialMosaic& m);

/// Rebuild `nbr`/`nshift` from the cell list by matching normalized facet
/// keys. Facets with a single coface get kBoundary.
void wire_adjacency(SimplicialMosaic& m);

/// Brute force oracle: every (d+1)-subset whose perturbed circumsphere is
/// empty, as sorted index tuples. For cross-checking only (O(n^(d+2))).
std::vector<std::vector<uint32_t>> delaunay_bruteforce(const PointSet& points);

namespace detail {

/// Incremental Bowyer-Watson in dimension D over an explicit replica list.
/// Used by both the bounded and the periodic construction.
struct BwEngine {
  int D = 0;
  int skip = 0;  // leading coords exempt from the primary perturbation
  std::vector<double> coords;    // N * D
  std::vector<uint32_t> pids;    // N, perturbation keys
  std::vector<double> bulge;     // N * D outward bulge directions (optional)

  static constexpr uint32_t kInf = 0xFFFFFFFFu;
  std::vector<uint32_t> cv;      // cells * (D+1)
  std::vector<uint32_t> cn;      // cells * (D+1)
  std::vector<int8_t> inf_slot;  // -1 when finite
  std::vector<uint8_t> alive;
  std::vector<double> cc;        // cells * D
  std::vector<double> cr2;
  std::vector<uint8_t> cflag;

  explicit BwEngine(int dim, int skip_prefix = 0) : D(dim), skip(skip_prefix) {}
  int cs() const { return D + 1; }
  int n_cells() const { return int(alive.size()); }
  uint32_t add_point(const double* p, uint32_t pid);
  void set_bulge(const double* dirs, int n);

  /// Triangulates the points in `order` (indices into the point store).
  void build(const std::vector<uint32_t>& order, uint64_t seed);

  /// Finite alive cells, each as (D+1) point indices in slot order.
  std::vector<std::array<uint32_t, kMaxDim + 1>> finite_cells() const;

 private:
  std::vector<uint32_t> mark_;
  uint32_t epoch_ = 0;
  uint64_t walk_state_ = 0x1234567;
  std::vector<uint32_t> freelist_;
  uint32_t hint_ = 0;

  uint32_t alloc_cell();
  void set_circumdata(uint32_t c);
  bool conflict(uint32_t c, uint32_t q) const;
  uint32_t locate_conflict(uint32_t q);
  void insert(uint32_t q);
  void init_first_simplex(const std::vector<uint32_t>& first);
};

/// Long-double circumcenter solve in the frame of vertex 0. Returns false if
/// the system is numerically singular. y = center - v0.
bool circumcenter_translated(int D, const double* const* verts, long double* y,
                             double* r2);

/// Circumcenter of an m-simplex (m < D) within its affine hull in R^D.
bool circumcenter_lowrank(int D, int m, const double* const* verts, long double* y,
                          double* r2);

}  // namespace detail

}  // namespace cdm
