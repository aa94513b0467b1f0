#include "cdm/ksets.hpp"

#include <algorithm>
#include <set>

#include "cdm/errors.hpp"
#include "cdm/predicates.hpp"

namespace cdm {

namespace {

constexpr int kOracleScale = 16;

void check_scale(const PointSet& a) {
  if (a.size() > kOracleScale) throw scale_error("ksets: oracle limited to 16 points");
}

// side of every point w.r.t. the perturbed circumsphere of support S
// (compensated, so "inside" is well defined): +1 inside, -1 outside
void sphere_sides(const PointSet& a, const std::vector<int>& support, int* side) {
  const int d = a.dim;
  const double* pts[kOracleScale];
  uint32_t pid[kOracleScale];
  for (int i = 0; i <= d; ++i) {
    pts[i] = a.point(support[size_t(i)]);
    pid[i] = a.id_of(support[size_t(i)]);
  }
  Sign orient = orientation_perturbed(d, pts, pid);
  for (int q = 0; q < a.size(); ++q) {
    side[q] = 0;
    bool in_support = false;
    for (int i = 0; i <= d; ++i) in_support |= (support[size_t(i)] == q);
    if (in_support) continue;
    Sign s = insphere_det_perturbed(d, pts, pid, a.point(q), a.id_of(q)) * orient;
    side[q] = to_int(s);
  }
}

template <typename Fn>
void for_each_support(int n, int d, Fn&& fn) {
  std::vector<int> pick(size_t(d) + 1);
  for (int i = 0; i <= d; ++i) pick[size_t(i)] = i;
  if (n < d + 1) return;
  while (true) {
    fn(pick);
    int i = d;
    while (i >= 0 && pick[size_t(i)] == n - (d + 1 - i)) --i;
    if (i < 0) break;
    ++pick[size_t(i)];
    for (int j = i + 1; j <= d; ++j) pick[size_t(j)] = pick[size_t(j - 1)] + 1;
  }
}

}  // namespace

bool is_separable(const std::vector<int>& b, const PointSet& a) {
  check_scale(a);
  const int n = a.size(), d = a.dim;
  if (n <= d + 1) return true;  // perturbed points are affinely independent
  std::vector<char> in_b(size_t(n), 0);
  for (int i : b) {
    if (i < 0 || i >= n) throw input_error("is_separable: index out of range");
    in_b[size_t(i)] = 1;
  }
  bool found = false;
  int side[kOracleScale];
  for_each_support(n, d, [&](const std::vector<int>& support) {
    if (found) return;
    sphere_sides(a, support, side);
    bool ok = true;
    for (int q = 0; q < n && ok; ++q) {
      if (side[q] == 0) continue;  // support points: either side reachable
      if (in_b[size_t(q)] && side[q] != 1) ok = false;
      if (!in_b[size_t(q)] && side[q] != -1) ok = false;
    }
    found = ok;
  });
  return found;
}

std::vector<KSetReport> spherical_ksets_all(const PointSet& a) {
  check_scale(a);
  const int n = a.size(), d = a.dim;
  if (n == 0) throw input_error("ksets: empty set");
  std::vector<std::set<uint32_t>> by_size(size_t(n) + 1);
  if (n <= d + 1) {
    for (uint32_t m = 1; m < (1u << n); ++m) by_size[size_t(__builtin_popcount(m))].insert(m);
  } else {
    int side[kOracleScale];
    for_each_support(n, d, [&](const std::vector<int>& support) {
      sphere_sides(a, support, side);
      uint32_t inside = 0, support_mask = 0;
      for (int q = 0; q < n; ++q)
        if (side[q] == 1) inside |= (1u << q);
      for (int i = 0; i <= d; ++i) support_mask |= (1u << support[size_t(i)]);
      // every sign assignment of the support points is realizable
      uint32_t sub = support_mask;
      while (true) {
        uint32_t b = inside | sub;
        if (b) by_size[size_t(__builtin_popcount(b))].insert(b);
        if (sub == 0) break;
        sub = (sub - 1) & support_mask;
      }
    });
  }
  std::vector<KSetReport> out(size_t(n) + 1);
  for (int k = 1; k <= n; ++k) {
    out[size_t(k)].k = k;
    out[size_t(k)].subsets.assign(by_size[size_t(k)].begin(), by_size[size_t(k)].end());
    out[size_t(k)].count = (long long)(out[size_t(k)].subsets.size());
  }
  // B separable outside a sphere  <=>  A \ B separable inside
  for (int k = 1; k <= n; ++k)
    out[size_t(k)].outside_count = (n - k >= 1) ? out[size_t(n - k)].count : 1;
  return out;
}

KSetReport spherical_ksets(const PointSet& a, int k) {
  if (k < 1 || k > a.size()) throw input_error("ksets: k out of range");
  return spherical_ksets_all(a)[size_t(k)];
}

}  // namespace cdm
