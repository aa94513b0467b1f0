#include "cdm/sampling.hpp"

#include <cmath>

#include "cdm/errors.hpp"

namespace cdm {

void PointSet::quantize_periodic() {
  for (int i = 0; i < size(); ++i) {
    double* p = point(i);
    for (int c = 0; c < dim; ++c) {
      if (c < int(periodic.size()) && periodic[size_t(c)]) {
        double q = std::floor(p[c] * 1073741824.0) * 0x1.0p-30;  // 2^30 grid
        if (q < 0) q = 0;
        if (q >= 1.0) q = 1.0 - 0x1.0p-30;
        p[c] = q;
      }
    }
  }
}

int poisson_count(double rho, Rng& rng) {
  if (rho <= 0) throw input_error("poisson: rho must be positive");
  // Sum of independent Poisson(chunk) draws is Poisson(rho); chunks of 512
  // keep exp(-chunk) well above the underflow threshold of doubles.
  int total = 0;
  double remaining = rho;
  while (remaining > 0) {
    double chunk = remaining > 512.0 ? 512.0 : remaining;
    remaining -= chunk;
    double p = std::exp(-chunk);
    double cumulative = p;
    double u = rng.uniform();
    int k = 0;
    while (u > cumulative && k < 100000) {
      ++k;
      p *= chunk / k;
      cumulative += p;
    }
    total += k;
  }
  return total;
}

PointSet poisson_torus(double rho, int d, uint64_t seed) {
  Rng rng(seed, 0xA11CE5);
  int n = poisson_count(rho, rng);
  PointSet ps(d);
  ps.periodic.assign(size_t(d), 1);
  ps.coords.reserve(size_t(n) * d);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) ps.coords.push_back(rng.uniform());
  ps.quantize_periodic();
  return ps;
}

Coloring random_coloring(const PointSet& a, int s, uint64_t seed,
                         const std::vector<double>* weights) {
  if (s < 0) throw input_error("coloring: s must be >= 0");
  std::vector<double> cum(size_t(s) + 1);
  if (weights) {
    if (int(weights->size()) != s + 1) throw input_error("coloring: weight count != s+1");
    double acc = 0;
    for (int j = 0; j <= s; ++j) {
      if ((*weights)[size_t(j)] < 0) throw input_error("coloring: negative weight");
      acc += (*weights)[size_t(j)];
      cum[size_t(j)] = acc;
    }
    if (std::fabs(acc - 1.0) > 1e-9) throw input_error("coloring: weights must sum to 1");
    cum[size_t(s)] = 1.0;
  } else {
    for (int j = 0; j <= s; ++j) cum[size_t(j)] = double(j + 1) / double(s + 1);
  }
  Rng rng(seed, 0xC0105);
  Coloring chi;
  chi.s = s;
  chi.chi.resize(size_t(a.size()));
  for (int i = 0; i < a.size(); ++i) {
    double u = rng.uniform();
    int c = 0;
    while (c < s && u >= cum[size_t(c)]) ++c;
    chi.chi[size_t(i)] = uint8_t(c);
  }
  return chi;
}

double set_density(const PointSet& a) {
  double dmin = 0, dmax = 0;
  bool first = true;
  for (int i = 0; i < a.size(); ++i) {
    for (int j = i + 1; j < a.size(); ++j) {
      double s = 0;
      for (int c = 0; c < a.dim; ++c) {
        double diff = a.point(i)[c] - a.point(j)[c];
        s += diff * diff;
      }
      if (first || s < dmin) dmin = s;
      if (first || s > dmax) dmax = s;
      first = false;
    }
  }
  if (first || dmin == 0) throw input_error("density: needs >= 2 distinct points");
  return std::sqrt(dmax / dmin);
}

GridSample perturbed_grid(int n, double jitter, int d, uint64_t seed) {
  if (n < 1 || d < 1) throw input_error("grid: bad size");
  int g = int(std::ceil(std::pow(double(n), 1.0 / d) - 1e-9));
  if (jitter < 0 || (jitter >= 0.5 && g > 1))
    throw input_error("grid: jitter must lie in [0, spacing/2)");
  Rng rng(seed, 0x9121D);
  PointSet ps(d);
  std::vector<int> idx(size_t(d), 0);
  while (true) {
    for (int c = 0; c < d; ++c)
      ps.coords.push_back(double(idx[size_t(c)]) + jitter * (2.0 * rng.uniform() - 1.0));
    int c = 0;
    while (c < d && ++idx[size_t(c)] == g) idx[size_t(c++)] = 0;
    if (c == d) break;
  }
  GridSample out;
  out.density = set_density(ps);
  out.points = std::move(ps);
  return out;
}

PointSet moment_curve(int n, int d) {
  if (n < d + 1) throw input_error("moment curve: need n >= d+1");
  PointSet ps(d);
  for (int i = 1; i <= n; ++i) {
    double t = double(i) / double(n);
    double v = 1;
    for (int c = 0; c < d; ++c) {
      v *= t;
      ps.coords.push_back(v);
    }
  }
  return ps;
}

}  // namespace cdm
