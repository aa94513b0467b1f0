#include "cdm/constants.hpp"

#include <cmath>

#include "cdm/errors.hpp"

namespace cdm {

double gamma_fn(double x) {
  if (!(x > 0)) throw input_error("gamma: requires x > 0");
  // Lanczos, g = 7, 9 coefficients (Godfrey's values); relative error below
  // 1e-14 on the positive axis, far inside the 1e-12 budget.
  static const double g = 7.0;
  static const double c[9] = {0.99999999999980993,  676.5203681218851,
                              -1259.1392167224028,  771.32342877765313,
                              -176.61502916214059,  12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6,
                              1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection; unused by the density formulas but keeps the function total
    return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
  }
  double z = x - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
  double t = z + g + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double omega(int d) {
  if (d < 1) throw input_error("omega: d must be >= 1");
  return 2.0 * std::pow(M_PI, d / 2.0) / gamma_fn(d / 2.0);
}

namespace {
double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
void check_pd(int p, int d) {
  if (d < 2 || p < 1 || p > d - 1) throw input_error("V/D: need d >= 2, 1 <= p <= d-1");
}
}  // namespace

double V_const(int p, int d) {
  check_pd(p, d);
  double dd = d, pp = p;
  double t1 = std::pow(2.0, dd - pp + 1) * std::pow(M_PI, (dd - pp) / 2) /
              (dd * factorial(d - p + 1));
  double t2 = gamma_fn((dd * dd - pp * dd + pp + 1) / 2) /
              gamma_fn((dd * dd - pp * dd + pp) / 2);
  double t3 = std::pow(gamma_fn((dd + 2) / 2), dd - pp + pp / dd) /
              std::pow(gamma_fn((dd + 1) / 2), dd - pp);
  double t4 = gamma_fn(dd - pp + pp / dd) / gamma_fn((pp + 1) / 2);
  return t1 * t2 * t3 * t4;
}

double D_const(int p, int d) {
  check_pd(p, d);
  double dd = d, pp = p;
  double t0 = omega(1) * omega(d + 1) / (omega(p + 1) * omega(d - p + 1));
  double t1 = std::pow(2.0, pp + 1) * std::pow(M_PI, pp / 2) / (dd * factorial(p + 1));
  double t2 = gamma_fn((pp * dd + dd - pp + 1) / 2) /
              gamma_fn((pp * dd + dd - pp) / 2);
  double t3 = std::pow(gamma_fn((dd + 2) / 2), pp + 1 - pp / dd) /
              std::pow(gamma_fn((dd + 1) / 2), pp);
  double t4 = gamma_fn(pp + 1 - pp / dd) / gamma_fn((dd - pp + 1) / 2);
  return t0 * t1 * t2 * t3 * t4;
}

double X_const(int d) {
  if (d < 2) throw input_error("X: d must be >= 2");
  double sum = 0;
  for (int p = 1; p <= d - 1; ++p) sum += V_const(p, d) * D_const(p, d);
  return sum / 2;
}

double predicted_crossing_density(const PlaneConfig& c) {
  if (c.s < 1) throw input_error("prediction: s must be >= 1");
  return 4.0 * c.s / M_PI * c.rho;
}

std::optional<double> predicted_crossing_density(const TwoColorConfig& c) {
  if (c.d < 2) throw input_error("prediction: d must be >= 2");
  return X_const(c.d) * c.rho;
}

double predicted_crossing_density(const BiasedPlaneConfig& c) {
  if (!(c.lambda > 0 && c.lambda < 1)) throw input_error("prediction: lambda in (0,1)");
  return 8.0 / M_PI * std::sqrt(c.lambda * (1.0 - c.lambda)) * c.rho;
}

long long CountTable::total_faces(int p) const {
  long long sum = 0;
  for (auto& [sig, cnt] : entries) {
    int tot = 0;
    for (int c : sig) tot += c;
    if (tot == p + 1) sum += cnt;
  }
  return sum;
}

DensityReport mp_np(const CountTable& table, double rho) {
  if (rho <= 0) throw input_error("mp_np: rho must be positive");
  DensityReport r;
  r.rho = rho;
  r.m_p.assign(size_t(table.d) + 1, 0);
  r.n_p.assign(size_t(table.d) + 1, 0);
  for (auto& [sig, cnt] : table.entries) {
    if (int(sig.size()) != table.s + 1)
      throw input_error("mp_np: signature width mismatch");
    int tot = 0, support = 0;
    for (int c : sig) {
      tot += c;
      support += (c > 0);
    }
    if (support == 1) {
      int p = table.d + 1 - tot;  // mono (d-p)-simplex <-> Voronoi p-cell
      if (p >= 0 && p <= table.d) r.m_p[size_t(p)] += cnt;
    }
    if (support == table.s + 1) {
      int p = table.s + table.d + 1 - tot;  // colorful (s+d-p)-cells
      if (p >= 0 && p <= table.d) r.n_p[size_t(p)] += cnt;
    }
  }
  r.surplus = r.n_p[0] - r.m_p[0];
  r.normalized_crossings = double(r.surplus) / rho;
  return r;
}

}  // namespace cdm
