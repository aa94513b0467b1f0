#include "cdm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cdm/errors.hpp"
#include "cdm/rng.hpp"
#include "cdm/sampling.hpp"

namespace cdm {

namespace {

int thread_count(int jobs) {
  int hw = int(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CDM_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) hw = v;
  }
  if (hw < 1) hw = 1;
  return std::min(hw, std::max(jobs, 1));
}

std::string sig_name(const std::vector<int>& sig) {
  std::string s = "N_";
  for (int c : sig) s += std::to_string(c);
  return s;
}

}  // namespace

std::vector<std::string> check_identities(const CountTable& table) {
  std::vector<std::string> failures;
  const int s = table.s, d = table.d;

  // mono top cells extend to colorful top cells one missing color at a time:
  // N[(d+1) e_j] = N[(d+1) e_j + sum_{i != j} e_i]
  for (int j = 0; j <= s; ++j) {
    std::vector<int> mono(size_t(s) + 1, 0), ext(size_t(s) + 1, 1);
    mono[size_t(j)] = d + 1;
    ext[size_t(j)] = d + 1;
    long long a = table.at(mono), b = table.at(ext);
    if (a != b) {
      std::ostringstream os;
      os << sig_name(mono) << "=" << a << " != " << sig_name(ext) << "=" << b;
      failures.push_back(os.str());
    }
  }

  // per-color mono Euler characteristic: chi(T^d) = 0
  for (int j = 0; j <= s; ++j) {
    long long alt = 0;
    for (int p = 0; p <= d; ++p) {
      std::vector<int> sig(size_t(s) + 1, 0);
      sig[size_t(j)] = p + 1;
      alt += (p % 2 == 0 ? 1 : -1) * table.at(sig);
    }
    if (alt != 0)
      failures.push_back("mono Euler for color " + std::to_string(j) + " = " +
                         std::to_string(alt));
  }

  // alternating sum over the whole table: chi(T^d x layer slab) = 0
  {
    long long alt = 0;
    for (auto& [sig, cnt] : table.entries) {
      int tot = 0;
      for (int c : sig) tot += c;
      alt += ((tot - 1) % 2 == 0 ? 1 : -1) * cnt;
    }
    if (alt != 0) failures.push_back("full alternating sum = " + std::to_string(alt));
  }

  // overlay Euler in the plane: n_0 - n_1 + n_2 = 0
  if (d == 2) {
    DensityReport r = mp_np(table, 1.0);
    long long e = r.n_p[0] - r.n_p[1] + r.n_p[2];
    if (e != 0) failures.push_back("overlay Euler n0-n1+n2 = " + std::to_string(e));
  }
  return failures;
}

std::vector<TrialResult> run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw input_error("experiment: trials must be >= 1");
  std::vector<TrialResult> results(size_t(config.trials));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_msg;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      int t = next.fetch_add(1);
      if (t >= config.trials || failed.load()) break;
      try {
        TrialResult r;
        r.trial = t;
        r.point_seed = Rng::mix(config.seed ^ (0x9E37ULL + 2 * uint64_t(t)));
        r.color_seed = Rng::mix(config.seed ^ (0x79B9ULL + 2 * uint64_t(t) + 1));
        PointSet pts = poisson_torus(config.rho, config.d, r.point_seed);
        while (pts.size() < config.s + config.d + 2)
          pts = poisson_torus(config.rho, config.d, ++r.point_seed);
        const std::vector<double>* w = config.bias.empty() ? nullptr : &config.bias;
        Coloring chi = random_coloring(pts, config.s, r.color_seed, w);
        ChromaticMosaic cm = chromatic_delaunay(pts, chi);
        r.n_points = pts.size();
        r.table = census(cm);
        r.density = mp_np(r.table, config.rho);
        r.colorful_top = r.density.n_p[0];
        r.identity_failures = check_identities(r.table);
        results[size_t(t)] = std::move(r);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        if (error_msg.empty()) error_msg = e.what();
      }
    }
  };
  int nthreads = thread_count(config.trials);
  std::vector<std::thread> pool;
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error("experiment trial failed: " + error_msg);
  return results;
}

ExperimentSummary summarize(const ExperimentConfig& config,
                            const std::vector<TrialResult>& trials) {
  ExperimentSummary s;
  s.trials = int(trials.size());
  if (trials.empty()) return s;
  s.top_min = trials[0].colorful_top;
  s.top_max = trials[0].colorful_top;
  double sum = 0, xsum = 0, x2sum = 0;
  for (const auto& t : trials) {
    s.top_min = std::min(s.top_min, t.colorful_top);
    s.top_max = std::max(s.top_max, t.colorful_top);
    sum += double(t.colorful_top);
    double x = double(t.density.surplus) / config.rho;
    xsum += x;
    x2sum += x * x;
    s.identities_ok &= t.identity_failures.empty();
  }
  s.top_avg = sum / double(trials.size());
  s.crossing_avg = xsum / double(trials.size());
  if (trials.size() > 1) {
    double var = (x2sum - xsum * xsum / double(trials.size())) / double(trials.size() - 1);
    s.crossing_std = std::sqrt(std::max(0.0, var));
  }
  return s;
}

namespace {

PointSet uniform_torus_points(int n, int d, uint64_t seed) {
  Rng rng(seed, 0x1057A);
  PointSet ps(d);
  ps.periodic.assign(size_t(d), 1);
  for (int i = 0; i < n * d; ++i) ps.coords.push_back(rng.uniform());
  ps.quantize_periodic();
  return ps;
}

double torus_dist2(const double* a, const double* b, int d) {
  double s = 0;
  for (int c = 0; c < d; ++c) {
    double e = std::fabs(a[c] - b[c]);
    e = std::min(e, 1.0 - e);
    s += e * e;
  }
  return s;
}

// greedy bijective matching of two mod-1 vertex clouds within tol
bool match_vertices(std::vector<std::array<double, 2>> a,
                    std::vector<std::array<double, 2>> b, int d, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<char> used(b.size(), 0);
  for (const auto& p : a) {
    bool ok = false;
    for (size_t j = 0; j < b.size() && !ok; ++j) {
      if (used[j]) continue;
      if (torus_dist2(p.data(), b[j].data(), d) < tol * tol) {
        used[j] = 1;
        ok = true;
      }
    }
    if (!ok) return false;
  }
  return true;
}

std::array<double, 2> mod1(const double* p, int d) {
  std::array<double, 2> r{0, 0};
  for (int c = 0; c < d; ++c) r[size_t(c)] = p[c] - std::floor(p[c]);
  return r;
}

void check_instance(int s, int d, int n, uint64_t seed, LemmaSuiteResult& out) {
  PointSet pts = uniform_torus_points(n, d, seed);
  Coloring chi;
  uint64_t cseed = seed;
  do {
    chi = random_coloring(pts, s, ++cseed);
  } while (min_class_size(chi) < 1);

  auto fail = [&](const std::string& lemma, const std::string& detail) {
    out.failures.push_back({lemma, detail, s, d, n, seed});
  };

  ChromaticMosaic cm = chromatic_delaunay(pts, chi);

  // Lemma: sub-chromatic subcomplexes (restriction = independent construction)
  for (uint32_t mask = 1; mask < (1u << (s + 1)); ++mask) {
    std::vector<int> tau;
    for (int j = 0; j <= s; ++j)
      if (mask & (1u << j)) tau.push_back(j);
    ChromaticMosaic restricted = restrict_mosaic(cm, tau);
    // independent construction on the color classes, keeping parent ids
    PointSet sub(d);
    sub.periodic = pts.periodic;
    Coloring sub_chi;
    sub_chi.s = int(tau.size()) - 1;
    std::vector<int> rank(size_t(s) + 1, -1);
    for (size_t i = 0; i < tau.size(); ++i) rank[size_t(tau[i])] = int(i);
    for (int i = 0; i < pts.size(); ++i) {
      if (rank[size_t(chi.color(i))] < 0) continue;
      sub.coords.insert(sub.coords.end(), pts.point(i), pts.point(i) + d);
      sub.ids.push_back(uint32_t(i));
      sub_chi.chi.push_back(uint8_t(rank[size_t(chi.color(i))]));
    }
    ChromaticMosaic indep = chromatic_delaunay(sub, sub_chi);
    for (int p = 0; p <= sub_chi.s + d; ++p) {
      auto ka = all_face_keys(restricted.base, p);
      auto kb = all_face_keys(indep.base, p);
      std::sort(ka.begin(), ka.end());
      std::sort(kb.begin(), kb.end());
      ++out.restrict_checks;
      if (ka != kb) {
        std::ostringstream os;
        os << "restriction mismatch at dim " << p << " for tau mask " << mask << " ("
           << ka.size() << " vs " << kb.size() << " faces)";
        fail("3.1", os.str());
        break;
      }
    }
  }

  // Lemma: projection to the Delaunay mosaic (lifted faces exist)
  LiftCheckReport lift = lift_check(pts, chi);
  out.lift_faces += lift.checked;
  if (!lift.ok())
    fail("3.2", std::to_string(lift.violations.size()) + " lifted faces missing");

  // Lemma: membranes project to overlays (counts + geometry vs oracle)
  std::vector<int> full(size_t(s) + 1);
  for (int j = 0; j <= s; ++j) full[size_t(j)] = j;
  std::vector<std::vector<int>> taus{full};
  if (s == 2) taus.push_back({0, 1});  // one pair membrane as extra coverage

  for (const auto& tau : taus) {
    OverlayGraph mem = membrane_overlay(cm, tau);
    std::vector<SimplicialMosaic> monos;
    for (int j : tau) {
      PointSet sub(d);
      sub.periodic = pts.periodic;
      for (int i = 0; i < pts.size(); ++i) {
        if (chi.color(i) != j) continue;
        sub.coords.insert(sub.coords.end(), pts.point(i), pts.point(i) + d);
        sub.ids.push_back(uint32_t(i));
      }
      monos.push_back(delaunay_periodic(sub));
    }
    ++out.overlay_checks;
    if (d == 1) {
      OverlayGraph oracle = overlay_oracle_1d(monos);
      if (mem.n_vertices != oracle.n_vertices || mem.n_edges != oracle.n_edges) {
        std::ostringstream os;
        os << "1d overlay counts differ: membrane V=" << mem.n_vertices
           << " E=" << mem.n_edges << " oracle V=" << oracle.n_vertices
           << " E=" << oracle.n_edges;
        fail("3.3", os.str());
        continue;
      }
      std::vector<std::array<double, 2>> a, b;
      for (const auto& v : mem.vertices) a.push_back(mod1(v.pos, 1));
      for (const auto& v : oracle.vertices) b.push_back(mod1(v.pos, 1));
      if (!match_vertices(a, b, 1, 1e-6)) fail("3.3", "1d overlay vertex geometry differs");
    } else {
      std::vector<VoronoiSkeleton> skels;
      for (const auto& mono : monos) skels.push_back(voronoi_skeleton(mono));
      ArrangementResult oracle = arrangement_overlay_2d(skels, true, true);
      if (mem.n_vertices != oracle.graph.n_vertices || mem.n_edges != oracle.graph.n_edges ||
          mem.n_faces != oracle.graph.n_faces || mem.crossings != oracle.graph.crossings ||
          (oracle.traced_faces >= 0 && oracle.traced_faces != oracle.graph.n_faces)) {
        std::ostringstream os;
        os << "overlay counts differ: membrane (V,E,F,X)=(" << mem.n_vertices << ","
           << mem.n_edges << "," << mem.n_faces << "," << mem.crossings << ") oracle=("
           << oracle.graph.n_vertices << "," << oracle.graph.n_edges << ","
           << oracle.graph.n_faces << "," << oracle.graph.crossings
           << ") traced=" << oracle.traced_faces;
        fail("3.3", os.str());
        continue;
      }
      std::vector<std::array<double, 2>> a, b;
      for (const auto& v : mem.vertices) a.push_back(mod1(v.pos, 2));
      for (const auto& v : oracle.graph.vertices) b.push_back(mod1(v.pos, 2));
      if (!match_vertices(a, b, 2, 1e-6)) fail("3.3", "overlay vertex geometry differs");
    }
  }
}

}  // namespace

LemmaSuiteResult run_lemma_suite(int instances, uint64_t seed) {
  LemmaSuiteResult out;
  const int combos[3][2] = {{1, 1}, {1, 2}, {2, 2}};
  Rng rng(seed, 0x1E44A);
  for (const auto& combo : combos) {
    const int s = combo[0], d = combo[1];
    for (int i = 0; i < instances; ++i) {
      int n = 12 + int(rng.below(29));  // 12..40
      uint64_t inst_seed = rng.next_u64();
      check_instance(s, d, n, inst_seed, out);
      ++out.instances;
    }
  }
  return out;
}

}  // namespace cdm
