// cdm: chromatic Delaunay mosaics of colored point sets.
// Subcommands generate / mosaic / count / overlay / constants / ksets /
// experiment / verify; CSV and JSON outputs for external plotting.
// Exit codes: 0 success, 1 usage, 2 data error, 3 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdm/chromatic.hpp"
#include "cdm/constants.hpp"
#include "cdm/errors.hpp"
#include "cdm/experiment.hpp"
#include "cdm/io.hpp"
#include "cdm/ksets.hpp"
#include "cdm/overlay.hpp"
#include "cdm/rng.hpp"
#include "cdm/sampling.hpp"

namespace {

using namespace cdm;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open " + path);
  out << content;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw data_error("cannot open " + path);
  return file;
}

int cmd_generate(const std::string& out_path, int d, int s, double rho, uint64_t seed,
                 std::vector<double> bias, int grid_n, double jitter, int moment_n) {
  PointSet pts;
  Coloring chi;
  nlohmann::json extra;
  int modes = (rho > 0 ? 1 : 0) + (grid_n > 0 ? 1 : 0) + (moment_n > 0 ? 1 : 0);
  if (modes != 1)
    throw input_error("generate: pass exactly one of --rho, --grid, --moment");
  if (rho > 0) {
    pts = poisson_torus(rho, d, seed);
    extra["rho"] = rho;
  } else if (grid_n > 0) {
    GridSample g = perturbed_grid(grid_n, jitter, d, seed);
    pts = std::move(g.points);
    extra["density_m"] = g.density;
    extra["jitter"] = jitter;
  } else {
    pts = moment_curve(moment_n, d);
  }
  const std::vector<double>* w = bias.empty() ? nullptr : &bias;
  chi = random_coloring(pts, s, Rng::mix(seed ^ 0xC0ULL), w);
  save_points(out_path, pts, chi);
  nlohmann::json manifest = nlohmann::json::parse(manifest_json(
      "generate", {}, seed, {seed, Rng::mix(seed ^ 0xC0ULL)}, {out_path}));
  manifest["params"] = extra;
  manifest["d"] = d;
  manifest["s"] = s;
  manifest["n"] = pts.size();
  write_file(out_path + ".manifest.json", manifest.dump(2));
  std::cout << "wrote " << pts.size() << " points to " << out_path << "\n";
  return 0;
}

int cmd_mosaic(const std::string& in_path, const std::string& out_path, uint64_t seed) {
  PointFile pf = load_points(in_path);
  ChromaticMosaic cm = chromatic_delaunay(pf.points, pf.chi, 1.0, seed);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "cell";
  for (int i = 0; i <= cm.ambient_dim(); ++i) out << ",v" << i << ",off" << i;
  out << ",signature\n";
  const auto& m = cm.base;
  for (int c = 0; c < m.n_cells(); ++c) {
    out << c;
    for (int i = 0; i < m.cell_size(); ++i) {
      uint32_t v = m.cell(c)[i];
      out << ',' << m.vorig[v] << ',';
      for (int c2 = 0; c2 < m.dim; ++c2) {
        int o = m.offset(int(v))[c2];
        out << (o < 0 ? "-" : "") << std::abs(o);
      }
    }
    ColorSignature sig = cm.signature(m.cell(c), m.cell_size());
    out << ',';
    for (size_t j = 0; j < sig.counts.size(); ++j)
      out << (j ? "|" : "") << sig.counts[j];
    out << '\n';
  }
  return 0;
}

int cmd_count(const std::string& in_path, const std::string& out_path, double rho,
              uint64_t seed) {
  PointFile pf = load_points(in_path);
  ChromaticMosaic cm = chromatic_delaunay(pf.points, pf.chi, 1.0, seed);
  CountTable table = census(cm);
  double rho_eff = rho > 0 ? rho : double(std::max(pf.points.size(), 1));
  DensityReport rep = mp_np(table, rho_eff);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "signature,count\n";
  for (auto& [sig, cnt] : table.entries) {
    out << "N_";
    for (int c : sig) out << c;
    out << ',' << cnt << '\n';
  }
  for (int p = 0; p <= table.d; ++p)
    out << "m_" << p << ',' << rep.m_p[size_t(p)] << '\n';
  for (int p = 0; p <= table.d; ++p)
    out << "n_" << p << ',' << rep.n_p[size_t(p)] << '\n';
  out << "surplus," << rep.surplus << '\n';
  out << "normalized_crossing_density," << fmt_density(rep.normalized_crossings) << '\n';
  return 0;
}

int cmd_overlay(const std::string& in_path, const std::string& out_path, bool oracle,
                const std::string& svg_path, const std::string& csv_path, uint64_t seed) {
  PointFile pf = load_points(in_path);
  ChromaticMosaic cm = chromatic_delaunay(pf.points, pf.chi, 1.0, seed);
  std::vector<int> full(size_t(pf.chi.s) + 1);
  for (int j = 0; j <= pf.chi.s; ++j) full[size_t(j)] = j;
  OverlayGraph g = membrane_overlay(cm, full);
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "quantity,value\n";
  out << "vertices," << g.n_vertices << "\nedges," << g.n_edges << "\nfaces," << g.n_faces
      << "\nmono_vertices," << g.mono_vertices << "\ncrossings," << g.crossings << '\n';
  if (!svg_path.empty()) overlay_to_svg(g, svg_path);
  if (!csv_path.empty()) overlay_to_csv(g, csv_path);
  if (oracle) {
    if (pf.points.dim == 1 || pf.points.dim == 2) {
      std::vector<SimplicialMosaic> monos;
      for (int j = 0; j <= pf.chi.s; ++j) {
        PointSet sub(pf.points.dim);
        sub.periodic = pf.points.periodic;
        for (int i = 0; i < pf.points.size(); ++i) {
          if (pf.chi.color(i) != j) continue;
          sub.coords.insert(sub.coords.end(), pf.points.point(i),
                            pf.points.point(i) + pf.points.dim);
          sub.ids.push_back(uint32_t(i));
        }
        monos.push_back(pf.points.any_periodic() ? delaunay_periodic(sub) : delaunay(sub));
      }
      long long ov = 0, oe = 0, ox = 0;
      if (pf.points.dim == 1) {
        OverlayGraph o1 = overlay_oracle_1d(monos);
        ov = o1.n_vertices;
        oe = o1.n_edges;
      } else {
        std::vector<VoronoiSkeleton> skels;
        for (const auto& mono : monos) skels.push_back(voronoi_skeleton(mono));
        ArrangementResult ar = arrangement_overlay_2d(skels, pf.points.any_periodic());
        ov = ar.graph.n_vertices;
        oe = ar.graph.n_edges;
        ox = ar.graph.crossings;
      }
      out << "oracle_vertices," << ov << "\noracle_edges," << oe << "\noracle_crossings,"
          << ox << '\n';
      if (ov != g.n_vertices || oe != g.n_edges ||
          (pf.points.dim == 2 && ox != g.crossings)) {
        std::cerr << "overlay: membrane and arrangement oracle disagree\n";
        return 3;
      }
    } else {
      out << "oracle,counts-only (d > 2)\n";
    }
  }
  return 0;
}

int cmd_constants(int dmax, const std::string& out_path) {
  if (dmax < 2) throw input_error("constants: --dmax must be >= 2");
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "d,p,V,D,VD,X\n";
  char buf[160];
  for (int d = 2; d <= dmax; ++d) {
    for (int p = 1; p <= d - 1; ++p) {
      double v = V_const(p, d), dd = D_const(p, d);
      snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f,%.6f,", d, p, v, dd, v * dd);
      out << buf;
      if (p == d - 1)
        out << fmt_density(X_const(d));
      out << '\n';
    }
  }
  return 0;
}

int cmd_ksets(const std::string& in_path, int k, const std::string& out_path) {
  PointFile pf = load_points(in_path);
  KSetReport rep = spherical_ksets(pf.points, k);
  nlohmann::json j;
  j["k"] = rep.k;
  j["count"] = rep.count;
  j["outside_count"] = rep.outside_count;
  std::vector<std::vector<int>> subsets;
  for (uint32_t mask : rep.subsets) {
    std::vector<int> b;
    for (int i = 0; i < pf.points.size(); ++i)
      if (mask & (1u << i)) b.push_back(i);
    subsets.push_back(b);
  }
  j["subsets"] = subsets;
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_experiment(int d, int s, double rho, int trials, uint64_t seed,
                   std::vector<double> bias, const std::string& prefix) {
  ExperimentConfig config;
  config.d = d;
  config.s = s;
  config.rho = rho;
  config.trials = trials;
  config.seed = seed;
  config.bias = bias;
  auto results = run_experiment(config);
  ExperimentSummary sum = summarize(config, results);

  std::string trials_path = prefix.empty() ? "" : prefix + "_trials.csv";
  std::ofstream file;
  std::ostream& out = open_output(file, trials_path);
  out << "trial,point_seed,color_seed,n,colorful_top,surplus,normalized_crossings,"
         "identities_ok\n";
  std::vector<uint64_t> seeds;
  for (const auto& r : results) {
    out << r.trial << ',' << r.point_seed << ',' << r.color_seed << ',' << r.n_points << ','
        << r.colorful_top << ',' << r.density.surplus << ','
        << fmt_density(double(r.density.surplus) / rho) << ','
        << (r.identity_failures.empty() ? 1 : 0) << '\n';
    seeds.push_back(r.point_seed);
  }
  std::ostringstream sum_csv;
  sum_csv << "trials,top_min,top_max,top_avg,crossing_avg,crossing_std,identities_ok\n"
          << sum.trials << ',' << sum.top_min << ',' << sum.top_max << ','
          << fmt_density(sum.top_avg) << ',' << fmt_density(sum.crossing_avg) << ','
          << (sum.trials > 1 ? fmt_density(sum.crossing_std) : std::string(""))
          << ',' << (sum.identities_ok ? 1 : 0) << '\n';
  if (prefix.empty()) {
    std::cout << sum_csv.str();
  } else {
    write_file(prefix + "_summary.csv", sum_csv.str());
    write_file(prefix + ".manifest.json",
               manifest_json("experiment", {}, seed, seeds,
                             {prefix + "_trials.csv", prefix + "_summary.csv"}));
  }
  if (!sum.identities_ok) {
    std::cerr << "experiment: exact structural identity failed\n";
    return 3;
  }
  return 0;
}

int cmd_verify(int instances, uint64_t seed, const std::string& dump_prefix) {
  LemmaSuiteResult res = run_lemma_suite(instances, seed);
  std::cout << "instances," << res.instances << "\nrestriction_checks,"
            << res.restrict_checks << "\nlifted_faces," << res.lift_faces
            << "\noverlay_checks," << res.overlay_checks << "\nfailures,"
            << res.failures.size() << '\n';
  if (res.failures.empty()) {
    std::cout << "verify: all lemma checks passed\n";
    return 0;
  }
  for (const auto& f : res.failures) {
    std::cerr << "lemma " << f.lemma << " failed on (s=" << f.s << ",d=" << f.d
              << ",n=" << f.n << ",seed=" << f.seed << "): " << f.detail << '\n';
    if (!dump_prefix.empty()) {
      // reproduce the offending instance for post-mortem
      PointSet pts;
      {
        Rng rng(f.seed, 0x1057A);
        pts = PointSet(f.d);
        pts.periodic.assign(size_t(f.d), 1);
        for (int i = 0; i < f.n * f.d; ++i) pts.coords.push_back(rng.uniform());
        pts.quantize_periodic();
      }
      Coloring chi;
      uint64_t cseed = f.seed;
      do {
        chi = random_coloring(pts, f.s, ++cseed);
      } while (min_class_size(chi) < 1);
      save_points(dump_prefix + "_s" + std::to_string(f.s) + "d" + std::to_string(f.d) +
                      "_" + std::to_string(f.seed) + ".pts",
                  pts, chi);
    }
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chromatic Delaunay mosaics: construction, overlays, experiments"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "sample a colored point set");
  std::string gen_out = "points.pts";
  int gen_d = 2, gen_s = 1, gen_grid = 0, gen_moment = 0;
  double gen_rho = 0, gen_jitter = 0.1;
  uint64_t gen_seed = 1;
  std::vector<double> gen_bias;
  gen->add_option("--out", gen_out, "output point file");
  gen->add_option("--d", gen_d, "spatial dimension");
  gen->add_option("--s", gen_s, "number of colors minus one");
  gen->add_option("--rho", gen_rho, "Poisson intensity on the unit torus");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--bias", gen_bias, "color weights (s+1 values, sum 1)");
  gen->add_option("--grid", gen_grid, "perturbed grid with n points");
  gen->add_option("--jitter", gen_jitter, "grid jitter (absolute)");
  gen->add_option("--moment", gen_moment, "n points on the moment curve");

  // mosaic
  auto* mos = app.add_subcommand("mosaic", "build the chromatic Delaunay mosaic");
  std::string mos_in, mos_out;
  uint64_t mos_seed = 1;
  mos->add_option("--in", mos_in, "input point file")->required();
  mos->add_option("--out", mos_out, "cells CSV (default stdout)");
  mos->add_option("--seed", mos_seed, "insertion-order seed");

  // count
  auto* cnt = app.add_subcommand("count", "census of simplex color signatures");
  std::string cnt_in, cnt_out;
  double cnt_rho = 0;
  uint64_t cnt_seed = 1;
  cnt->add_option("--in", cnt_in, "input point file")->required();
  cnt->add_option("--out", cnt_out, "CSV output (default stdout)");
  cnt->add_option("--rho", cnt_rho, "intensity used for normalization");
  cnt->add_option("--seed", cnt_seed, "insertion-order seed");

  // overlay
  auto* ovl = app.add_subcommand("overlay", "overlay of mono-chromatic Voronoi tessellations");
  std::string ovl_in, ovl_out, ovl_svg, ovl_csv;
  bool ovl_oracle = false;
  uint64_t ovl_seed = 1;
  ovl->add_option("--in", ovl_in, "input point file")->required();
  ovl->add_option("--out", ovl_out, "counts CSV (default stdout)");
  ovl->add_flag("--oracle", ovl_oracle, "cross-check against the arrangement oracle");
  ovl->add_option("--svg", ovl_svg, "SVG dump of the 2D overlay");
  ovl->add_option("--csv", ovl_csv, "CSV dump of overlay vertices/edges");
  ovl->add_option("--seed", ovl_seed, "insertion-order seed");

  // constants
  auto* con = app.add_subcommand("constants", "crossing-density constants table");
  int con_dmax = 6;
  std::string con_out;
  con->add_option("--dmax", con_dmax, "largest dimension");
  con->add_option("--out", con_out, "CSV output (default stdout)");

  // ksets
  auto* kst = app.add_subcommand("ksets", "spherical k-set oracle (n <= 16)");
  std::string kst_in, kst_out;
  int kst_k = 1;
  kst->add_option("--in", kst_in, "input point file")->required();
  kst->add_option("--k", kst_k, "subset size")->required();
  kst->add_option("--out", kst_out, "JSON output (default stdout)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "seeded Poisson trials with census summary");
  int exp_d = 2, exp_s = 1, exp_trials = 10;
  double exp_rho = 1000;
  uint64_t exp_seed = 1;
  std::vector<double> exp_bias;
  std::string exp_prefix;
  exp->add_option("--d", exp_d, "spatial dimension");
  exp->add_option("--s", exp_s, "number of colors minus one");
  exp->add_option("--rho", exp_rho, "Poisson intensity");
  exp->add_option("--trials", exp_trials, "number of trials");
  exp->add_option("--seed", exp_seed, "master seed");
  exp->add_option("--bias", exp_bias, "color weights");
  exp->add_option("--prefix", exp_prefix, "output prefix (default: summary to stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "mechanical check of the structural lemmas");
  int ver_instances = 50;
  uint64_t ver_seed = 2024;
  std::string ver_dump = "lemma_failure";
  ver->add_option("--instances", ver_instances, "instances per (s,d) combination");
  ver->add_option("--seed", ver_seed, "suite seed");
  ver->add_option("--dump", ver_dump, "counterexample dump prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_out, gen_d, gen_s, gen_rho, gen_seed, gen_bias, gen_grid,
                          gen_jitter, gen_moment);
    if (mos->parsed()) return cmd_mosaic(mos_in, mos_out, mos_seed);
    if (cnt->parsed()) return cmd_count(cnt_in, cnt_out, cnt_rho, cnt_seed);
    if (ovl->parsed())
      return cmd_overlay(ovl_in, ovl_out, ovl_oracle, ovl_svg, ovl_csv, ovl_seed);
    if (con->parsed()) return cmd_constants(con_dmax, con_out);
    if (kst->parsed()) return cmd_ksets(kst_in, kst_k, kst_out);
    if (exp->parsed())
      return cmd_experiment(exp_d, exp_s, exp_rho, exp_trials, exp_seed, exp_bias,
                            exp_prefix);
    if (ver->parsed()) return cmd_verify(ver_instances, ver_seed, ver_dump);
  } catch (const input_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
