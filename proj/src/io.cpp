#include "cdm/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cdm/errors.hpp"

#include <json.hpp>

namespace cdm {

const char* kCodeVersion = "cdm 1.0.0";

void save_points(const std::string& path, const PointSet& ps, const Coloring& chi) {
  if (int(chi.chi.size()) != ps.size()) throw input_error("save: coloring size mismatch");
  std::ofstream out(path);
  if (!out) throw data_error("save: cannot open " + path);
  char buf[64];
  out << ps.dim << ' ' << chi.s << ' ' << ps.size() << ' ' << (ps.any_periodic() ? 1 : 0)
      << '\n';
  for (int i = 0; i < ps.size(); ++i) {
    out << i;
    for (int c = 0; c < ps.dim; ++c) {
      snprintf(buf, sizeof buf, " %.17g", ps.point(i)[c]);
      out << buf;
    }
    out << ' ' << int(chi.color(i)) << '\n';
  }
  if (!out) throw data_error("save: write failed for " + path);
}

PointFile load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("load: cannot open " + path);
  int d = 0, s = -1, n = 0, periodic = 0;
  if (!(in >> d >> s >> n >> periodic) || d < 1 || s < 0 || n < 0)
    throw data_error("load: bad header in " + path);
  PointFile pf;
  pf.periodic = periodic != 0;
  pf.points = PointSet(d);
  pf.points.periodic.assign(size_t(d), uint8_t(periodic ? 1 : 0));
  pf.points.coords.assign(size_t(n) * d, 0.0);
  pf.chi.s = s;
  pf.chi.chi.assign(size_t(n), 0);
  std::vector<char> seen(size_t(n), 0);
  for (int row = 0; row < n; ++row) {
    long long idx = -1;
    if (!(in >> idx) || idx < 0 || idx >= n || seen[size_t(idx)])
      throw data_error("load: bad or duplicate index in " + path);
    seen[size_t(idx)] = 1;
    for (int c = 0; c < d; ++c) {
      double v = 0;
      if (!(in >> v) || !std::isfinite(v)) throw data_error("load: bad coordinate");
      if (periodic && !(v >= 0.0 && v < 1.0))
        throw data_error("load: periodic coordinate outside [0,1)");
      pf.points.coords[size_t(idx) * d + c] = v;
    }
    int color = -1;
    if (!(in >> color) || color < 0 || color > s) throw data_error("load: bad color");
    pf.chi.chi[size_t(idx)] = uint8_t(color);
  }
  return pf;
}

std::string fmt_density(double v) {
  char buf[64];
  snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void overlay_to_csv(const OverlayGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("overlay csv: cannot open " + path);
  out << "section,id,x,y,kind,color,a,b,shift_x,shift_y\n";
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    const auto& v = g.vertices[i];
    out << "vertex," << i << ',' << fmt_density(v.pos[0]) << ',' << fmt_density(v.pos[1])
        << ',' << (v.kind == OverlayVertexKind::Mono ? "mono" : "crossing") << ','
        << v.mono_color << ",,,,\n";
  }
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    out << "edge," << i << ",,,," << e.color << ',' << e.a << ','
        << (e.b == kBoundary ? std::string("ray") : std::to_string(e.b)) << ','
        << int(e.shift[0]) << ',' << int(e.shift[1]) << '\n';
  }
}

void overlay_to_svg(const OverlayGraph& g, const std::string& path) {
  if (g.d != 2) throw input_error("svg: 2D overlays only");
  if (g.vertices.size() > 2000) throw scale_error("svg: limited to 2000 vertices");
  double lo[2] = {0, 0}, hi[2] = {1, 1};
  if (!g.periodic) {
    for (const auto& v : g.vertices)
      for (int c = 0; c < 2; ++c) {
        lo[c] = std::min(lo[c], v.pos[c]);
        hi[c] = std::max(hi[c], v.pos[c]);
      }
  }
  const double size = 800.0;
  double scale = size / std::max(hi[0] - lo[0], hi[1] - lo[1]);
  auto px = [&](double x) { return (x - lo[0]) * scale + 10; };
  auto py = [&](double y) { return size - (y - lo[1]) * scale + 10; };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
  std::ofstream out(path);
  if (!out) throw data_error("svg: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 20 << "\" height=\""
      << size + 20 << "\">\n";
  for (const auto& e : g.edges) {
    if (e.b == kBoundary) continue;
    const auto& a = g.vertices[e.a];
    const auto& b = g.vertices[e.b];
    double bx = b.pos[0] + e.shift[0], by = b.pos[1] + e.shift[1];
    out << "<line x1=\"" << px(a.pos[0]) << "\" y1=\"" << py(a.pos[1]) << "\" x2=\""
        << px(bx) << "\" y2=\"" << py(by) << "\" stroke=\""
        << palette[size_t(std::max(0, e.color)) % 4] << "\" stroke-width=\"1\"/>\n";
  }
  for (const auto& v : g.vertices) {
    bool cross = v.kind == OverlayVertexKind::Crossing;
    out << "<circle cx=\"" << px(v.pos[0]) << "\" cy=\"" << py(v.pos[1]) << "\" r=\""
        << (cross ? 2.0 : 1.5) << "\" fill=\"" << (cross ? "#000000" : "#999999")
        << "\"/>\n";
  }
  out << "</svg>\n";
}

std::string manifest_json(const std::string& command, const std::vector<std::string>& args,
                          uint64_t seed, const std::vector<uint64_t>& trial_seeds,
                          const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["version"] = kCodeVersion;
  j["command"] = command;
  j["args"] = args;
  j["seed"] = seed;
  j["trial_seeds"] = trial_seeds;
  j["outputs"] = outputs;
  return j.dump(2);
}

}  // namespace cdm
