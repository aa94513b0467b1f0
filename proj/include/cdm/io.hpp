#pragma once

#include <string>
#include <vector>

#include "cdm/overlay.hpp"
#include "cdm/point_set.hpp"

namespace cdm {

/// Colored point-set file: header `d s n periodic`, then one line per point,
/// `index x_1 ... x_d color`. Coordinates round-trip bit exactly (%.17g).
struct PointFile {
  PointSet points;
  Coloring chi;
  bool periodic = false;
};

void save_points(const std::string& path, const PointSet& ps, const Coloring& chi);
PointFile load_points(const std::string& path);

/// Fixed CSV number formats: counts as integers, densities with 6 decimals.
std::string fmt_density(double v);

/// 2D overlay dumps for figure reproduction (d = 2, <= 2000 vertices for SVG).
void overlay_to_csv(const OverlayGraph& g, const std::string& path);
void overlay_to_svg(const OverlayGraph& g, const std::string& path);

/// Run manifest written next to every generated output.
std::string manifest_json(const std::string& command, const std::vector<std::string>& args,
                          uint64_t seed, const std::vector<uint64_t>& trial_seeds,
                          const std::vector<std::string>& outputs);

extern const char* kCodeVersion;

}  // namespace cdm
