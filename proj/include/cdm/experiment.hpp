#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdm/chromatic.hpp"
#include "cdm/constants.hpp"
#include "cdm/overlay.hpp"

namespace cdm {

struct ExperimentConfig {
  int d = 2;
  int s = 1;
  double rho = 1000;
  int trials = 1;
  uint64_t seed = 1;
  std::vector<double> bias;  // empty = uniform coloring
};

struct TrialResult {
  int trial = 0;
  uint64_t point_seed = 0;
  uint64_t color_seed = 0;
  int n_points = 0;
  CountTable table;
  DensityReport density;
  long long colorful_top = 0;
  std::vector<std::string> identity_failures;  // empty = all exact checks hold
};

struct ExperimentSummary {
  int trials = 0;
  long long top_min = 0, top_max = 0;
  double top_avg = 0;
  double crossing_avg = 0, crossing_std = 0;  // normalized by rho
  bool identities_ok = true;
};

/// Per-trial seeds derive from (seed, trial) by SplitMix64 mixing, so trials
/// reproduce independently of execution order; trials run on CDM_THREADS
/// threads (default: hardware).
std::vector<TrialResult> run_experiment(const ExperimentConfig& config);
ExperimentSummary summarize(const ExperimentConfig& config,
                            const std::vector<TrialResult>& trials);

/// Exact per-trial identities on a periodic census: mono top cells extend to
/// colorful ones one color at a time, per-color mono Euler characteristic
/// vanishes, the full alternating sum vanishes, and in d = 2 the colorful
/// Euler relation n_0 - n_1 + n_2 = 0 holds. Returns failure descriptions.
std::vector<std::string> check_identities(const CountTable& table);

/// Randomized mechanical check of the three structural lemmas.
struct LemmaFailure {
  std::string lemma;
  std::string detail;
  int s = 0, d = 0, n = 0;
  uint64_t seed = 0;
};
struct LemmaSuiteResult {
  int instances = 0;
  long long restrict_checks = 0;
  long long lift_faces = 0;
  long long overlay_checks = 0;
  std::vector<LemmaFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Runs `instances` random torus instances for every (s, d) in
/// {(1,1), (1,2), (2,2)} with n in [12, 40]: subcomplex restriction equality,
/// zero lift violations, and membrane-vs-arrangement overlay agreement
/// (counts exactly, vertex geometry within 1e-6).
LemmaSuiteResult run_lemma_suite(int instances, uint64_t seed);

}  // namespace cdm
