#pragma once

#include <string>
#include <utility>
#include <vector>

#include "metrix/config.hpp"
#include "metrix/grid.hpp"
#include "metrix/timeint.hpp"

namespace metrix {

struct ExperimentResult {
  ExperimentConfig config;
  Trajectory trajectory;
  // named scalar results, insertion-ordered (mirrors summary.json)
  std::vector<std::pair<std::string, double>> summary;
  int exit_code = 0;

  double value(const std::string& key) const;
  bool has(const std::string& key) const;
};

/// Runs a configured experiment; when `write_artifacts` is set, writes
/// diagnostics.csv, summary.json, config.txt, and snapshots under
/// config.out_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_artifacts = true);

/// Grid/initial state builders shared with tests and bindings.
GridSpec grid_for(const ExperimentConfig& cfg);
ScalarField gaussian_profile(const GridSpec& g, double x0, double y0, double w1, double w2,
                             double amplitude);
ScalarField islands_potential(const GridSpec& g); // cos^2(x1) sin^2(x2)
ScalarField heat_initial_condition(const GridSpec& g, std::uint64_t seed, int modes);
VectorField helical_initial_field(const GridSpec& g, double a, int m, int nmode,
                                  bool normalize);

} // namespace metrix
