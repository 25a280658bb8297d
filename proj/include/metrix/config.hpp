#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metrix/timeint.hpp"

namespace metrix {

/// Initial-condition parameters. Which fields apply depends on the problem;
/// parse_config rejects keys that a preset does not use.
struct IcParams {
  double x0 = 0.0, y0 = 0.0;    // Gaussian center
  double w1 = 0.0, w2 = 0.0;    // Gaussian widths
  double amplitude = 1.0;       // Gaussian prefactor
  std::uint64_t seed = 0;       // random-mode seed (heat1d)
  int modes = 5;                // number of random modes (heat1d)
  double a = 1.0;               // localized helical potential amplitude
  int m = 1, nmode = 1;         // helical mode numbers
  bool normalize = true;        // rescale |B0|_max to 1 (beltrami3d)
};

struct ExperimentConfig {
  std::string problem;
  int resolution = 0; // nodes per axis
  IcParams ic;
  RunConfig run;
  std::string out_dir = "out";
  bool paper_scale = false;

  bool operator==(const ExperimentConfig& o) const;
};

struct ParseError {
  int line = 0;
  std::string message;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<ParseError> errors;
  bool ok() const { return config.has_value() && errors.empty(); }
};

/// Parses the line-oriented `key = value` format with [section] headers.
/// The `problem` key selects a preset whose defaults the remaining keys
/// override. Unknown keys, malformed values, and keys that do not apply to
/// the selected problem are reported with their line numbers.
ParseResult parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& cfg);

} // namespace metrix
