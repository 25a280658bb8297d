#pragma once

#include <string>
#include <vector>

#include "metrix/config.hpp"

namespace metrix {

struct PresetInfo {
  std::string name;
  std::string summary;     // what the experiment demonstrates
  std::string reference;   // headline quantity checked by the run
  int resolution = 0;
  std::string dt;          // default step ("auto" for adaptive)
  double t_end = 0.0;
};

const std::vector<PresetInfo>& preset_table();
bool is_preset(const std::string& name);

/// Full default configuration for a preset (desk-scale resolution).
ExperimentConfig preset_config(const std::string& name);

/// Paper-scale variant (restores the full published resolution/step where
/// the desk default is reduced).
void apply_paper_scale(ExperimentConfig& cfg);

/// Fixed-width text table of all presets.
std::string format_preset_table();

} // namespace metrix
