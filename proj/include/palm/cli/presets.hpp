#pragma once

#include <string>
#include <vector>

#include "palm/cli/config.hpp"

namespace palm::cli {

struct Preset {
  std::string name;
  std::string description;
  bool extended = false;  // long-running configuration, not part of the default gates
  RunConfig config;
};

// Built-in experiment catalog. The files under presets/ mirror these.
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace palm::cli
