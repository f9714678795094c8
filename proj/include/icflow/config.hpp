#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icflow/flow.hpp"
#include "icflow/verify.hpp"

namespace icflow {

// Plain-text key-value run configuration with [shape] [grid] [flow] [suite]
// [output] sections. Unknown sections or keys are errors.
struct RunConfig {
  std::optional<ShapeSpec> shape;
  GridSpec grid;
  std::optional<FlowConfig> flow;
  double record_every = 0.1;
  SuiteConfig suite;
  bool suite_given = false;
  std::string out_dir = "out";
  bool svg = true;

  // raw resolved key/values in stable section order, for re-serialization
  std::vector<std::pair<std::string, std::string>> resolved;
};

RunConfig parse_config_file(const std::string& path);      // throws ConfigError
RunConfig parse_config_text(const std::string& text);      // throws ConfigError
std::string serialize_config(const RunConfig& cfg);        // round-trip idempotent

// Override one dotted key ("section.key") in the raw text; used by sweep.
std::string override_key(const std::string& text, const std::string& dotted,
                         const std::string& value);        // throws ConfigError on unknown key

}  // namespace icflow
