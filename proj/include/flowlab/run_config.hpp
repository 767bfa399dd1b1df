#pragma once

// JSON run configuration for flow experiments.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowlab/errors.hpp"
#include "flowlab/flow.hpp"
#include "flowlab/geom.hpp"

namespace flowlab::config {

/// Every problem found in a configuration, one entry per offending key.
class ConfigError : public ArgumentError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct RunConfig {
  flow::FlowConfig flow;
  std::optional<geom::Shape> shape;         // "initial": shape descriptor
  std::optional<std::string> initial_csv;   // "initial_csv": profile CSV path
  std::string trace_csv;
  std::string summary_json;
  std::optional<std::string> final_profile_csv;
};

/// Validates the whole document before building anything; unknown keys,
/// missing keys and out-of-range values are all reported together.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

/// Draft 2020-12 JSON Schema describing the accepted document.
const nlohmann::json& run_config_schema();

}  // namespace flowlab::config
