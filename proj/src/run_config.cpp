#include "flowlab/run_config.hpp"

#include <set>

#include "flowlab/io.hpp"

namespace flowlab::config {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i];
  return s;
}

class Checker {
 public:
  explicit Checker(std::vector<std::string>& problems) : problems_(problems) {}

  void unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) problems_.push_back(where + it.key() + ": unknown key");
    }
  }

  template <class T>
  std::optional<T> get(const json& obj, const std::string& key, const std::string& where, bool required) {
    if (!obj.contains(key)) {
      if (required) problems_.push_back(where + key + ": required key missing");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) return bad(where + key, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return bad(where + key, "expected an integer");
      return v.get<T>();
    } else {
      if (!v.is_number()) return bad(where + key, "expected a number");
      return v.get<T>();
    }
  }

  void fail(const std::string& key, const std::string& what) { problems_.push_back(key + ": " + what); }

 private:
  std::nullopt_t bad(const std::string& key, const std::string& what) {
    fail(key, what);
    return std::nullopt;
  }

  std::vector<std::string>& problems_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : ArgumentError("invalid run configuration: " + join(problems)), problems_(std::move(problems)) {}

RunConfig parse_run_config(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) throw ConfigError({"<root>: expected a JSON object"});
  Checker c(problems);
  c.unknown_keys(doc, {"F", "n", "N", "C_shift", "cfl", "mode", "stop", "record_every", "initial",
                       "initial_csv", "output"},
                 "");

  RunConfig rc;
  const auto F = c.get<std::string>(doc, "F", "", true);
  const auto n = c.get<int>(doc, "n", "", true);
  const auto N = c.get<int>(doc, "N", "", true);
  const auto C = c.get<double>(doc, "C_shift", "", false);
  const auto cfl = c.get<double>(doc, "cfl", "", false);
  const auto mode = c.get<std::string>(doc, "mode", "", true);
  const auto rec = c.get<std::int64_t>(doc, "record_every", "", false);
  const auto initial = c.get<std::string>(doc, "initial", "", false);
  const auto initial_csv = c.get<std::string>(doc, "initial_csv", "", false);

  if (F) {
    try {
      rc.flow.F = symfun::SpeedFunction::parse(*F);
      if (!(rc.flow.F.beta() > 0.0)) c.fail("F", "speed must have positive degree");
    } catch (const ArgumentError& e) {
      c.fail("F", e.what());
    }
  }
  if (n) {
    if (*n < 2 || *n > kMaxDim) c.fail("n", "must be in [2, " + std::to_string(kMaxDim) + "]");
    rc.flow.n = *n;
  }
  if (N) {
    if (*N < 16) c.fail("N", "must be >= 16 (got " + std::to_string(*N) + ")");
    if (*N > 100000) c.fail("N", "must be <= 100000");
    rc.flow.N = *N;
  }
  if (C) {
    if (!(*C <= 0.0)) c.fail("C_shift", "must be <= 0");
    rc.flow.C_shift = *C;
  }
  if (cfl) {
    if (!(*cfl > 0.0 && *cfl <= 1.0)) c.fail("cfl", "must be in (0, 1]");
    rc.flow.cfl = *cfl;
  }
  if (mode) {
    if (*mode == "Raw") {
      rc.flow.mode = flow::Mode::Raw;
    } else if (*mode == "Normalized") {
      rc.flow.mode = flow::Mode::Normalized;
    } else {
      c.fail("mode", "must be \"Raw\" or \"Normalized\"");
    }
  }
  if (rec) {
    if (*rec < 1) c.fail("record_every", "must be >= 1");
    rc.flow.record_every = *rec;
  }

  if (!doc.contains("stop")) {
    c.fail("stop", "required key missing");
  } else if (!doc.at("stop").is_object()) {
    c.fail("stop", "expected an object");
  } else {
    const json& s = doc.at("stop");
    c.unknown_keys(s, {"max_steps", "max_time", "roundness_tol", "min_mean_radius"}, "stop.");
    auto& st = rc.flow.stop;
    st.max_steps = c.get<std::int64_t>(s, "max_steps", "stop.", false);
    st.max_time = c.get<double>(s, "max_time", "stop.", false);
    st.roundness_tol = c.get<double>(s, "roundness_tol", "stop.", false);
    st.min_mean_radius = c.get<double>(s, "min_mean_radius", "stop.", false);
    if (st.max_steps && *st.max_steps < 0) c.fail("stop.max_steps", "must be >= 0");
    if (st.max_time && !(*st.max_time > 0.0)) c.fail("stop.max_time", "must be positive");
    if (st.roundness_tol && !(*st.roundness_tol > 0.0)) c.fail("stop.roundness_tol", "must be positive");
    if (st.min_mean_radius && !(*st.min_mean_radius > 0.0)) c.fail("stop.min_mean_radius", "must be positive");
    if (st.empty()) c.fail("stop", "at least one criterion is required");
  }

  if (initial && initial_csv) c.fail("initial", "give either initial or initial_csv, not both");
  if (!initial && !initial_csv) c.fail("initial", "required key missing (or initial_csv)");
  if (initial) {
    try {
      rc.shape = geom::Shape::parse(*initial);
    } catch (const ArgumentError& e) {
      c.fail("initial", e.what());
    }
  }
  rc.initial_csv = initial_csv;

  if (!doc.contains("output")) {
    c.fail("output", "required key missing");
  } else if (!doc.at("output").is_object()) {
    c.fail("output", "expected an object");
  } else {
    const json& o = doc.at("output");
    c.unknown_keys(o, {"trace_csv", "summary_json", "final_profile_csv"}, "output.");
    const auto trace = c.get<std::string>(o, "trace_csv", "output.", true);
    const auto summary = c.get<std::string>(o, "summary_json", "output.", true);
    rc.final_profile_csv = c.get<std::string>(o, "final_profile_csv", "output.", false);
    if (trace) rc.trace_csv = *trace;
    if (summary) rc.summary_json = *summary;
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("<file>: ") + e.what()});
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<file>: not valid JSON: ") + e.what()});
  }
  return parse_run_config(doc);
}

const json& run_config_schema() {
  static const json schema = json::parse(R"schema({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "flowlab run configuration",
  "type": "object",
  "additionalProperties": false,
  "required": ["F", "n", "N", "mode", "stop", "output"],
  "oneOf": [{"required": ["initial"]}, {"required": ["initial_csv"]}],
  "properties": {
    "F": {"type": "string", "description": "speed function, e.g. sigma(2)^0.5 or S(3)^(1/3)"},
    "n": {"type": "integer", "minimum": 2, "maximum": 12},
    "N": {"type": "integer", "minimum": 16, "maximum": 100000},
    "C_shift": {"type": "number", "maximum": 0, "default": 0},
    "cfl": {"type": "number", "exclusiveMinimum": 0, "maximum": 1, "default": 0.5},
    "mode": {"enum": ["Raw", "Normalized"]},
    "record_every": {"type": "integer", "minimum": 1, "default": 100},
    "initial": {"type": "string", "description": "sphere:R | ellipsoid:A,B | perturbed:R,L,EPS"},
    "initial_csv": {"type": "string", "description": "profile CSV with header theta,rho"},
    "stop": {
      "type": "object",
      "additionalProperties": false,
      "minProperties": 1,
      "properties": {
        "max_steps": {"type": "integer", "minimum": 0},
        "max_time": {"type": "number", "exclusiveMinimum": 0},
        "roundness_tol": {"type": "number", "exclusiveMinimum": 0},
        "min_mean_radius": {"type": "number", "exclusiveMinimum": 0}
      }
    },
    "output": {
      "type": "object",
      "additionalProperties": false,
      "required": ["trace_csv", "summary_json"],
      "properties": {
        "trace_csv": {"type": "string"},
        "summary_json": {"type": "string"},
        "final_profile_csv": {"type": "string"}
      }
    }
  }
})schema");
  return schema;
}

}  // namespace flowlab::config
