#pragma once

// Run configuration: one JSON document describing source, geometry, detector,
// phases, grids and outputs.  Validation failures carry field paths.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ghost/grid_oracle.hpp"

namespace ghost {

using json = nlohmann::ordered_json;

struct DetectorSpec {
  enum class Kind { uniform, inline_gram, random };
  Kind kind = Kind::uniform;
  double s = 0.0;                 // uniform overlap
  Eigen::MatrixXcd gram;          // inline matrix (row-major [re,im] pairs in JSON)
  std::uint64_t seed = 1;         // random Gram seed

  DetectorGram build(int n, std::optional<std::uint64_t> seed_override) const;
};

struct EnvelopeSpec {
  enum class Mode { pipeline, equal, values };
  Mode mode = Mode::pipeline;
  std::vector<double> values;
};

struct SweepAxis {
  std::string parameter;  // e.g. detector.s, source.omega, geometry.L1
  double from = 0.0;
  double to = 1.0;
  int steps = 2;
};

struct ZGridSpec {
  bool automatic = true;   // +-10 fringe periods when true
  double half_width = 0.0;
  int points = 4001;
};

struct RunConfig {
  SourceParams source;
  Geometry geometry;
  DetectorSpec detector;
  std::vector<double> phases;  // empty = all zero
  EnvelopeSpec envelopes;
  ZGridSpec z2_grid;
  oracle::GridSpec oracle_grid;
  bool has_oracle = false;
  double oracle_tolerance = 1e-3;
  std::optional<SweepAxis> sweep;
  std::optional<SweepAxis> sweep2;
  std::vector<std::string> outputs{"csv", "json"};

  // Throws config_error with a field path on any invalid entry.
  static RunConfig from_json(const json& j);
  static RunConfig load(const std::string& path);
  json to_json() const;  // canonical snapshot; reloads to an equivalent config

  std::vector<double> z2_points() const;
  bool wants(const std::string& output) const;
};

// Assignable sweep parameters: detector.s, source.sigma, source.omega,
// geometry.L1, geometry.L2, geometry.lambda, geometry.slit_width,
// geometry.slit_spacing.  Throws config_error for anything else.
void apply_parameter(RunConfig& cfg, const std::string& path, double value);

std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const RunConfig& cfg);  // hex FNV-1a of the canonical dump

}  // namespace ghost
