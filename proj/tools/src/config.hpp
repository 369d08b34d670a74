#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spacelike/lattice.hpp"
#include "spacelike/solver.hpp"

namespace spacelike::cli {

/// Invalid configuration. `path` is a JSON pointer to the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error("config error at " + (path.empty() ? std::string("/") : path) + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class Format { Csv, Json };

struct LatticeSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> spacing;
  std::optional<Shell> mask;

  Lattice build() const;
};

struct ScanSpec {
  std::vector<double> radii;
  std::vector<double> center;
  double spacing = 0.0;
  int nodes_per_radius = 32;
};

struct JobConfig {
  std::string command;
  int m = 0;
  int n = 0;
  std::vector<std::string> components;  // graph mode
  std::string potential;                // potential mode
  double c = 1.0;
  std::string boundary;
  std::optional<LatticeSpec> lattice;
  std::vector<double> base_point;
  bool origin_offset = true;
  SolverOptions solver;
  ScanSpec scan;
  std::string out;
  std::optional<Format> format;
  nlohmann::json echo;  // the parsed document, echoed into JSON output
};

/// Validates `doc` for `command`; throws ConfigError with a field path.
JobConfig parse_config(const nlohmann::json& doc, const std::string& command);
JobConfig load_config(const std::string& path, const std::string& command);

}  // namespace spacelike::cli
