#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "config.hpp"

namespace spacelike::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitInvariant = 3;

struct RunOptions {
  std::string config_path;
  std::string out;  // overrides the config output path; empty means config or stdout
  std::optional<Format> format;
  bool oracle = false;
  int threads = 1;
  std::uint64_t seed = 1;
};

/// Runs one command end to end. Diagnostics go to `err`; reports go to the
/// configured output. Returns the process exit code.
int run_command(const std::string& command, const RunOptions& opt, std::ostream& err);

const char* version();

}  // namespace spacelike::cli
