#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hitdns/grid.hpp"
#include "hitdns/hit.hpp"
#include "hitdns/spatial.hpp"
#include "hitdns/timeint.hpp"

namespace hitdns {

/// Everything a run needs, with defaults filled in.
struct RunConfig {
  std::optional<int> n;  ///< points per dimension of the cubic box
  double length = 2 * std::numbers::pi;
  int ghost = kGhostWidth;
  Layout layout = Layout::ComponentContiguous;

  TimeParams time;
  SpatialOptions spatial;  ///< gas.mu resolved from re_lambda unless given
  HitParams hit;

  std::optional<std::array<int, 3>> dims;
  std::string output = "hitdns";  ///< prefix of every output file
  long long spectrum_every = 0;   ///< steps between spectra; 0 disables
  std::optional<std::string> initial;  ///< solution file to start from

  GridSpec grid() const;
  /// Checks what `run` needs beyond a valid config: n and a stop condition
  /// plus one of dt/cfl. Throws ConfigError.
  void require_runnable() const;
};

using Override = std::pair<std::string, std::string>;

/// Parses `key=value` lines (`#` starts a comment, blank lines ignored),
/// applies `overrides` on top, fills defaults and validates. Throws
/// ConfigError naming the key for unknown keys, malformed values and
/// cross-field violations.
RunConfig parse_config(const std::string& text, const std::vector<Override>& overrides = {});

/// Reads the file first; throws IoError when it cannot be read.
RunConfig parse_config_file(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

/// Fully resolved `key=value` text; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

/// "2,1,1" -> {2, 1, 1}
std::array<int, 3> parse_dims(const std::string& text);

}  // namespace hitdns
