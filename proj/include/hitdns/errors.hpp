#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace hitdns {

/// Index outside the ghosted box, or a variable/point offset out of range.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Bad configuration: unknown key, invalid value, or a cross-field violation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nonpositive density or pressure. Carries the grid point (and rank) when
/// the failure was detected inside a field kernel.
class InvalidStateError : public std::runtime_error {
 public:
  explicit InvalidStateError(const std::string& what,
                             std::optional<std::array<int, 3>> point = std::nullopt,
                             std::optional<int> rank = std::nullopt);

  const std::optional<std::array<int, 3>>& point() const { return point_; }
  const std::optional<int>& rank() const { return rank_; }

  InvalidStateError with_rank(int rank) const;

 private:
  std::string message_;
  std::optional<std::array<int, 3>> point_;
  std::optional<int> rank_;
};

/// Time-step failure; wraps the underlying cause with step/stage context.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Halo-exchange message did not have the expected size.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hitdns
