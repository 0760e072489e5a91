#pragma once

#include "hitdns/physics.hpp"
#include "hitdns/weno.hpp"

namespace hitdns {

/// Everything the spatial operators need besides the field itself.
struct SpatialOptions {
  GasModel gas{};
  WenoParams weno{};
  double entropy_delta = 0.0;  ///< Harten entropy-fix width; 0 disables the fix
  int workers = 1;
};

}  // namespace hitdns
