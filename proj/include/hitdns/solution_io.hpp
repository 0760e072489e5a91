#pragma once

#include <filesystem>
#include <iosfwd>

#include "hitdns/grid.hpp"

namespace hitdns {

/// Contents of a solution file: interior conserved variables plus the time
/// they belong to.
struct Solution {
  FieldSet fields;
  double time = 0.0;
};

/// Little-endian solution format:
///   "HITDNS01" | u64 nx ny nz | f64 Lx Ly Lz | f64 time | u64 layout |
///   interior values in the declared layout's order (no ghosts).
void write_solution(std::ostream& out, const FieldSet& fields, double time);
void write_solution(const std::filesystem::path& path, const FieldSet& fields, double time);

/// Reads a solution into a ghosted FieldSet (ghost width 3) in the file's
/// layout, with ghosts filled periodically. Throws IoError on malformed input.
Solution read_solution(std::istream& in);
Solution read_solution(const std::filesystem::path& path);

}  // namespace hitdns
