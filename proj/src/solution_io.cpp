#include "hitdns/solution_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "hitdns/errors.hpp"

namespace hitdns {

namespace {

constexpr char kMagic[8] = {'H', 'I', 'T', 'D', 'N', 'S', '0', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  unsigned char bytes[8];
  std::memcpy(bytes, &value, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + 8);
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

template <typename T>
T get_le(std::istream& in) {
  static_assert(sizeof(T) == 8);
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("solution file truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + 8);
  T value;
  std::memcpy(&value, bytes, 8);
  return value;
}

}  // namespace

void write_solution(std::ostream& out, const FieldSet& fields, double time) {
  if (fields.num_vars() != kNumConserved) throw IoError("solution files hold exactly 5 variables");
  const GridSpec& s = fields.spec();
  out.write(kMagic, 8);
  for (int d = 0; d < 3; ++d) put_le<std::uint64_t>(out, std::uint64_t(s.n[d]));
  for (int d = 0; d < 3; ++d) put_le<double>(out, s.length[d]);
  put_le<double>(out, time);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(fields.layout()));

  if (fields.layout() == Layout::Interleaved) {
    for_each_interior(s, [&](int i, int j, int k) {
      for (int v = 0; v < kNumConserved; ++v) put_le<double>(out, fields(v, i, j, k));
    });
  } else {
    for (int v = 0; v < kNumConserved; ++v) {
      for_each_interior(s, [&](int i, int j, int k) { put_le<double>(out, fields(v, i, j, k)); });
    }
  }
  if (!out) throw IoError("failed writing solution data");
}

void write_solution(const std::filesystem::path& path, const FieldSet& fields, double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_solution(out, fields, time);
}

Solution read_solution(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw IoError("not a HITDNS01 solution file");
  std::array<int, 3> n{};
  std::array<double, 3> length{};
  for (int d = 0; d < 3; ++d) {
    const auto value = get_le<std::uint64_t>(in);
    if (value == 0 || value > (1u << 20)) throw IoError("implausible grid dimension in solution header");
    n[d] = int(value);
  }
  for (int d = 0; d < 3; ++d) length[d] = get_le<double>(in);
  const double time = get_le<double>(in);
  const auto tag = get_le<std::uint64_t>(in);
  if (tag > 1) throw IoError("unknown layout tag " + std::to_string(tag));

  GridSpec spec;
  try {
    spec = GridSpec::periodic_box(n, length);
  } catch (const ConfigError& e) {
    throw IoError(std::string("invalid solution header: ") + e.what());
  }
  Solution sol{FieldSet(spec, static_cast<Layout>(tag)), time};
  FieldSet& f = sol.fields;
  if (f.layout() == Layout::Interleaved) {
    for_each_interior(spec, [&](int i, int j, int k) {
      for (int v = 0; v < kNumConserved; ++v) f(v, i, j, k) = get_le<double>(in);
    });
  } else {
    for (int v = 0; v < kNumConserved; ++v) {
      for_each_interior(spec, [&](int i, int j, int k) { f(v, i, j, k) = get_le<double>(in); });
    }
  }
  fill_ghosts_periodic(f);
  return sol;
}

Solution read_solution(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_solution(in);
}

}  // namespace hitdns
