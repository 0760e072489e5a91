#include "hitdns/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hitdns/decomp.hpp"
#include "hitdns/errors.hpp"

namespace hitdns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  throw ConfigError("invalid value '" + value + "' for " + key + ": " + why);
}

double to_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end || value.empty()) bad_value(key, value, "expected a number");
  return x;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long x = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end || value.empty()) bad_value(key, value, "expected an integer");
  return x;
}

// Shortest text that parses back to the same double.
std::string number(double x) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

struct Pending {
  RunConfig config;
  bool mu_given = false;
};

using Setter = std::function<void(Pending&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"n", [](Pending& p, const std::string& k, const std::string& v) { p.config.n = int(to_integer(k, v)); }},
      {"length", [](Pending& p, const std::string& k, const std::string& v) { p.config.length = to_double(k, v); }},
      {"ghost", [](Pending& p, const std::string& k, const std::string& v) { p.config.ghost = int(to_integer(k, v)); }},
      {"layout",
       [](Pending& p, const std::string& k, const std::string& v) {
         if (v == "soa" || v == "ComponentContiguous") {
           p.config.layout = Layout::ComponentContiguous;
         } else if (v == "aos" || v == "Interleaved") {
           p.config.layout = Layout::Interleaved;
         } else {
           bad_value(k, v, "expected soa or aos");
         }
       }},
      {"scheme",
       [](Pending& p, const std::string& k, const std::string& v) {
         if (v == "rk3") {
           p.config.time.scheme = Scheme::RK3TVD;
         } else if (v == "rk4") {
           p.config.time.scheme = Scheme::RK4;
         } else {
           bad_value(k, v, "expected rk3 or rk4");
         }
       }},
      {"dt", [](Pending& p, const std::string& k, const std::string& v) { p.config.time.dt = to_double(k, v); }},
      {"cfl", [](Pending& p, const std::string& k, const std::string& v) { p.config.time.cfl = to_double(k, v); }},
      {"cfl_mode",
       [](Pending& p, const std::string& k, const std::string& v) {
         if (v == "max") {
           p.config.time.cfl_mode = CflMode::Max;
         } else if (v == "sum") {
           p.config.time.cfl_mode = CflMode::Sum;
         } else {
           bad_value(k, v, "expected max or sum");
         }
       }},
      {"t_final",
       [](Pending& p, const std::string& k, const std::string& v) { p.config.time.t_final = to_double(k, v); }},
      {"max_steps",
       [](Pending& p, const std::string& k, const std::string& v) { p.config.time.max_steps = to_integer(k, v); }},
      {"gamma",
       [](Pending& p, const std::string& k, const std::string& v) { p.config.spatial.gas.gamma = to_double(k, v); }},
      {"prandtl",
       [](Pending& p, const std::string& k, const std::string& v) { p.config.spatial.gas.prandtl = to_double(k, v); }},
      {"mu",
       [](Pending& p, const std::string& k, const std::string& v) {
         p.config.spatial.gas.mu = to_double(k, v);
         p.mu_given = true;
       }},
      {"visc_scale",
       [](Pending& p, const std::string& k, const std::string& v) {
         p.config.spatial.gas.visc_scale = to_double(k, v);
       }},
      {"epsilon",
       [](Pending& p, const std::string& k, const std::string& v) { p.config.spatial.weno.epsilon = to_double(k, v); }},
      {"power",
       [](Pending& p, const std::string& k, const std::string& v) {
         p.config.spatial.weno.power = int(to_integer(k, v));
       }},
      {"entropy_delta",
       [](Pending& p, const std::string& k, const std::string& v) {
         p.config.spatial.entropy_delta = to_double(k, v);
       }},
      {"workers",
       [](Pending& p, const std::string& k, const std::string& v) {
         p.config.spatial.workers = int(to_integer(k, v));
       }},
      {"u0", [](Pending& p, const std::string& k, const std::string& v) { p.config.hit.u0 = to_double(k, v); }},
      {"k0", [](Pending& p, const std::string& k, const std::string& v) { p.config.hit.k0 = to_double(k, v); }},
      {"re_lambda",
       [](Pending& p, const std::string& k, const std::string& v) { p.config.hit.re_lambda = to_double(k, v); }},
      {"seed",
       [](Pending& p, const std::string& k, const std::string& v) {
         const long long s = to_integer(k, v);
         if (s < 0) bad_value(k, v, "seed must be nonnegative");
         p.config.hit.seed = std::uint64_t(s);
       }},
      {"dims",
       [](Pending& p, const std::string& k, const std::string& v) {
         try {
           p.config.dims = parse_dims(v);
         } catch (const ConfigError& e) {
           bad_value(k, v, e.what());
         }
       }},
      {"output", [](Pending& p, const std::string&, const std::string& v) { p.config.output = v; }},
      {"spectrum_every",
       [](Pending& p, const std::string& k, const std::string& v) { p.config.spectrum_every = to_integer(k, v); }},
      {"initial", [](Pending& p, const std::string&, const std::string& v) { p.config.initial = v; }},
  };
  return table;
}

void apply(Pending& pending, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
  it->second(pending, key, value);
}

void validate(const RunConfig& c) {
  if (c.n && (*c.n <= 0 || *c.n % 2 != 0)) {
    throw ConfigError("n must be a positive even number, got " + std::to_string(*c.n));
  }
  if (!(c.length > 0)) throw ConfigError("length must be positive");
  if (c.ghost < kGhostWidth) throw ConfigError("ghost must be at least " + std::to_string(kGhostWidth));
  if (c.time.dt && c.time.cfl) throw ConfigError("dt and cfl are mutually exclusive");
  if (c.time.dt && !(*c.time.dt > 0)) throw ConfigError("dt must be positive");
  if (c.time.cfl && !(*c.time.cfl > 0)) throw ConfigError("cfl must be positive");
  if (c.time.t_final && !(*c.time.t_final > 0)) throw ConfigError("t_final must be positive");
  if (c.time.max_steps && *c.time.max_steps < 0) throw ConfigError("max_steps must be nonnegative");
  c.spatial.gas.validate();
  if (!(c.spatial.weno.epsilon > 0)) throw ConfigError("epsilon must be positive");
  if (c.spatial.weno.power < 1) throw ConfigError("power must be a positive integer");
  if (!(c.spatial.entropy_delta >= 0)) throw ConfigError("entropy_delta must be nonnegative");
  if (c.spatial.workers < 1) throw ConfigError("workers must be at least 1");
  c.hit.validate();
  if (c.spectrum_every < 0) throw ConfigError("spectrum_every must be nonnegative");
  if (c.output.empty()) throw ConfigError("output prefix must not be empty");
  if (c.dims && c.n) decompose(c.grid(), *c.dims);
}

}  // namespace

GridSpec RunConfig::grid() const {
  if (!n) throw ConfigError("grid size n is not set");
  return GridSpec::cube(*n, length, ghost);
}

void RunConfig::require_runnable() const {
  if (!n && !initial) throw ConfigError("run requires n or an initial solution file");
  time.validate();
}

std::array<int, 3> parse_dims(const std::string& text) {
  std::array<int, 3> dims{};
  std::stringstream in(text);
  std::string part;
  int count = 0;
  while (std::getline(in, part, ',')) {
    if (count == 3) throw ConfigError("dims needs exactly three entries");
    part = trim(part);
    int x = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty() || x <= 0) {
      throw ConfigError("dims entries must be positive integers");
    }
    dims[std::size_t(count++)] = x;
  }
  if (count != 3) throw ConfigError("dims needs exactly three entries");
  return dims;
}

RunConfig parse_config(const std::string& text, const std::vector<Override>& overrides) {
  Pending pending;
  std::istringstream in(text);
  std::string line;
  int number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number_of_line) + ": expected key=value");
    }
    apply(pending, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const auto& [key, value] : overrides) apply(pending, key, value);

  RunConfig& c = pending.config;
  c.hit.validate();
  if (!pending.mu_given) c.spatial.gas.mu = viscosity_from_re_lambda(c.hit);
  validate(c);
  return c;
}

RunConfig parse_config_file(const std::filesystem::path& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides);
}

std::string to_text(const RunConfig& c) {
  std::ostringstream out;
  if (c.n) out << "n=" << *c.n << '\n';
  out << "length=" << number(c.length) << '\n';
  out << "ghost=" << c.ghost << '\n';
  out << "layout=" << (c.layout == Layout::Interleaved ? "aos" : "soa") << '\n';
  out << "scheme=" << (c.time.scheme == Scheme::RK4 ? "rk4" : "rk3") << '\n';
  if (c.time.dt) out << "dt=" << number(*c.time.dt) << '\n';
  if (c.time.cfl) out << "cfl=" << number(*c.time.cfl) << '\n';
  out << "cfl_mode=" << (c.time.cfl_mode == CflMode::Sum ? "sum" : "max") << '\n';
  if (c.time.t_final) out << "t_final=" << number(*c.time.t_final) << '\n';
  if (c.time.max_steps) out << "max_steps=" << *c.time.max_steps << '\n';
  out << "gamma=" << number(c.spatial.gas.gamma) << '\n';
  out << "prandtl=" << number(c.spatial.gas.prandtl) << '\n';
  out << "mu=" << number(c.spatial.gas.mu) << '\n';
  out << "visc_scale=" << number(c.spatial.gas.visc_scale) << '\n';
  out << "epsilon=" << number(c.spatial.weno.epsilon) << '\n';
  out << "power=" << c.spatial.weno.power << '\n';
  out << "entropy_delta=" << number(c.spatial.entropy_delta) << '\n';
  out << "workers=" << c.spatial.workers << '\n';
  out << "u0=" << number(c.hit.u0) << '\n';
  out << "k0=" << number(c.hit.k0) << '\n';
  out << "re_lambda=" << number(c.hit.re_lambda) << '\n';
  out << "seed=" << c.hit.seed << '\n';
  if (c.dims) out << "dims=" << (*c.dims)[0] << ',' << (*c.dims)[1] << ',' << (*c.dims)[2] << '\n';
  out << "output=" << c.output << '\n';
  out << "spectrum_every=" << c.spectrum_every << '\n';
  if (c.initial) out << "initial=" << *c.initial << '\n';
  return out.str();
}

}  // namespace hitdns
