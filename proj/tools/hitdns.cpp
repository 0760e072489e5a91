// Command-line driver: init | run | spectrum | bench | scale.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hitdns/bench.hpp"
#include "hitdns/config.hpp"
#include "hitdns/decomp.hpp"
#include "hitdns/errors.hpp"
#include "hitdns/hit.hpp"
#include "hitdns/solution_io.hpp"
#include "hitdns/timeint.hpp"

namespace {

using namespace hitdns;

enum ExitCode { kOk = 0, kConfig = 2, kSolver = 3, kIo = 4 };

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, CommonArgs& args) {
  app->add_option("-c,--config", args.config_path, "key=value configuration file");
  app->add_option("-s,--set", args.sets, "override one key, e.g. --set n=32")->take_all();
}

RunConfig load(const CommonArgs& args, std::vector<Override> extra = {}) {
  std::vector<Override> overrides;
  for (const auto& s : args.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + s + "' is not key=value");
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  if (args.config_path.empty()) return parse_config("", overrides);
  return parse_config_file(args.config_path, overrides);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

void write_spectrum_file(const std::string& path, const FieldSet& conserved) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_spectrum(out, compute_spectrum(velocity_from_conserved(conserved)), conserved.spec().n[0]);
}

std::string spectrum_path(const RunConfig& cfg, long long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06lld", step);
  return cfg.output + ".spectrum." + buf + ".txt";
}

FieldSet initial_state(RunConfig& cfg) {
  if (cfg.initial) {
    Solution s = read_solution(*cfg.initial);
    if (cfg.n && *cfg.n != s.fields.spec().n[0]) {
      throw ConfigError("n=" + std::to_string(*cfg.n) + " does not match initial file " + *cfg.initial);
    }
    cfg.n = s.fields.spec().n[0];
    return s.fields.layout() == cfg.layout ? std::move(s.fields) : convert_layout(s.fields, cfg.layout);
  }
  FieldSet u = make_initial_condition(cfg.grid(), cfg.hit, cfg.spatial.gas.gamma);
  return u.layout() == cfg.layout ? std::move(u) : convert_layout(u, cfg.layout);
}

int cmd_init(const CommonArgs& args, const std::string& out_path) {
  RunConfig cfg = load(args);
  if (!cfg.n) cfg.n = 64;
  FieldSet u = make_initial_condition(cfg.grid(), cfg.hit, cfg.spatial.gas.gamma);
  if (u.layout() != cfg.layout) u = convert_layout(u, cfg.layout);
  const std::string path = out_path.empty() ? cfg.output + ".init.bin" : out_path;
  write_solution(path, u, 0.0);
  std::cout << "wrote " << path << '\n';
  return kOk;
}

int cmd_run(const CommonArgs& args) {
  RunConfig cfg = load(args);
  cfg.require_runnable();
  FieldSet u0 = initial_state(cfg);
  write_text(cfg.output + ".config", to_text(cfg));

  std::ofstream log(cfg.output + ".log");
  if (!log) throw IoError("cannot write " + cfg.output + ".log");

  if (cfg.dims) {
    ParallelResult result = parallel_advance(u0, *cfg.dims, cfg.time, cfg.spatial);
    for (const auto& r : result.log) log << format_step(r) << '\n';
    write_solution(cfg.output + ".bin", result.state, result.time);
    if (cfg.spectrum_every > 0) write_spectrum_file(spectrum_path(cfg, result.steps), result.state);
    std::cout << "steps " << result.steps << " time " << result.time << '\n';
    return kOk;
  }

  if (cfg.spectrum_every > 0) write_spectrum_file(spectrum_path(cfg, 0), u0);
  const StepObserver observer = [&](const StepRecord& r, const FieldSet& state) {
    log << format_step(r) << '\n';
    if (cfg.spectrum_every > 0 && r.step % cfg.spectrum_every == 0) {
      write_spectrum_file(spectrum_path(cfg, r.step), state);
    }
  };
  AdvanceResult result = advance(std::move(u0), cfg.time, cfg.spatial, observer);
  if (!log) throw IoError("write failed for " + cfg.output + ".log");
  write_solution(cfg.output + ".bin", result.state, result.time);
  std::cout << "steps " << result.steps << " time " << result.time << '\n';
  return kOk;
}

int cmd_spectrum(const std::string& in_path, const std::string& out_path) {
  Solution s = read_solution(in_path);
  const SpectrumTable table = compute_spectrum(velocity_from_conserved(s.fields));
  if (out_path.empty()) {
    write_spectrum(std::cout, table, s.fields.spec().n[0]);
    return kOk;
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);
  write_spectrum(out, table, s.fields.spec().n[0]);
  return kOk;
}

int cmd_bench(const std::vector<int>& sizes, int repeats, const std::string& tile, int workers,
              const std::string& csv_path) {
  int tx = 0, ty = 0;
  if (std::sscanf(tile.c_str(), "%dx%d", &tx, &ty) != 2 || tx <= 0 || ty <= 0) {
    throw ConfigError("tile must look like 32x8");
  }
  const auto records =
      layout_sweep(sizes, {Traversal::lexicographic(), Traversal::tiled(tx, ty)}, repeats, workers);
  std::cout << layout_report(records);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot write " + csv_path);
    write_layout_csv(out, records);
  }
  return kOk;
}

// Periodic copies of `tile` filling a box dims times larger.
FieldSet replicate(const FieldSet& tile, std::array<int, 3> dims) {
  const GridSpec& t = tile.spec();
  const GridSpec big = GridSpec::periodic_box({t.n[0] * dims[0], t.n[1] * dims[1], t.n[2] * dims[2]},
                                              {t.length[0] * dims[0], t.length[1] * dims[1], t.length[2] * dims[2]},
                                              t.ghost);
  FieldSet out(big, tile.layout(), tile.num_vars());
  for (int v = 0; v < tile.num_vars(); ++v) {
    for_each_interior(big, [&](int i, int j, int k) { out(v, i, j, k) = tile(v, i % t.n[0], j % t.n[1], k % t.n[2]); });
  }
  fill_ghosts_periodic(out);
  return out;
}

int cmd_scale(const CommonArgs& args, const std::vector<std::string>& dims_list, const std::vector<int>& ranks_list,
              const std::string& mode_name, const std::string& out_path) {
  RunConfig cfg = load(args);
  if (!cfg.n) cfg.n = 64;
  if (!cfg.time.dt && !cfg.time.cfl) cfg.time.dt = 0.002;
  if (!cfg.time.t_final && !cfg.time.max_steps) cfg.time.max_steps = 10;
  cfg.time.validate();
  ScalingMode mode;
  if (mode_name == "strong") {
    mode = ScalingMode::Strong;
  } else if (mode_name == "weak") {
    mode = ScalingMode::Weak;
  } else {
    throw ConfigError("mode must be strong or weak");
  }

  std::vector<std::array<int, 3>> configurations;
  for (const auto& d : dims_list) configurations.push_back(parse_dims(d));
  for (int r : ranks_list) configurations.push_back(auto_dims(r, cfg.grid()));
  if (configurations.empty()) throw ConfigError("scale needs --dims or --ranks");

  FieldSet base = initial_state(cfg);
  std::vector<ScalingRun> runs;
  for (const auto& dims : configurations) {
    const FieldSet u0 = mode == ScalingMode::Strong ? base : replicate(base, dims);
    const ParallelResult result = parallel_advance(u0, dims, cfg.time, cfg.spatial);
    runs.push_back(summarize(result, dims));
    std::cerr << "ranks " << runs.back().ranks << " dims " << dims_to_string(dims) << " wall " << runs.back().wall
              << '\n';
  }
  const std::string table = scaling_report(runs, mode);
  std::cout << table;
  if (!out_path.empty()) write_text(out_path, table);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressible turbulence solver: WENO5 + Roe, Runge-Kutta time stepping"};
  app.require_subcommand(1);

  CommonArgs init_args, run_args, scale_args;
  std::string init_out;
  auto* init = app.add_subcommand("init", "write the turbulence initial condition");
  add_common(init, init_args);
  init->add_option("-o,--output", init_out, "solution file (default PREFIX.init.bin)");

  auto* run = app.add_subcommand("run", "advance and write PREFIX.bin, PREFIX.log, PREFIX.config");
  add_common(run, run_args);

  std::string spec_in, spec_out;
  auto* spectrum = app.add_subcommand("spectrum", "kinetic energy spectrum of a solution file");
  spectrum->add_option("input", spec_in, "solution file")->required();
  spectrum->add_option("-o,--output", spec_out, "table file (default stdout)");

  std::vector<int> sizes{16, 32, 48, 64};
  int repeats = 5, bench_workers = 1;
  std::string tile = "32x8", csv;
  auto* bench = app.add_subcommand("bench", "weights-kernel layout benchmark");
  bench->add_option("--sizes", sizes, "grid sizes")->delimiter(',');
  bench->add_option("--repeats", repeats, "timed repeats per record");
  bench->add_option("--tile", tile, "tile shape for the tiled traversal");
  bench->add_option("--workers", bench_workers, "threads");
  bench->add_option("--csv", csv, "also write CSV here");

  std::vector<std::string> dims_list;
  std::vector<int> ranks_list;
  std::string mode = "strong", scale_out;
  auto* scale = app.add_subcommand("scale", "scaling study over rank layouts");
  add_common(scale, scale_args);
  scale->add_option("--dims", dims_list, "rank layout such as 2,1,1 (repeatable)")->take_all();
  scale->add_option("--ranks", ranks_list, "rank counts, layout chosen automatically")->delimiter(',');
  scale->add_option("--mode", mode, "strong or weak");
  scale->add_option("-o,--output", scale_out, "also write the table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*init) return cmd_init(init_args, init_out);
    if (*run) return cmd_run(run_args);
    if (*spectrum) return cmd_spectrum(spec_in, spec_out);
    if (*bench) return cmd_bench(sizes, repeats, tile, bench_workers, csv);
    if (*scale) return cmd_scale(scale_args, dims_list, ranks_list, mode, scale_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const InvalidStateError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const ProtocolError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const BoundsError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  }
  return kOk;
}
