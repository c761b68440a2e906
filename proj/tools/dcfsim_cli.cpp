// dcfsim: single runs and parameter sweeps of the 802.11 DCF / TCP dumbbell.
//
//   dcfsim run   [--config f] [--seed n] [--nodes n] [--duration s] [--out csv] [--trace path]
//   dcfsim sweep --sweep retry|cwmin|cwmax|cwpairs [--values list] [--seeds 1..5]
//                [--out csv] [--plot-dir dir]
//
// Exit codes: 0 success, 2 configuration error, 3 internal accounting failure.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dcfsim/config_io.hpp"
#include "dcfsim/metrics.hpp"
#include "dcfsim/sweep.hpp"

namespace {

using namespace dcfsim;

constexpr int kExitConfig = 2;
constexpr int kExitAccounting = 3;

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw ConfigError("not an unsigned integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

/// "3", "1,2,5" or "1..5".
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  if (auto dots = s.find(".."); dots != std::string::npos) {
    const auto lo = parse_u64(s.substr(0, dots));
    const auto hi = parse_u64(s.substr(dots + 2));
    if (lo > hi) throw ConfigError("empty seed range '" + s + "'");
    std::vector<std::uint64_t> out;
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::vector<std::uint64_t> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_u64(p));
  if (out.empty()) throw ConfigError("no seeds given");
  return out;
}

/// "2,7,20" or, for cw pairs, "15:1023,255:511".
std::vector<SweepPoint> parse_values(const std::string& s, SweepKind kind) {
  std::vector<SweepPoint> out;
  for (const auto& item : split(s, ',')) {
    const auto colon = item.find(':');
    if (kind == SweepKind::CwPairs) {
      if (colon == std::string::npos) throw ConfigError("cw pairs are written cwmin:cwmax");
      out.push_back({static_cast<std::uint32_t>(parse_u64(item.substr(0, colon))),
                     static_cast<std::uint32_t>(parse_u64(item.substr(colon + 1)))});
    } else {
      if (colon != std::string::npos) throw ConfigError("unexpected ':' in value '" + item + "'");
      out.push_back({static_cast<std::uint32_t>(parse_u64(item)), 0});
    }
  }
  if (out.empty()) throw ConfigError("no sweep values given");
  return out;
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string sweep;
  std::string values;
  std::optional<std::uint32_t> nodes;
  std::optional<double> duration;
  std::string out;
  std::string plot_dir;
  std::string trace;
  bool allow_any_n = false;
  std::optional<std::uint32_t> cw_min, cw_max, short_retry, long_retry, rts_threshold;
  unsigned threads = 0;
};

ScenarioConfig effective_config(const Options& o) {
  ScenarioConfig cfg;
  if (!o.config.empty()) cfg = load_scenario(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.nodes) cfg.n_intermediate = *o.nodes;
  if (o.duration) {
    if (*o.duration < 0) throw ConfigError("duration must be non-negative");
    cfg.duration = from_seconds(*o.duration);
  }
  if (o.allow_any_n) cfg.allow_any_n = true;
  if (o.cw_min) cfg.mac.cw_min = *o.cw_min;
  if (o.cw_max) cfg.mac.cw_max = *o.cw_max;
  if (o.short_retry) cfg.mac.short_retry_limit = *o.short_retry;
  if (o.long_retry) cfg.mac.long_retry_limit = *o.long_retry;
  if (o.rts_threshold) cfg.mac.rts_threshold_bytes = *o.rts_threshold;
  cfg.validate();
  return cfg;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot write " + path);
  return file;
}

int cmd_run(const Options& o) {
  const ScenarioConfig cfg = effective_config(o);
  std::ofstream trace_file;
  if (!o.trace.empty()) {
    trace_file.open(o.trace);
    if (!trace_file) throw ConfigError("cannot write trace file " + o.trace);
  }
  const RunRow row = run_single(cfg, o.trace.empty() ? nullptr : &trace_file);
  std::ofstream out_file;
  std::ostream& out = open_output(o.out, out_file);
  out << csv_header() << '\n' << csv_row(row) << '\n';
  return 0;
}

int cmd_sweep(const Options& o) {
  SweepSpec spec;
  spec.base = effective_config(o);
  spec.kind = parse_sweep_kind(o.sweep);
  spec.values = o.values.empty() ? default_values(spec.kind) : parse_values(o.values, spec.kind);
  spec.seeds = o.seeds.empty() ? std::vector<std::uint64_t>{spec.base.seed} : parse_seeds(o.seeds);
  spec.threads = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());

  const SweepResult result = run_sweep(spec);
  std::ofstream out_file;
  std::ostream& out = open_output(o.out, out_file);
  write_csv(out, result);
  if (!o.plot_dir.empty()) write_plot_files(o.plot_dir, result);
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON scenario file");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--nodes", o.nodes, "number of intermediate nodes (6, 8 or 10)");
  cmd->add_option("--duration", o.duration, "simulated seconds");
  cmd->add_option("--out", o.out, "CSV output path (default stdout)");
  cmd->add_flag("--allow-any-n", o.allow_any_n, "accept any intermediate node count");
  cmd->add_option("--cw-min", o.cw_min, "CWMin override");
  cmd->add_option("--cw-max", o.cw_max, "CWMax override");
  cmd->add_option("--short-retry", o.short_retry, "short retry limit override");
  cmd->add_option("--long-retry", o.long_retry, "long retry limit override");
  cmd->add_option("--rts-threshold", o.rts_threshold, "RTS threshold in bytes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"802.11 DCF multi-hop TCP simulator"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "one simulation run, one CSV row");
  add_common(run, o);
  run->add_option("--trace", o.trace, "write the MAC event log here");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep over several seeds");
  add_common(sweep, o);
  sweep->add_option("--sweep", o.sweep, "retry | cwmin | cwmax | cwpairs")->required();
  sweep->add_option("--values", o.values, "comma list; cw pairs as cwmin:cwmax");
  sweep->add_option("--seeds", o.seeds, "seed list '1,2,3' or range '1..5'");
  sweep->add_option("--plot-dir", o.plot_dir, "directory for per-metric (x, mean) files");
  sweep->add_option("--threads", o.threads, "worker threads (default: hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    return cmd_sweep(o);
  } catch (const ConfigError& e) {
    std::cerr << "dcfsim: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const AccountingError& e) {
    std::cerr << "dcfsim: internal accounting failure: " << e.what() << '\n';
    return kExitAccounting;
  } catch (const std::exception& e) {
    std::cerr << "dcfsim: " << e.what() << '\n';
    return 1;
  }
}
