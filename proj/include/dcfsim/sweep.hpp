#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dcfsim/metrics.hpp"
#include "dcfsim/scenario.hpp"

namespace dcfsim {

enum class SweepKind : std::uint8_t { None, Retry, CwMin, CwMax, CwPairs };

std::string_view to_string(SweepKind k);
/// Throws ConfigError for unknown names.
SweepKind parse_sweep_kind(std::string_view name);

/// One parameter value on a sweep axis. `second` is used only by CwPairs
/// (as cw_max).
struct SweepPoint {
  std::uint32_t first = 0;
  std::uint32_t second = 0;
  auto operator<=>(const SweepPoint&) const = default;
};

std::string to_string(SweepKind kind, SweepPoint p);

struct SweepSpec {
  SweepKind kind = SweepKind::None;
  std::vector<SweepPoint> values;
  std::vector<std::uint64_t> seeds{1};
  ScenarioConfig base;
  unsigned threads = 1;

  void validate() const;
};

/// Default grid for each axis.
std::vector<SweepPoint> default_values(SweepKind kind);

/// `base` with the swept parameter(s) set to `p`. Cw sweeps hold the other
/// limit at its axis default (cw_max 1023 for CwMin, cw_min 31 for CwMax).
ScenarioConfig apply_point(const ScenarioConfig& base, SweepKind kind, SweepPoint p);

struct RunRow {
  std::uint32_t n_intermediate = 0;
  std::uint32_t short_retry = 0;
  std::uint32_t long_retry = 0;
  std::uint32_t cw_min = 0;
  std::uint32_t cw_max = 0;
  std::uint64_t seed = 0;
  MetricsReport report;
};

/// Column-wise mean over the seeds of one sweep point.
struct MeanRow {
  SweepPoint point;
  std::uint32_t n_intermediate = 0;
  std::uint32_t short_retry = 0;
  std::uint32_t long_retry = 0;
  std::uint32_t cw_min = 0;
  std::uint32_t cw_max = 0;
  double sent = 0, delivered = 0, avg_delay_s = 0, total_dropped = 0, mac_dropped = 0,
         collision_dropped = 0, retry_dropped = 0, queue_dropped = 0, in_flight_at_end = 0;
};

struct SweepResult {
  SweepKind kind = SweepKind::None;
  /// Ordered by (point, seed).
  std::vector<std::pair<SweepPoint, RunRow>> rows;
  /// One per point, in point order.
  std::vector<MeanRow> means;

  const MeanRow& mean_at(SweepPoint p) const;
};

/// One deterministic run. A non-null `trace` receives the MAC event log.
RunRow run_single(const ScenarioConfig& cfg, std::ostream* trace = nullptr);

/// Runs every (point, seed) combination, possibly on several threads; the
/// result does not depend on execution order.
SweepResult run_sweep(const SweepSpec& spec);

std::string csv_header();
std::string csv_row(const RunRow& row);
std::string csv_mean_row(const MeanRow& row);
/// Header, then for each point its per-seed rows followed by its mean row.
void write_csv(std::ostream& out, const SweepResult& result);

/// Writes one two-column (x, mean) file per metric into `dir`.
void write_plot_files(const std::filesystem::path& dir, const SweepResult& result);

}  // namespace dcfsim
