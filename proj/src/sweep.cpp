#include "dcfsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "dcfsim/network.hpp"

namespace dcfsim {

std::string_view to_string(SweepKind k) {
  switch (k) {
    case SweepKind::None: return "none";
    case SweepKind::Retry: return "retry";
    case SweepKind::CwMin: return "cwmin";
    case SweepKind::CwMax: return "cwmax";
    case SweepKind::CwPairs: return "cwpairs";
  }
  return "?";
}

SweepKind parse_sweep_kind(std::string_view name) {
  for (auto k : {SweepKind::None, SweepKind::Retry, SweepKind::CwMin, SweepKind::CwMax,
                 SweepKind::CwPairs}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown sweep kind '" + std::string(name) + "'");
}

std::string to_string(SweepKind kind, SweepPoint p) {
  if (kind == SweepKind::CwPairs) return fmt::format("{}:{}", p.first, p.second);
  return std::to_string(p.first);
}

std::vector<SweepPoint> default_values(SweepKind kind) {
  auto singles = [](std::initializer_list<std::uint32_t> v) {
    std::vector<SweepPoint> out;
    for (auto x : v) out.push_back({x, 0});
    return out;
  };
  switch (kind) {
    case SweepKind::None: return {{0, 0}};
    case SweepKind::Retry: return singles({2, 4, 7, 10, 14, 20, 28});
    case SweepKind::CwMin: return singles({15, 31, 63, 127, 255, 511, 1023});
    case SweepKind::CwMax: return singles({63, 127, 255, 511, 1023, 2047});
    case SweepKind::CwPairs:
      return {{15, 1023}, {31, 1023}, {31, 511}, {127, 255}, {127, 511}, {127, 1023}, {255, 511}};
  }
  return {};
}

ScenarioConfig apply_point(const ScenarioConfig& base, SweepKind kind, SweepPoint p) {
  ScenarioConfig cfg = base;
  switch (kind) {
    case SweepKind::None: break;
    case SweepKind::Retry: cfg.mac.short_retry_limit = p.first; break;
    case SweepKind::CwMin:
      cfg.mac.cw_min = p.first;
      cfg.mac.cw_max = 1023;
      break;
    case SweepKind::CwMax:
      cfg.mac.cw_min = 31;
      cfg.mac.cw_max = p.first;
      break;
    case SweepKind::CwPairs:
      cfg.mac.cw_min = p.first;
      cfg.mac.cw_max = p.second;
      break;
  }
  return cfg;
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  for (const auto& p : values) {
    if (kind == SweepKind::CwPairs && p.first > p.second)
      throw ConfigError("cw pair " + to_string(kind, p) + " has cw_min > cw_max");
    apply_point(base, kind, p).validate();
  }
}

const MeanRow& SweepResult::mean_at(SweepPoint p) const {
  for (const auto& m : means) {
    if (m.point == p) return m;
  }
  throw std::out_of_range("no sweep point " + to_string(kind, p));
}

RunRow run_single(const ScenarioConfig& cfg, std::ostream* trace) {
  const Topology topo = build_dumbbell(cfg);
  Network net(topo, NetworkConfig::from(cfg));
  net.set_trace(trace);
  RunRow row;
  row.n_intermediate = cfg.n_intermediate;
  row.short_retry = cfg.mac.short_retry_limit;
  row.long_retry = cfg.mac.long_retry_limit;
  row.cw_min = cfg.mac.cw_min;
  row.cw_max = cfg.mac.cw_max;
  row.seed = cfg.seed;
  row.report = net.run();
  return row;
}

namespace {

template <typename E>
[[noreturn]] void rethrow_with_context(const E& e, const std::string& ctx) {
  throw E(ctx + ": " + e.what());
}

RunRow run_job(const SweepSpec& spec, SweepPoint p, std::uint64_t seed) {
  ScenarioConfig cfg = apply_point(spec.base, spec.kind, p);
  cfg.seed = seed;
  const std::string ctx =
      fmt::format("run {}={} seed={}", to_string(spec.kind), to_string(spec.kind, p), seed);
  try {
    return run_single(cfg);
  } catch (const ConfigError& e) {
    rethrow_with_context(e, ctx);
  } catch (const AccountingError& e) {
    rethrow_with_context(e, ctx);
  } catch (const std::exception& e) {
    throw std::runtime_error(ctx + ": " + e.what());
  }
}

MeanRow mean_of(SweepPoint p, const std::vector<const RunRow*>& rows) {
  MeanRow m;
  m.point = p;
  const RunRow& first = *rows.front();
  m.n_intermediate = first.n_intermediate;
  m.short_retry = first.short_retry;
  m.long_retry = first.long_retry;
  m.cw_min = first.cw_min;
  m.cw_max = first.cw_max;
  const double n = static_cast<double>(rows.size());
  for (const RunRow* r : rows) {
    const MetricsReport& x = r->report;
    m.sent += x.sent / n;
    m.delivered += x.delivered / n;
    m.avg_delay_s += x.avg_delay_s / n;
    m.total_dropped += x.total_dropped / n;
    m.mac_dropped += x.mac_dropped / n;
    m.collision_dropped += x.collision_dropped / n;
    m.retry_dropped += x.retry_dropped / n;
    m.queue_dropped += x.queue_dropped / n;
    m.in_flight_at_end += x.in_flight_at_end / n;
  }
  return m;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();

  std::vector<SweepPoint> points = spec.values;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  struct Job {
    SweepPoint point;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& p : points)
    for (auto s : seeds) jobs.push_back({p, s});

  std::vector<RunRow> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      {
        std::lock_guard lock(failure_mu);
        if (failure) return;
      }
      try {
        out[i] = run_job(spec, jobs[i].point, jobs[i].seed);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const unsigned n_threads = std::clamp<unsigned>(spec.threads, 1, std::max<std::size_t>(jobs.size(), 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  result.kind = spec.kind;
  std::size_t i = 0;
  for (const auto& p : points) {
    std::vector<const RunRow*> group;
    for (std::size_t k = 0; k < seeds.size(); ++k, ++i) {
      result.rows.emplace_back(p, out[i]);
      group.push_back(&out[i]);
    }
    result.means.push_back(mean_of(p, group));
  }
  return result;
}

std::string csv_header() {
  return "n_intermediate,short_retry,long_retry,cw_min,cw_max,seed,"
         "sent,delivered,avg_delay_s,total_dropped,mac_dropped,collision_dropped,"
         "retry_dropped,queue_dropped,in_flight_at_end";
}

std::string csv_row(const RunRow& r) {
  const MetricsReport& m = r.report;
  return fmt::format("{},{},{},{},{},{},{},{},{:.9f},{},{},{},{},{},{}", r.n_intermediate,
                     r.short_retry, r.long_retry, r.cw_min, r.cw_max, r.seed, m.sent, m.delivered,
                     m.avg_delay_s, m.total_dropped, m.mac_dropped, m.collision_dropped,
                     m.retry_dropped, m.queue_dropped, m.in_flight_at_end);
}

std::string csv_mean_row(const MeanRow& r) {
  return fmt::format("{},{},{},{},{},mean,{:.3f},{:.3f},{:.9f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f}",
                     r.n_intermediate, r.short_retry, r.long_retry, r.cw_min, r.cw_max, r.sent,
                     r.delivered, r.avg_delay_s, r.total_dropped, r.mac_dropped,
                     r.collision_dropped, r.retry_dropped, r.queue_dropped, r.in_flight_at_end);
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << csv_header() << '\n';
  auto row = result.rows.begin();
  for (const auto& m : result.means) {
    for (; row != result.rows.end() && row->first == m.point; ++row) out << csv_row(row->second) << '\n';
    out << csv_mean_row(m) << '\n';
  }
}

void write_plot_files(const std::filesystem::path& dir, const SweepResult& result) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, double MeanRow::*> metrics[] = {
      {"delivered", &MeanRow::delivered},
      {"avg_delay_s", &MeanRow::avg_delay_s},
      {"total_dropped", &MeanRow::total_dropped},
      {"mac_dropped", &MeanRow::mac_dropped},
      {"collision_dropped", &MeanRow::collision_dropped},
      {"retry_dropped", &MeanRow::retry_dropped},
      {"queue_dropped", &MeanRow::queue_dropped},
  };
  for (const auto& [name, field] : metrics) {
    const auto path = dir / fmt::format("{}_{}.dat", to_string(result.kind), name);
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "# " << to_string(result.kind) << ' ' << name << '\n';
    for (const auto& m : result.means)
      f << to_string(result.kind, m.point) << ' ' << fmt::format("{:.9g}", m.*field) << '\n';
  }
}

}  // namespace dcfsim
