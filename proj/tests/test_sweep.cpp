#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dcfsim/sweep.hpp"

using namespace dcfsim;
using namespace std::chrono_literals;

namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

ScenarioConfig short_run(SimTime d = 5s) {
  ScenarioConfig cfg;
  cfg.duration = d;
  return cfg;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("sweep names") {
    CHECK(parse_sweep_kind("retry") == SweepKind::Retry);
    CHECK(parse_sweep_kind("cwmin") == SweepKind::CwMin);
    CHECK(parse_sweep_kind("cwmax") == SweepKind::CwMax);
    CHECK(parse_sweep_kind("cwpairs") == SweepKind::CwPairs);
    CHECK_THROWS_AS(parse_sweep_kind("nope"), ConfigError);
  }

  TEST_CASE("points map onto parameters") {
    const ScenarioConfig base;
    CHECK(apply_point(base, SweepKind::Retry, {20, 0}).mac.short_retry_limit == 20);
    const auto cwmin = apply_point(base, SweepKind::CwMin, {255, 0});
    CHECK(cwmin.mac.cw_min == 255);
    CHECK(cwmin.mac.cw_max == 1023);
    const auto cwmax = apply_point(base, SweepKind::CwMax, {2047, 0});
    CHECK(cwmax.mac.cw_min == 31);
    CHECK(cwmax.mac.cw_max == 2047);
    const auto pair = apply_point(base, SweepKind::CwPairs, {255, 511});
    CHECK(pair.mac.cw_min == 255);
    CHECK(pair.mac.cw_max == 511);
    CHECK(default_values(SweepKind::CwPairs).size() == 7);
    CHECK(to_string(SweepKind::CwPairs, {255, 511}) == "255:511");
  }

  TEST_CASE("cw pairs over three seeds give 7x3 rows plus 7 means") {
    SweepSpec spec;
    spec.kind = SweepKind::CwPairs;
    spec.values = default_values(SweepKind::CwPairs);
    spec.seeds = {1, 2, 3};
    spec.base = short_run(2s);
    spec.threads = 2;
    const auto result = run_sweep(spec);
    CHECK(result.rows.size() == 21);
    CHECK(result.means.size() == 7);
    std::ostringstream csv;
    write_csv(csv, result);
    CHECK(count_lines(csv.str()) == 1 + 21 + 7);
    CHECK(csv.str().rfind(csv_header() + "\n", 0) == 0);
  }

  TEST_CASE("a single run is byte-identical when repeated") {
    const auto cfg = short_run(10s);
    std::ostringstream t1, t2;
    const auto a = run_single(cfg, &t1);
    const auto b = run_single(cfg, &t2);
    CHECK(csv_row(a) == csv_row(b));
    CHECK(t1.str() == t2.str());
    CHECK_FALSE(t1.str().empty());
  }

  TEST_CASE("thread count does not change results") {
    SweepSpec spec;
    spec.kind = SweepKind::Retry;
    spec.values = {{2, 0}, {7, 0}};
    spec.seeds = {1, 2};
    spec.base = short_run(3s);
    std::ostringstream one, many;
    spec.threads = 1;
    write_csv(one, run_sweep(spec));
    spec.threads = 4;
    write_csv(many, run_sweep(spec));
    CHECK(one.str() == many.str());
  }

  TEST_CASE("duration zero gives zero counters") {
    const auto row = run_single(short_run(0s));
    CHECK(row.report == MetricsReport{});
    CHECK(csv_row(row).find(",0,0,0.000000000,0,0,0,0,0,0") != std::string::npos);
  }

  TEST_CASE("mean row") {
    SweepSpec spec;
    spec.kind = SweepKind::Retry;
    spec.values = {{7, 0}};
    spec.seeds = {1, 2};
    spec.base = short_run(3s);
    const auto result = run_sweep(spec);
    REQUIRE(result.rows.size() == 2);
    const auto& m = result.mean_at({7, 0});
    const double expect = (double(result.rows[0].second.report.delivered) +
                           double(result.rows[1].second.report.delivered)) / 2.0;
    CHECK(m.delivered == doctest::Approx(expect));
    CHECK(csv_mean_row(m).find(",mean,") != std::string::npos);
  }

  TEST_CASE("plot files") {
    SweepSpec spec;
    spec.kind = SweepKind::CwMin;
    spec.values = {{15, 0}, {31, 0}};
    spec.seeds = {1};
    spec.base = short_run(2s);
    const auto result = run_sweep(spec);
    const auto dir = std::filesystem::temp_directory_path() / "dcfsim_plot_test";
    std::filesystem::remove_all(dir);
    write_plot_files(dir, result);
    std::ifstream in(dir / "cwmin_delivered.dat");
    REQUIRE(in);
    std::string header, l1, l2;
    std::getline(in, header);
    std::getline(in, l1);
    std::getline(in, l2);
    CHECK(header.rfind("#", 0) == 0);
    CHECK(l1.rfind("15 ", 0) == 0);
    CHECK(l2.rfind("31 ", 0) == 0);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("invalid specs are rejected") {
    SweepSpec spec;
    spec.kind = SweepKind::CwMin;
    spec.values = {{30, 0}};
    spec.base = short_run(1s);
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
    spec.values = {{31, 0}};
    spec.seeds = {};
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
  }
}
