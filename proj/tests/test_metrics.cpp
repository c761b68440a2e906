#include <doctest.h>

#include "dcfsim/metrics.hpp"

using namespace dcfsim;
using namespace std::chrono_literals;

TEST_SUITE("metrics") {
  TEST_CASE("one delivered packet") {
    MetricsCollector m;
    m.record_send(1, 0s);
    m.record_receive(1, 20ms, 0s);
    const auto r = m.finalize();
    CHECK(r.sent == 1);
    CHECK(r.delivered == 1);
    CHECK(r.delay_defined);
    CHECK(r.avg_delay_s == doctest::Approx(0.02));
    CHECK(r.in_flight_at_end == 0);
  }

  TEST_CASE("one retry drop") {
    MetricsCollector m;
    m.record_send(1, 0s);
    m.record_drop(1, 1s, 3, DropReason::RetryLimitExceeded);
    const auto r = m.finalize();
    CHECK(r.retry_dropped == 1);
    CHECK(r.mac_dropped == 1);
    CHECK(r.total_dropped == 1);
    CHECK(r.delivered == 0);
    CHECK_FALSE(r.delay_defined);
    CHECK(r.avg_delay_s == 0.0);
  }

  TEST_CASE("nothing sent") {
    const auto r = MetricsCollector{}.finalize(0);
    CHECK(r == MetricsReport{});
  }

  TEST_CASE("average delay") {
    MetricsCollector m;
    m.record_send(1, 0s);
    m.record_send(2, 0s);
    m.record_receive(1, 100ms, 0s);
    m.record_receive(2, 1300ms, 1s);
    CHECK(m.finalize().avg_delay_s == doctest::Approx(0.2));
  }

  TEST_CASE("drop categories add up") {
    MetricsCollector m;
    for (std::uint64_t c = 1; c <= 8; ++c) m.record_send(c, 0s);
    m.record_drop(1, 1s, 0, DropReason::Collision);
    m.record_drop(2, 1s, 0, DropReason::Collision);
    m.record_drop(3, 1s, 0, DropReason::RetryLimitExceeded);
    m.record_drop(4, 1s, 0, DropReason::QueueOverflow);
    m.record_drop(5, 1s, 0, DropReason::NoRoute);
    m.record_receive(6, 2s, 0s);
    const auto r = m.finalize(2);
    CHECK(r.collision_dropped == 2);
    CHECK(r.retry_dropped == 1);
    CHECK(r.mac_dropped == r.collision_dropped + r.retry_dropped);
    CHECK(r.queue_dropped == 1);
    CHECK(r.noroute_dropped == 1);
    CHECK(r.total_dropped == 5);
    CHECK(r.in_flight_at_end == 2);
    CHECK(r.sent == r.delivered + r.total_dropped + r.in_flight_at_end);
    CHECK(m.drops().size() == 5);
  }

  TEST_CASE("conservation arithmetic at table scale") {
    MetricsCollector m;
    std::uint64_t c = 0;
    for (; c < 2000; ++c) m.record_send(c, 0s);
    for (std::uint64_t k = 0; k < 1668; ++k) m.record_receive(k, 1s, 0s);
    for (std::uint64_t k = 1668; k < 1668 + 93; ++k) m.record_drop(k, 1s, 0, DropReason::QueueOverflow);
    const auto r = m.finalize(239);
    CHECK(r.in_flight_at_end == 239);
    CHECK_THROWS_AS(m.finalize(238), AccountingError);
  }

  TEST_CASE("a second terminal outcome is a bug") {
    MetricsCollector m;
    m.record_send(1, 0s);
    m.record_receive(1, 1s, 0s);
    CHECK_THROWS_AS(m.record_receive(1, 2s, 0s), AccountingError);
    CHECK_THROWS_AS(m.record_drop(1, 2s, 0, DropReason::Collision), AccountingError);
    CHECK_THROWS_AS(m.record_drop(9, 2s, 0, DropReason::Collision), AccountingError);
    CHECK_THROWS_AS(m.record_send(1, 3s), AccountingError);
  }
}
