#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "owc/metrics/estimators.h"

#include "support/oracle.h"

#include <doctest.h>

#include <algorithm>

using namespace owc;
using namespace owc::metrics;

namespace
{

SlotStats
Datagrams(std::uint64_t sent, std::uint64_t received, std::size_t index = 0)
{
    SlotStats s;
    s.index = index;
    s.framesAttempted = sent;
    s.framesReceived = received;
    s.duration = 10.0;
    return s;
}

} // namespace

TEST_CASE("two-slot interval reference values")
{
    // PER 0 and 0.02: mean 0.01, s = 0.02 / sqrt 2, half width 1.96 s / sqrt 2 = 0.0196.
    const std::vector<SlotStats> slots{Datagrams(100, 100, 0), Datagrams(100, 98, 1)};
    const EstimateWithCi e = AggregatePer(slots);
    CHECK(e.mean == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(e.stdDev == doctest::Approx(0.0141421356237310).epsilon(1e-12));
    CHECK(e.Margin() == doctest::Approx(0.0196).epsilon(1e-12));
    CHECK(e.nSlots == 2);
}

TEST_CASE("identical slots give a zero-width interval")
{
    const std::vector<double> v(5, 3.25);
    const EstimateWithCi e = MeanWithCi(v, kZ95);
    CHECK(e.mean == 3.25);
    CHECK(e.lower == e.mean);
    CHECK(e.upper == e.mean);
}

TEST_CASE("interval bounds bracket the mean and widen with z")
{
    sim::RngStream rng(1, sim::Stream::Test);
    for (int i = 0; i < 200; ++i)
    {
        std::vector<double> v(2 + rng.UniformInt(50));
        for (double& x : v)
        {
            x = rng.Exponential(1.0);
        }
        const EstimateWithCi a = MeanWithCi(v, 1.96);
        const EstimateWithCi b = MeanWithCi(v, 2.58);
        REQUIRE(a.lower <= a.mean);
        REQUIRE(a.mean <= a.upper);
        REQUIRE(b.Margin() >= a.Margin());
    }
}

TEST_CASE("estimators reject degenerate input")
{
    CHECK_THROWS_AS(PerSlot(Datagrams(0, 0)), MetricsError);
    CHECK_THROWS_AS(PerSlot(Datagrams(3, 4)), MetricsError);
    SlotStats s;
    CHECK_THROWS_AS(ThroughputSlot(s), MetricsError);
    CHECK_THROWS_AS(RttForSlot(s), MetricsError);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(MeanWithCi(one, kZ95), MetricsError);
}

TEST_CASE("slots without datagrams are excluded and counted")
{
    const std::vector<SlotStats> slots{Datagrams(10, 9, 0), Datagrams(0, 0, 1),
                                       Datagrams(10, 7, 2)};
    const EstimateWithCi e = AggregatePer(slots);
    CHECK(e.nSlots == 2);
    CHECK(e.excludedSlots == 1);
    CHECK(e.mean == doctest::Approx(0.2));
}

TEST_CASE("throughput counts bytes over the slot duration")
{
    SlotStats s = Datagrams(0, 0);
    s.bytesDelivered = 1250;
    s.duration = 0.001;
    CHECK(ThroughputSlot(s) == doctest::Approx(1e7));
}

TEST_CASE("RTT slot: lost echoes count as peaks but not in the mean")
{
    SlotStats s;
    s.rtts = {0.01, 0.02, kLostEcho, 0.031, 0.030};
    const RttSlot r = RttForSlot(s);
    CHECK(r.echoes == 5);
    CHECK(r.peaks == 2); // 0.031 and the lost one; exactly 30 ms is not a peak
    CHECK(r.mean == doctest::Approx((0.01 + 0.02 + 0.031 + 0.030) / 4));

    SlotStats dead;
    dead.rtts = {kLostEcho, kLostEcho};
    CHECK(std::isnan(RttForSlot(dead).mean));
    const std::vector<SlotStats> slots{s, dead, s};
    const RttAggregate agg = AggregateRtt(slots);
    CHECK(agg.rtt.nSlots == 2);
    CHECK(agg.rtt.excludedSlots == 1);
    CHECK(agg.totalEchoes == 12);
    CHECK(agg.peaksFraction == doctest::Approx(6.0 / 12.0));
}

TEST_CASE("compensated sum recovers small terms")
{
    const std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    CHECK(CompensatedSum(v) == 2.0);
    std::vector<double> many(100000, 0.1);
    CHECK(CompensatedSum(many) == doctest::Approx(10000.0).epsilon(1e-15));
}

TEST_CASE("aggregate is invariant to slot order up to rounding")
{
    sim::RngStream rng(6, sim::Stream::Test);
    std::vector<SlotStats> slots;
    for (std::size_t i = 0; i < 30; ++i)
    {
        const std::uint64_t n = 1 + rng.UniformInt(500);
        slots.push_back(Datagrams(n, rng.UniformInt(n + 1), i));
    }
    const EstimateWithCi a = AggregatePer(slots);
    std::reverse(slots.begin(), slots.end());
    const EstimateWithCi b = AggregatePer(slots);
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-15));
    CHECK(a.stdDev == doctest::Approx(b.stdDev).epsilon(1e-12));
}

TEST_CASE("estimators match the brute-force replay on random traces")
{
    sim::RngStream rng(77, sim::Stream::Test);
    for (int i = 0; i < 100; ++i)
    {
        const testing::Trace t = testing::RandomTrace(rng);
        INFO("trace " << i);
        CHECK(testing::CompareWithOracle(t) == "");
    }
}
