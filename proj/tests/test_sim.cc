#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "owc/sim/rng.h"
#include "owc/sim/simulator.h"

#include <doctest.h>

#include <array>
#include <set>
#include <sstream>
#include <vector>

using namespace owc::sim;

TEST_CASE("time helpers round to whole nanoseconds")
{
    CHECK(Seconds(1.5).Ticks() == 1'500'000'000);
    CHECK(Seconds(1e-9 * 0.4).Ticks() == 0);
    CHECK(Seconds(-2e-9).Ticks() == -2);
    CHECK(MicroSeconds(3) + MilliSeconds(1) == NanoSeconds(1'003'000));
    CHECK(MilliSeconds(2).MilliSeconds() == doctest::Approx(2.0));
}

TEST_CASE("streams are reproducible and keyed by seed and id")
{
    RngStream a(42, Stream::Traffic);
    RngStream b(42, Stream::Traffic);
    for (int i = 0; i < 100; ++i)
    {
        CHECK(a.NextU64() == b.NextU64());
    }
    RngStream c(42, Stream::Jitter);
    RngStream d(43, Stream::Traffic);
    RngStream e(42, Stream::Traffic);
    CHECK(c.NextU64() != e.NextU64());
    RngStream f(42, Stream::Traffic);
    CHECK(d.NextU64() != f.NextU64());
}

TEST_CASE("drawing from one stream leaves another untouched")
{
    RngStream reference(7, Stream::ChannelNoise);
    std::vector<std::uint64_t> expected;
    for (int i = 0; i < 50; ++i)
    {
        expected.push_back(reference.NextU64());
    }
    RngStream noise(7, Stream::ChannelNoise);
    RngStream backoff(7, Stream::MacBackoff);
    for (int i = 0; i < 50; ++i)
    {
        for (int k = 0; k < i % 5; ++k)
        {
            backoff.NextU64();
        }
        CHECK(noise.NextU64() == expected[i]);
    }
}

TEST_CASE("replication seeds are distinct and avoid the raw seed")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 1000; ++r)
    {
        seen.insert(ReplicationSeed(1, r));
    }
    CHECK(seen.size() == 1000);
    CHECK(ReplicationSeed(1, 0) != 1);
}

TEST_CASE("uniform draws stay in range")
{
    RngStream rng(3, Stream::Test);
    for (int i = 0; i < 100000; ++i)
    {
        const double u = rng.Uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(rng.UniformInt(7) < 7);
    }
    CHECK_FALSE(rng.Bernoulli(0.0));
    CHECK(rng.Bernoulli(1.0));
}

TEST_CASE("sample moments of the derived distributions")
{
    RngStream rng(11, Stream::Test);
    const int n = 200000;
    double su = 0;
    double se = 0;
    double sn = 0;
    double sn2 = 0;
    for (int i = 0; i < n; ++i)
    {
        su += rng.Uniform();
        se += rng.Exponential(2.0);
        const double z = rng.Normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(se / n == doctest::Approx(2.0).epsilon(0.02));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("two streams of one seed are independent (chi-square)")
{
    // 10 x 10 contingency table; 81 degrees of freedom, 0.1% critical value 124.8.
    RngStream a(5, Stream::ChannelNoise);
    RngStream b(5, Stream::MacBackoff);
    std::array<std::array<double, 10>, 10> counts{};
    const int n = 100000;
    for (int i = 0; i < n; ++i)
    {
        counts[a.UniformInt(10)][b.UniformInt(10)] += 1;
    }
    std::array<double, 10> rows{};
    std::array<double, 10> cols{};
    for (int i = 0; i < 10; ++i)
    {
        for (int j = 0; j < 10; ++j)
        {
            rows[i] += counts[i][j];
            cols[j] += counts[i][j];
        }
    }
    double chi2 = 0;
    for (int i = 0; i < 10; ++i)
    {
        for (int j = 0; j < 10; ++j)
        {
            const double e = rows[i] * cols[j] / n;
            chi2 += (counts[i][j] - e) * (counts[i][j] - e) / e;
        }
    }
    CHECK(chi2 < 124.8);
}

TEST_CASE("events run in time order, ties in insertion order")
{
    Simulator sim;
    std::vector<int> order;
    sim.Schedule(MicroSeconds(5), 0, EventKind::Generic, [&] { order.push_back(3); });
    sim.Schedule(MicroSeconds(1), 0, EventKind::Generic, [&] { order.push_back(1); });
    sim.Schedule(MicroSeconds(5), 0, EventKind::Generic, [&] { order.push_back(4); });
    sim.Schedule(MicroSeconds(1), 0, EventKind::Generic, [&] { order.push_back(2); });
    CHECK(sim.Run() == 4);
    CHECK(order == std::vector<int>{1, 2, 3, 4});
    CHECK(sim.Now() == MicroSeconds(5));
}

TEST_CASE("events may schedule further events at the current instant")
{
    Simulator sim;
    std::vector<int> order;
    sim.Schedule(MicroSeconds(1), 0, EventKind::Generic, [&] {
        order.push_back(1);
        sim.ScheduleIn(SimTime(0), 0, EventKind::Generic, [&] { order.push_back(3); });
    });
    sim.Schedule(MicroSeconds(1), 0, EventKind::Generic, [&] { order.push_back(2); });
    sim.Run();
    CHECK(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("cancelled events never run")
{
    Simulator sim;
    bool ran = false;
    EventHandle h = sim.Schedule(MicroSeconds(1), 0, EventKind::Generic, [&] { ran = true; });
    CHECK(h.IsPending());
    h.Cancel();
    CHECK_FALSE(h.IsPending());
    sim.Run();
    CHECK_FALSE(ran);
    EventHandle empty;
    empty.Cancel();
    CHECK_FALSE(empty.IsPending());
}

TEST_CASE("RunUntil stops at the deadline inclusive")
{
    Simulator sim;
    int count = 0;
    for (int i = 1; i <= 10; ++i)
    {
        sim.Schedule(MilliSeconds(i), 0, EventKind::Generic, [&] { ++count; });
    }
    CHECK(sim.RunUntil(MilliSeconds(4)) == 4);
    CHECK(count == 4);
    CHECK(sim.Now() == MilliSeconds(4));
    CHECK(sim.PendingCount() == 6);
    sim.RunUntil(MilliSeconds(100));
    CHECK(count == 10);
    CHECK(sim.Now() == MilliSeconds(100));
}

TEST_CASE("scheduling into the past is rejected")
{
    Simulator sim;
    sim.Schedule(MilliSeconds(2), 0, EventKind::Generic, [] {});
    sim.Run();
    CHECK_THROWS_AS(sim.Schedule(MilliSeconds(1), 0, EventKind::Generic, [] {}), KernelError);
    CHECK_THROWS_AS(sim.ScheduleIn(SimTime(-1), 0, EventKind::Generic, [] {}), KernelError);
}

TEST_CASE("trace lists executed events with tick, node and kind")
{
    Simulator sim;
    std::ostringstream trace;
    sim.SetTrace(&trace);
    sim.Schedule(NanoSeconds(7), 2, EventKind::AppSend, [] {});
    auto h = sim.Schedule(NanoSeconds(8), 2, EventKind::AppReceive, [] {});
    h.Cancel();
    sim.Run();
    CHECK(trace.str().find("7\t2\t") == 0);
    CHECK(trace.str().find(std::string(ToString(EventKind::AppReceive))) == std::string::npos);
}
