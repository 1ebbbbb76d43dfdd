// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
//
//   owc-acceptance [--only N[,N...]]

#include "owc/channel/optical-channel.h"
#include "owc/mac/crc32.h"
#include "owc/mac/exchange.h"
#include "owc/runner/builtins.h"
#include "owc/runner/calibrate.h"
#include "owc/runner/run.h"

#include "support/faults.h"
#include "support/oracle.h"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{

using namespace owc;
using Clock = std::chrono::steady_clock;

struct Verdict
{
    bool pass;
    std::string detail;
};

double
Elapsed(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string
Fmt(double v)
{
    return runner::FormatNumber(v);
}

// 1. Estimators against the brute-force replay.
Verdict
EstimatorOracle()
{
    const auto start = Clock::now();
    sim::RngStream rng(1, sim::Stream::Test);
    std::size_t mismatches = 0;
    std::string first;
    for (int i = 0; i < 1000; ++i)
    {
        const std::string m = testing::CompareWithOracle(testing::RandomTrace(rng));
        if (!m.empty())
        {
            if (mismatches++ == 0)
            {
                first = "trace " + std::to_string(i) + ": " + m;
            }
        }
    }
    const double t = Elapsed(start);
    return {mismatches == 0 && t < 60.0,
            "1000 traces, " + std::to_string(mismatches) + " mismatches" +
                (first.empty() ? "" : " (" + first + ")") + ", " + Fmt(t) + " s"};
}

// 2. CRC-32 check value, corruption detection, MAC-level undetected deliveries.
Verdict
CrcCorrectness()
{
    const auto start = Clock::now();
    const std::string check = "123456789";
    const std::uint32_t crc = mac::Crc32(
        std::span(reinterpret_cast<const std::uint8_t*>(check.data()), check.size()));

    sim::RngStream rng(2, sim::Stream::Test);
    std::uint64_t missed = 0;
    for (int i = 0; i < 1'000'000; ++i)
    {
        std::vector<std::uint8_t> payload(1 + rng.UniformInt(1500));
        for (auto& b : payload)
        {
            b = static_cast<std::uint8_t>(rng.NextU64());
        }
        auto bytes = mac::Frame::Data(0, 1, static_cast<std::uint16_t>(i % mac::kSeqModulus),
                                      std::move(payload))
                         .Serialize();
        mac::CorruptBits(bytes, rng);
        missed += mac::FcsValid(bytes) ? 1 : 0;
    }

    // Every DATA copy is corrupted; retry limit 7 gives 8 copies per exchange.
    mac::MacParams params;
    const mac::ConstantErrorModel broken(1.0);
    sim::RngStream backoff(3, sim::Stream::MacBackoff);
    sim::RngStream noise(3, sim::Stream::ChannelNoise);
    mac::MacReceiver rx;
    std::uint64_t corrupted = 0;
    std::uint64_t undetected = 0;
    std::uint16_t seq = 0;
    while (corrupted < 10'000'000)
    {
        mac::Frame f = mac::Frame::Data(0, 1, seq, std::vector<std::uint8_t>(128, 0x5A));
        seq = static_cast<std::uint16_t>((seq + 1) % mac::kSeqModulus);
        const mac::TxResult r = mac::Transmit(f, broken, params, backoff, noise, rx);
        corrupted += r.crcFailures + r.undetected;
        undetected += r.undetected;
    }
    const double t = Elapsed(start);
    std::ostringstream d;
    d << "check value 0x" << std::hex << std::uppercase << crc << std::dec << ", " << missed
      << " of 1e6 corruptions missed, " << undetected << " undetected in " << corrupted
      << " corrupted MAC frames, " << Fmt(t) << " s";
    return {crc == 0xCBF43926u && missed == 0 && undetected == 0 && t < 300.0, d.str()};
}

// 3. Delivery probability of the retry chain.
Verdict
RetryLaw()
{
    mac::MacParams params;
    params.retryLimit = 4;
    const mac::ConstantErrorModel half(0.5);
    sim::RngStream backoff(4, sim::Stream::MacBackoff);
    sim::RngStream noise(4, sim::Stream::ChannelNoise);
    mac::MacReceiver rx;
    const int n = 100000;
    int delivered = 0;
    for (int i = 0; i < n; ++i)
    {
        mac::Frame f = mac::Frame::Data(0, 1, static_cast<std::uint16_t>(i % mac::kSeqModulus),
                                        std::vector<std::uint8_t>(64));
        delivered += mac::Transmit(f, half, params, backoff, noise, rx).acceptedAt ? 1 : 0;
    }
    const double expected = 0.96875;
    const double p = static_cast<double>(delivered) / n;
    const double se = std::sqrt(expected * (1 - expected) / n);
    return {std::abs(p - expected) <= 3 * se,
            "delivered " + Fmt(p) + " vs 0.96875, |diff| = " + Fmt(std::abs(p - expected) / se) +
                " standard errors"};
}

// 4. Lambertian order, inverse square, FOV cutoff, frame error monotonicity.
Verdict
ChannelProperties()
{
    using namespace channel;
    double worstHalf = 0.0;
    for (int i = 1; i < 8000; ++i)
    {
        const double phi = Deg(80.0 * i / 8000.0);
        worstHalf = std::max(worstHalf,
                             std::abs(std::pow(std::cos(phi), LambertianOrder(phi)) - 0.5));
    }

    sim::RngStream rng(5, sim::Stream::Test);
    EmitterParams e;
    ReceiverParams r;
    r.fieldOfView = Deg(60);
    double worstSquare = 0.0;
    for (int i = 0; i < 10000; ++i)
    {
        e.halfPowerAngle = Deg(5 + 70 * rng.Uniform());
        // Same direction, two distances: gain ratio must be the squared distance ratio.
        const Vec3 dir = Normalized({rng.Uniform() - 0.5, rng.Uniform() - 0.5, -2.0});
        const double d1 = 0.2 + 5 * rng.Uniform();
        const double k = 0.1 + 10 * rng.Uniform();
        LinkGeometry g1;
        g1.lampPos = {0, 0, 0};
        g1.donglePos = dir * d1;
        LinkGeometry g2 = g1;
        g2.donglePos = dir * (d1 * k);
        const double a = LosGain(g1, e, r);
        const double b = LosGain(g2, e, r);
        if (a > 0)
        {
            worstSquare = std::max(worstSquare, std::abs(b * k * k / a - 1.0));
        }
    }

    bool fovExact = true;
    for (int i = 0; i < 1000; ++i)
    {
        r.fieldOfView = Deg(1 + 88 * rng.Uniform());
        const double h = 0.5 + 4 * rng.Uniform();
        const double edge = h * std::tan(r.fieldOfView);
        LinkGeometry in;
        in.lampPos = {0, 0, h};
        in.donglePos = {edge * (1 - 1e-9), 0, 0};
        LinkGeometry out = in;
        out.donglePos = {edge * (1 + 1e-9), 0, 0};
        e.halfPowerAngle = Deg(89);
        fovExact = fovExact && LosGain(in, e, r) > 0.0 && LosGain(out, e, r) == 0.0;
    }

    bool monotone = true;
    for (int i = 0; i < 10000; ++i)
    {
        const double b1 = std::pow(10.0, -12 * rng.Uniform());
        const double b2 = std::pow(10.0, -12 * rng.Uniform());
        const std::size_t n1 = 1 + rng.UniformInt(20000);
        const std::size_t n2 = 1 + rng.UniformInt(20000);
        monotone = monotone &&
                   FrameErrorProb(std::min(b1, b2), n1) <= FrameErrorProb(std::max(b1, b2), n1) &&
                   FrameErrorProb(b1, std::min(n1, n2)) <= FrameErrorProb(b1, std::max(n1, n2));
    }
    const bool pass = worstHalf <= 1e-6 && worstSquare <= 1e-12 && fovExact && monotone;
    return {pass, "max |cos^m - 1/2| " + Fmt(worstHalf) + ", max inverse-square error " +
                      Fmt(worstSquare) + ", fov cutoff " + (fovExact ? "exact" : "WRONG") +
                      ", fep monotone " + (monotone ? "yes" : "NO")};
}

// 5. Calibrated ratios T1-T7 at desk scale.
Verdict
CalibratedRatios()
{
    const auto start = Clock::now();
    const runner::TargetSet set = runner::ParseTargets(runner::ShippedTargets());
    std::set<std::string> ids;
    std::vector<runner::CalibrationTarget> ratioTargets;
    for (const auto& t : set.targets)
    {
        if (t.id.rfind("T8-", 0) != 0)
        {
            ids.insert(t.id);
            ratioTargets.push_back(t);
        }
    }
    const auto achieved = runner::Evaluate(runner::ShippedParameters(), ids, runner::DeskScale());
    const auto report = runner::Report(ratioTargets, achieved);
    const double t = Elapsed(start);
    std::ostringstream d;
    int failed = 0;
    for (const auto& r : report)
    {
        if (!r.pass)
        {
            ++failed;
        }
        d << "\n    " << r.target.id << " " << Fmt(r.achieved) << " (target " << Fmt(r.target.value)
          << ") " << (r.pass ? "ok" : "MISS");
    }
    return {failed == 0 && t < 600.0,
            std::to_string(report.size() - failed) + "/" + std::to_string(report.size()) +
                " targets, " + Fmt(t) + " s" + d.str()};
}

// 6. RTT anchors.
Verdict
RttAnchor()
{
    const auto start = Clock::now();
    struct Anchor
    {
        const char* scenario;
        double mean;
        std::size_t slots;
        std::size_t reps;
        bool peaks;
    };
    // LoS1 runs 334 slots x 3 replications of 1000 echoes: just over 10^6 echoes.
    const Anchor anchors[] = {
        {"rtt-vitro-LoS1", 7.7124e-3, 334, 3, true},
        {"rtt-farm-LoS1", 7.7337e-3, 30, 3, false},
        {"rtt-farm-LoS2", 7.7762e-3, 30, 3, false},
    };
    bool pass = true;
    std::ostringstream d;
    for (const Anchor& a : anchors)
    {
        auto cfg = runner::LoadBuiltin(a.scenario, runner::ShippedParameters());
        cfg->flows.robot = false;
        cfg->flows.datagram = false;
        cfg->flows.stream = false;
        cfg->flows.slots = a.slots;
        cfg->replications = a.reps;
        const runner::ScenarioResult r = runner::RunScenario(*cfg);
        const auto rtt = runner::PointRtt(r.points.front(), cfg->z);
        const double mean = rtt ? rtt->rtt.mean : std::nan("");
        const bool meanOk = std::abs(mean / a.mean - 1.0) <= 0.10;
        d << "\n    " << a.scenario << " mean " << Fmt(mean * 1e3) << " ms (target "
          << Fmt(a.mean * 1e3) << ") " << (meanOk ? "ok" : "MISS");
        pass = pass && meanOk;
        if (a.peaks)
        {
            const double target = 897e-7;
            const double f = rtt ? rtt->peaksFraction : std::nan("");
            const bool enough = rtt && rtt->totalEchoes >= 1'000'000;
            const bool peaksOk = f >= target / 3 && f <= target * 3;
            d << ", peaks " << Fmt(f) << " over " << (rtt ? rtt->totalEchoes : 0)
              << " echoes (target 8.97e-05, factor 3) " << (peaksOk && enough ? "ok" : "MISS");
            pass = pass && peaksOk && enough;
        }
    }
    const double t = Elapsed(start);
    return {pass, Fmt(t) + " s" + d.str()};
}

// 7. Safety invariants over randomized fault traces.
Verdict
SafetyInvariants()
{
    const auto start = Clock::now();
    sim::RngStream rng(7, sim::Stream::Safety);
    std::size_t violations = 0;
    std::size_t hardwired = 0;
    std::size_t hardwiredExact = 0;
    std::size_t hardwiredDead = 0;
    std::size_t opticalFailed = 0;
    std::size_t opticalStopped = 0;
    std::size_t lateStops = 0;
    for (std::uint64_t i = 0; i < 10000; ++i)
    {
        const testing::FaultTrace f = testing::RandomFaultTrace(rng, i);
        const testing::FaultOutcome o = testing::RunFaultTrace(f);
        violations += o.violations;
        lateStops += o.stoppedWithinHold ? 0 : 1;
        if (o.hardwired)
        {
            ++hardwired;
            hardwiredExact += o.hardwiredExact ? 1 : 0;
            hardwiredDead += f.frameLoss == 1.0 ? 1 : 0;
        }
        if (o.opticalFailed)
        {
            ++opticalFailed;
            opticalStopped += o.stoppedWithinHold ? 1 : 0;
        }
    }
    const double t = Elapsed(start);
    std::ostringstream d;
    d << "10000 traces, " << violations << " MOVING-without-heartbeat violations, hardwired "
      << hardwiredExact << "/" << hardwired << " exact (" << hardwiredDead
      << " with every frame lost), failed optical e-stop stopped within T_hold " << opticalStopped
      << "/" << opticalFailed << ", " << Fmt(t) << " s";
    const bool pass = violations == 0 && hardwiredExact == hardwired && hardwiredDead > 0 &&
                      opticalStopped == opticalFailed && opticalFailed > 0 && lateStops == 0 &&
                      t < 120.0;
    return {pass, d.str()};
}

std::string
ReadAll(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 8. Same seed: identical files. Other seed: different trace, overlapping intervals.
Verdict
Determinism()
{
    const auto root = std::filesystem::temp_directory_path() / "owc-acceptance";
    std::filesystem::remove_all(root);
    bool identical = true;
    bool differs = true;
    std::size_t rows = 0;
    std::size_t overlapping = 0;
    std::ostringstream d;
    for (const char* id : {"rtt-vitro-LoS1", "los-horizontal"})
    {
        auto cfg = runner::LoadBuiltin(id, runner::ShippedParameters());
        cfg->flows.slotDuration = sim::Seconds(2.0);
        cfg->flows.slots = 10;
        cfg->replications = 2;
        cfg->flows.echoParams.echoesPerSlot = 200;
        auto runInto = [&](const runner::ScenarioConfig& c, const std::string& tag) {
            const auto dir = root / tag;
            std::filesystem::create_directories(dir);
            std::ofstream trace(dir / (c.name + ".trace"), std::ios::binary);
            const auto result = runner::RunScenario(c, &trace);
            trace.close();
            runner::EmitResults(result, dir);
            return std::make_pair(dir, runner::MetricRows(result));
        };
        const auto [a, rowsA] = runInto(*cfg, std::string(id) + "-a");
        const auto [b, rowsB] = runInto(*cfg, std::string(id) + "-b");
        runner::ScenarioConfig other = *cfg;
        other.seed = cfg->seed + 1000;
        const auto [c, rowsC] = runInto(other, std::string(id) + "-c");

        for (const auto& entry : std::filesystem::directory_iterator(a))
        {
            const auto name = entry.path().filename();
            identical = identical && ReadAll(a / name) == ReadAll(b / name);
        }
        const std::string traceName = std::string(id) + ".trace";
        differs = differs && ReadAll(a / traceName) != ReadAll(c / traceName);
        for (std::size_t i = 0; i < rowsA.size() && i < rowsC.size(); ++i)
        {
            const auto& x = rowsA[i];
            const auto& y = rowsC[i];
            if (!std::isfinite(x.mean) || !std::isfinite(y.mean))
            {
                continue;
            }
            ++rows;
            if (x.lower <= y.upper && y.lower <= x.upper)
            {
                ++overlapping;
            }
            else
            {
                d << "\n    no overlap: " << x.scenarioId << " " << x.metric << " [" << Fmt(x.lower)
                  << ", " << Fmt(x.upper) << "] vs [" << Fmt(y.lower) << ", " << Fmt(y.upper)
                  << "]";
            }
        }
    }
    std::filesystem::remove_all(root);
    return {identical && differs && overlapping == rows,
            std::string("same seed ") + (identical ? "byte-identical" : "DIFFERENT") +
                ", other seed trace " + (differs ? "differs" : "IDENTICAL") + ", CI overlap " +
                std::to_string(overlapping) + "/" + std::to_string(rows) + d.str()};
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria 1-8"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"estimator oracle equivalence", EstimatorOracle},
        {"CRC-32 correctness", CrcCorrectness},
        {"MAC retry-chain law", RetryLaw},
        {"channel properties", ChannelProperties},
        {"calibrated ratio reproduction", CalibratedRatios},
        {"RTT anchor", RttAnchor},
        {"safety invariants", SafetyInvariants},
        {"determinism", Determinism},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const int number = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end())
        {
            continue;
        }
        Verdict v;
        try
        {
            v = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            v = {false, std::string("error: ") + e.what()};
        }
        all = all && v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  " << number << ". " << criteria[i].first
                  << ": " << v.detail << std::endl;
    }
    return all ? 0 : 1;
}
