// Randomized tele-operation fault traces and the safety checks applied to them.
// Shared by the robot unit tests and the acceptance binary.

#ifndef OWC_TESTS_FAULTS_H
#define OWC_TESTS_FAULTS_H

#include "owc/robot/session.h"

#include <string>

namespace owc::testing
{

struct FaultTrace
{
    robot::SessionScript script;
    double frameLoss{0.0};
    std::uint64_t seed{0};
};

inline sim::SimTime
RandomInstant(sim::RngStream& rng, sim::SimTime end)
{
    return sim::NanoSeconds(static_cast<std::int64_t>(rng.UniformInt(end.Ticks())));
}

/**
 * Heartbeat loss, router delays, blackouts, dead-man releases and e-stops in
 * random combination. Every fourth trace loses every frame.
 */
inline FaultTrace
RandomFaultTrace(sim::RngStream& rng, std::uint64_t index)
{
    FaultTrace f;
    f.seed = rng.NextU64();
    robot::SessionScript& s = f.script;
    s.duration = sim::MilliSeconds(1000 + static_cast<std::int64_t>(rng.UniformInt(2000)));
    const double pick = rng.Uniform();
    f.frameLoss = index % 4 == 3 ? 1.0 : (pick < 0.3 ? 0.0 : rng.Uniform() * 0.6);
    s.delayProb = rng.Bernoulli(0.5) ? rng.Uniform() * 0.3 : 0.0;
    s.extraDelay = sim::MilliSeconds(20 + static_cast<std::int64_t>(rng.UniformInt(300)));
    s.commandEveryTick = rng.Bernoulli(0.8);
    for (std::uint64_t k = rng.UniformInt(3); k > 0; --k)
    {
        const sim::SimTime a = RandomInstant(rng, s.duration);
        s.blackouts.push_back({a, a + sim::MilliSeconds(static_cast<std::int64_t>(
                                          10 + rng.UniformInt(600)))});
    }
    for (std::uint64_t k = rng.UniformInt(3); k > 0; --k)
    {
        const sim::SimTime a = RandomInstant(rng, s.duration);
        s.deadmanReleased.push_back(
            {a, a + sim::MilliSeconds(static_cast<std::int64_t>(10 + rng.UniformInt(400)))});
    }
    if (rng.Bernoulli(0.6))
    {
        // Leave room for the hold timeout to play out before the run ends.
        s.estopAt = RandomInstant(rng, s.duration - sim::MilliSeconds(400));
        if (rng.Bernoulli(0.5))
        {
            s.estop.kind = robot::EstopKind::Hardwired;
            s.estop.deliveryDelay =
                sim::MicroSeconds(1 + static_cast<std::int64_t>(rng.UniformInt(999)));
            s.estop.failureProbability = 0.0;
        }
        else
        {
            s.estop.kind = robot::EstopKind::OpticalSecondary;
            s.estop.deliveryDelay = sim::MicroSeconds(500);
            s.estop.failureProbability = rng.Bernoulli(0.5) ? 1.0 : rng.Uniform();
        }
    }
    return f;
}

struct FaultOutcome
{
    robot::SessionResult result;
    std::size_t violations{0};
    bool hardwired{false};
    bool hardwiredExact{true}; ///< latency equals the configured delay
    bool opticalFailed{false};
    bool stoppedWithinHold{true}; ///< no MOVING after estopAt + T_hold
};

inline FaultOutcome
RunFaultTrace(const FaultTrace& f, const robot::SafetyParams& params = {})
{
    const mac::ConstantErrorModel errors(f.frameLoss);
    FaultOutcome o;
    o.result = robot::RunSession(f.script, params, mac::MacParams{}, errors,
                                 traffic::WiredLinkParams{}, f.seed);
    o.violations = robot::CountMovingViolations(o.result, params, f.script.duration);
    if (!f.script.estopAt)
    {
        return o;
    }
    const sim::SimTime at = *f.script.estopAt;
    if (f.script.estop.kind == robot::EstopKind::Hardwired)
    {
        o.hardwired = true;
        o.hardwiredExact = o.result.estopLatency.has_value() &&
                           *o.result.estopLatency == f.script.estop.deliveryDelay;
    }
    o.opticalFailed = o.result.estopFrameFailed;
    const auto& samples = o.result.samples;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        if (samples[i].mode != robot::Mode::Moving)
        {
            continue;
        }
        const sim::SimTime until = i + 1 < samples.size() ? samples[i + 1].at
                                                          : f.script.duration;
        if (until > at + params.holdTimeout)
        {
            o.stoppedWithinHold = false;
        }
    }
    return o;
}

} // namespace owc::testing

#endif // OWC_TESTS_FAULTS_H
