#include "owc/robot/session.h"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace owc::robot
{

using sim::SimTime;

const char*
ToString(EstopKind kind)
{
    return kind == EstopKind::Hardwired ? "hardwired" : "optical_secondary";
}

void
EstopChannel::Validate() const
{
    if (deliveryDelay.Ticks() < 0 || !(failureProbability >= 0.0 && failureProbability <= 1.0))
    {
        throw std::invalid_argument("e-stop delay must be non-negative and failure a probability");
    }
    if (kind == EstopKind::Hardwired &&
        (failureProbability != 0.0 || deliveryDelay >= sim::MilliSeconds(1)))
    {
        throw std::invalid_argument("hardwired e-stop must not fail and must be sub-millisecond");
    }
}

namespace
{

/// Forces the link down while a blackout is active.
class BlackoutErrorModel : public mac::ErrorModel
{
  public:
    explicit BlackoutErrorModel(const mac::ErrorModel& base)
        : m_base(base)
    {
    }

    bool LinkUp() const override
    {
        return m_depth == 0 && m_base.LinkUp();
    }

    double Snr() const override
    {
        return m_base.Snr();
    }

    bool DrawOutage(sim::RngStream& rng) const override
    {
        return m_depth > 0 || m_base.DrawOutage(rng);
    }

    double FrameLossProb(std::size_t bits) const override
    {
        return m_depth > 0 ? 1.0 : m_base.FrameLossProb(bits);
    }

    void Begin()
    {
        ++m_depth;
    }

    void End()
    {
        --m_depth;
    }

  private:
    const mac::ErrorModel& m_base;
    int m_depth{0};
};

bool
Inside(const std::vector<Interval>& intervals, SimTime t)
{
    return std::any_of(intervals.begin(), intervals.end(),
                       [t](const Interval& i) { return i.first <= t && t < i.second; });
}

} // namespace

SessionResult
RunSession(const SessionScript& script, const SafetyParams& params, const mac::MacParams& mac,
           const mac::ErrorModel& errors, const traffic::WiredLinkParams& wired,
           std::uint64_t seed, std::ostream* trace)
{
    params.Validate();
    script.estop.Validate();

    sim::Simulator sim;
    sim.SetTrace(trace);
    BlackoutErrorModel em(errors);
    traffic::Topology topo(sim, mac, em, wired, seed);
    sim::RngStream safetyRng(seed, sim::Stream::Safety);

    SessionResult res;
    SafetyState state;
    Console console;
    std::uint32_t cmdSeq = 0;
    sim::EventHandle watchdog;

    std::function<void(std::span<const std::vector<std::uint8_t>>)> update;

    auto record = [&] {
        res.samples.push_back({sim.Now(), state.mode, state.hasHeartbeat, state.lastHeartbeatAt});
        if (script.estopAt && !res.estopLatency && state.mode == Mode::Estopped)
        {
            res.estopLatency = sim.Now() - *script.estopAt;
        }
    };

    auto arm = [&] {
        watchdog.Cancel();
        if (state.hasHeartbeat && !state.estopLatched &&
            (state.mode == Mode::Enabled || state.mode == Mode::Moving))
        {
            const SimTime at = state.lastHeartbeatAt + params.holdTimeout + sim::NanoSeconds(1);
            watchdog = sim.Schedule(std::max(at, sim.Now()), traffic::kCnc,
                                    sim::EventKind::SafetyCheck, [&] { update({}); });
        }
    };

    update = [&](std::span<const std::vector<std::uint8_t>> frames) {
        state = CncStep(state, frames, sim.Now(), params, &res.events, traffic::kCnc);
        record();
        arm();
    };

    auto deliverToCnc = [&](const std::vector<std::uint8_t>& bytes) {
        ++res.framesAtCnc;
        update(std::span<const std::vector<std::uint8_t>>(&bytes, 1));
    };

    topo.SetRouterHandler([&](const std::vector<std::uint8_t>& p) {
        if (script.delayProb > 0.0 && safetyRng.Bernoulli(script.delayProb))
        {
            sim.ScheduleIn(script.extraDelay, traffic::kCnc, sim::EventKind::AppReceive,
                           [&, p] { deliverToCnc(p); });
            return;
        }
        deliverToCnc(p);
    });

    for (const Interval& b : script.blackouts)
    {
        sim.Schedule(b.first, traffic::kAccessPoint, sim::EventKind::Generic, [&em] { em.Begin(); });
        sim.Schedule(b.second, traffic::kAccessPoint, sim::EventKind::Generic, [&em] { em.End(); });
    }

    for (SimTime t{}; t < script.duration; t += params.heartbeatPeriod)
    {
        sim.Schedule(t, traffic::kConsole, sim::EventKind::Heartbeat, [&] {
            const SimTime now = sim.Now();
            // Pressing the e-stop also silences the console, so the heartbeat
            // timeout stops the arm even when the stop frame never arrives.
            if (script.estopAt && now >= *script.estopAt)
            {
                return;
            }
            const bool held = !Inside(script.deadmanReleased, now);
            std::optional<MotionCommand> cmd;
            if (script.commandEveryTick && held)
            {
                MotionCommand c;
                c.jointDeltas.fill(1e-3);
                c.issuedAt = now;
                c.seq = cmdSeq++;
                cmd = c;
            }
            for (auto& frame : console.Tick(held, cmd, now))
            {
                ++res.framesEmitted;
                topo.SendUp(std::move(frame), true);
            }
        });
    }

    if (script.estopAt)
    {
        const SimTime at = *script.estopAt;
        if (script.estop.kind == EstopKind::Hardwired)
        {
            sim.Schedule(at + script.estop.deliveryDelay, traffic::kCnc,
                         sim::EventKind::EstopSignal, [&] {
                             state = ApplyEstop(state, sim.Now(), "hardwired-estop", &res.events,
                                                traffic::kCnc);
                             record();
                             arm();
                         });
        }
        else if (safetyRng.Bernoulli(script.estop.failureProbability))
        {
            res.estopFrameFailed = true;
        }
        else
        {
            sim.Schedule(at + script.estop.deliveryDelay, traffic::kConsole,
                         sim::EventKind::EstopSignal,
                         [&] { topo.SendUp(EncodeEstop(sim.Now()), true); });
        }
    }

    record();
    sim.RunUntil(script.duration);
    watchdog.Cancel();
    res.finalState = state;
    return res;
}

std::size_t
CountMovingViolations(const SessionResult& result, const SafetyParams& params, SimTime end)
{
    std::size_t violations = 0;
    const auto& s = result.samples;
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        if (s[i].mode != Mode::Moving)
        {
            continue;
        }
        const SimTime stop = i + 1 < s.size() ? s[i + 1].at : end;
        const SimTime last = stop > s[i].at ? stop - sim::NanoSeconds(1) : s[i].at;
        if (!s[i].hasHeartbeat || last - s[i].lastHeartbeatAt > params.holdTimeout)
        {
            ++violations;
        }
    }
    return violations;
}

} // namespace owc::robot
