#ifndef OWC_ROBOT_SESSION_H
#define OWC_ROBOT_SESSION_H

#include "owc/mac/error-model.h"
#include "owc/mac/mac-params.h"
#include "owc/robot/safety.h"
#include "owc/traffic/topology.h"

#include <optional>
#include <utility>
#include <vector>

namespace owc::robot
{

enum class EstopKind : std::uint8_t
{
    Hardwired,
    OpticalSecondary,
};

const char* ToString(EstopKind kind);

struct EstopChannel
{
    EstopKind kind{EstopKind::Hardwired};
    sim::SimTime deliveryDelay{sim::MicroSeconds(500)};
    double failureProbability{0.0};

    /// Hardwired channels must not fail and must deliver within 1 ms.
    void Validate() const;
};

using Interval = std::pair<sim::SimTime, sim::SimTime>;

/// Operator behaviour and injected faults for one tele-operation run.
struct SessionScript
{
    sim::SimTime duration{sim::Seconds(2.0)};
    std::vector<Interval> deadmanReleased;
    std::vector<Interval> blackouts; ///< optical link down, both directions
    double delayProb{0.0};           ///< share of frames held back at the router
    sim::SimTime extraDelay{sim::MilliSeconds(200)};
    bool commandEveryTick{true};
    std::optional<sim::SimTime> estopAt; ///< console goes silent from here on
    EstopChannel estop;
};

/// CNC state after each change, for invariant checks.
struct CncSample
{
    sim::SimTime at;
    Mode mode;
    bool hasHeartbeat;
    sim::SimTime lastHeartbeatAt;
};

struct SessionResult
{
    std::vector<SafetyEvent> events;
    std::vector<CncSample> samples;
    SafetyState finalState;
    std::optional<sim::SimTime> estopLatency; ///< trigger to ESTOPPED
    bool estopFrameFailed{false};
    std::uint64_t framesEmitted{0};
    std::uint64_t framesAtCnc{0};
};

/**
 * Runs console ticks over the optical topology with the CNC behind the
 * router. A watchdog event fires one tick after every heartbeat deadline.
 */
SessionResult RunSession(const SessionScript& script, const SafetyParams& params,
                         const mac::MacParams& mac, const mac::ErrorModel& errors,
                         const traffic::WiredLinkParams& wired, std::uint64_t seed,
                         std::ostream* trace = nullptr);

/**
 * Counts instants where the CNC was MOVING although the last heartbeat was
 * older than the hold timeout. Sample times are the only instants where the
 * state changes, so checking the end of each MOVING stretch is exhaustive.
 */
std::size_t CountMovingViolations(const SessionResult& result, const SafetyParams& params,
                                  sim::SimTime end);

} // namespace owc::robot

#endif // OWC_ROBOT_SESSION_H
