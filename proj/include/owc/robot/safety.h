#ifndef OWC_ROBOT_SAFETY_H
#define OWC_ROBOT_SAFETY_H

#include "owc/sim/sim-time.h"
#include "owc/sim/simulator.h"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace owc::robot
{

enum class Mode : std::uint8_t
{
    Idle,
    Enabled,
    Moving,
    Estopped,
};

const char* ToString(Mode mode);

struct SafetyParams
{
    sim::SimTime heartbeatPeriod{sim::MilliSeconds(50)};
    sim::SimTime holdTimeout{sim::MilliSeconds(150)}; ///< T_hold
    sim::SimTime staleAge{sim::MilliSeconds(100)};    ///< T_stale

    void Validate() const;
};

constexpr std::size_t kJoints = 6;

struct MotionCommand
{
    std::array<double, kJoints> jointDeltas{}; ///< radians
    sim::SimTime issuedAt;
    std::uint32_t seq{0};

    static constexpr std::size_t kBytes = 512;
};

/// Heartbeat-only frames are short; frames carrying a command are padded to 512 bytes.
constexpr std::size_t kHeartbeatBytes = 64;
constexpr std::size_t kEstopBytes = 64;

/// Console to CNC frame payloads.
std::vector<std::uint8_t> EncodeHeartbeat(sim::SimTime issuedAt, std::uint32_t seq);
std::vector<std::uint8_t> EncodeMotion(const MotionCommand& cmd);
std::vector<std::uint8_t> EncodeEstop(sim::SimTime issuedAt);

struct DecodedFrame
{
    enum class Kind : std::uint8_t
    {
        Heartbeat,
        Motion,
        Estop,
    };

    Kind kind;
    sim::SimTime issuedAt;
    std::optional<MotionCommand> command;
};

/// nullopt for frames that are truncated, of another kind, or carry non-finite joints.
std::optional<DecodedFrame> DecodeRobotFrame(std::span<const std::uint8_t> bytes);

/**
 * \brief Operator console. Emits at most one frame per heartbeat period.
 *
 * Nothing leaves the console while the dead-man button is released; a
 * command always travels inside a heartbeat frame.
 */
class Console
{
  public:
    std::vector<std::vector<std::uint8_t>> Tick(bool deadmanHeld,
                                                std::optional<MotionCommand> command,
                                                sim::SimTime now);

    std::uint64_t HeartbeatsEmitted() const
    {
        return m_heartbeats;
    }

  private:
    std::uint32_t m_seq{0};
    std::uint64_t m_heartbeats{0};
};

struct SafetyState
{
    Mode mode{Mode::Idle};
    sim::SimTime lastHeartbeatAt;
    bool hasHeartbeat{false};
    bool estopLatched{false};
    std::optional<std::uint32_t> lastCommandSeq;
    std::uint64_t malformed{0};
    std::uint64_t staleRejected{0};
};

struct SafetyEvent
{
    sim::SimTime at;
    sim::NodeId node;
    Mode oldMode;
    Mode newMode;
    std::string cause;
};

/**
 * CNC-side transition function. Applies the heartbeat timeout at \p now,
 * then each received frame in order. ESTOPPED only leaves through Reset.
 */
SafetyState CncStep(const SafetyState& state, std::span<const std::vector<std::uint8_t>> frames,
                    sim::SimTime now, const SafetyParams& params,
                    std::vector<SafetyEvent>* log = nullptr, sim::NodeId node = 3);

/// Latching stop from outside the motion channel.
SafetyState ApplyEstop(const SafetyState& state, sim::SimTime now, const std::string& cause,
                       std::vector<SafetyEvent>* log = nullptr, sim::NodeId node = 3);

/// Operator reset: ESTOPPED to IDLE, clearing the latch and heartbeat history.
SafetyState ResetEstop(const SafetyState& state, sim::SimTime now,
                       std::vector<SafetyEvent>* log = nullptr, sim::NodeId node = 3);

/// Header line plus one row per event: ticks,node,old_mode,new_mode,cause.
void WriteSafetyCsv(std::ostream& out, std::span<const SafetyEvent> events);

} // namespace owc::robot

#endif // OWC_ROBOT_SAFETY_H
