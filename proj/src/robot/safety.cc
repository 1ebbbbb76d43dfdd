#include "owc/robot/safety.h"

#include "owc/traffic/packet.h"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace owc::robot
{

using sim::SimTime;
using traffic::AppHeader;
using traffic::PacketKind;

const char*
ToString(Mode mode)
{
    switch (mode)
    {
    case Mode::Idle:
        return "IDLE";
    case Mode::Enabled:
        return "ENABLED";
    case Mode::Moving:
        return "MOVING";
    case Mode::Estopped:
        return "ESTOPPED";
    }
    return "UNKNOWN";
}

void
SafetyParams::Validate() const
{
    if (heartbeatPeriod.Ticks() <= 0 || holdTimeout.Ticks() <= 0 || staleAge.Ticks() <= 0)
    {
        throw std::invalid_argument("safety periods must be positive");
    }
    if (holdTimeout < heartbeatPeriod)
    {
        throw std::invalid_argument("hold timeout shorter than the heartbeat period");
    }
}

std::vector<std::uint8_t>
EncodeHeartbeat(SimTime issuedAt, std::uint32_t seq)
{
    AppHeader h{PacketKind::Heartbeat, seq, static_cast<std::uint64_t>(issuedAt.Ticks())};
    return h.Encode(kHeartbeatBytes);
}

std::vector<std::uint8_t>
EncodeMotion(const MotionCommand& cmd)
{
    std::array<std::uint8_t, kJoints * 8> joints{};
    for (std::size_t j = 0; j < kJoints; ++j)
    {
        const auto bits = std::bit_cast<std::uint64_t>(cmd.jointDeltas[j]);
        for (int i = 0; i < 8; ++i)
        {
            joints[j * 8 + i] = static_cast<std::uint8_t>(bits >> (8 * i));
        }
    }
    AppHeader h{PacketKind::Motion, cmd.seq, static_cast<std::uint64_t>(cmd.issuedAt.Ticks())};
    return h.Encode(MotionCommand::kBytes, joints);
}

std::vector<std::uint8_t>
EncodeEstop(SimTime issuedAt)
{
    AppHeader h{PacketKind::Estop, 0, static_cast<std::uint64_t>(issuedAt.Ticks())};
    return h.Encode(kEstopBytes);
}

std::optional<DecodedFrame>
DecodeRobotFrame(std::span<const std::uint8_t> bytes)
{
    const auto h = AppHeader::Decode(bytes);
    if (!h)
    {
        return std::nullopt;
    }
    DecodedFrame f;
    f.issuedAt = sim::NanoSeconds(static_cast<std::int64_t>(h->aux));
    switch (h->kind)
    {
    case PacketKind::Heartbeat:
        f.kind = DecodedFrame::Kind::Heartbeat;
        return f;
    case PacketKind::Estop:
        f.kind = DecodedFrame::Kind::Estop;
        return f;
    case PacketKind::Motion: {
        if (bytes.size() != MotionCommand::kBytes)
        {
            return std::nullopt;
        }
        MotionCommand cmd;
        cmd.seq = h->seq;
        cmd.issuedAt = f.issuedAt;
        for (std::size_t j = 0; j < kJoints; ++j)
        {
            std::uint64_t bits = 0;
            for (int i = 0; i < 8; ++i)
            {
                bits |= static_cast<std::uint64_t>(bytes[AppHeader::kBytes + j * 8 + i])
                        << (8 * i);
            }
            cmd.jointDeltas[j] = std::bit_cast<double>(bits);
            if (!std::isfinite(cmd.jointDeltas[j]))
            {
                return std::nullopt;
            }
        }
        f.kind = DecodedFrame::Kind::Motion;
        f.command = cmd;
        return f;
    }
    default:
        return std::nullopt;
    }
}

std::vector<std::vector<std::uint8_t>>
Console::Tick(bool deadmanHeld, std::optional<MotionCommand> command, SimTime now)
{
    std::vector<std::vector<std::uint8_t>> out;
    if (!deadmanHeld)
    {
        return out;
    }
    ++m_heartbeats;
    if (command)
    {
        out.push_back(EncodeMotion(*command));
    }
    else
    {
        out.push_back(EncodeHeartbeat(now, m_seq++));
    }
    return out;
}

namespace
{

void
Transition(SafetyState& s, Mode to, SimTime now, const char* cause,
           std::vector<SafetyEvent>* log, sim::NodeId node)
{
    if (s.mode == to)
    {
        return;
    }
    if (log)
    {
        log->push_back({now, node, s.mode, to, cause});
    }
    s.mode = to;
}

} // namespace

SafetyState
ApplyEstop(const SafetyState& state, SimTime now, const std::string& cause,
           std::vector<SafetyEvent>* log, sim::NodeId node)
{
    SafetyState s = state;
    s.estopLatched = true;
    if (s.mode != Mode::Estopped && log)
    {
        log->push_back({now, node, s.mode, Mode::Estopped, cause});
    }
    s.mode = Mode::Estopped;
    return s;
}

SafetyState
ResetEstop(const SafetyState& state, SimTime now, std::vector<SafetyEvent>* log,
           sim::NodeId node)
{
    SafetyState s = state;
    if (s.mode != Mode::Estopped)
    {
        return s;
    }
    s.estopLatched = false;
    s.hasHeartbeat = false;
    Transition(s, Mode::Idle, now, "operator-reset", log, node);
    return s;
}

SafetyState
CncStep(const SafetyState& state, std::span<const std::vector<std::uint8_t>> frames, SimTime now,
        const SafetyParams& params, std::vector<SafetyEvent>* log, sim::NodeId node)
{
    SafetyState s = state;
    if (!s.estopLatched && s.hasHeartbeat && now - s.lastHeartbeatAt > params.holdTimeout)
    {
        if (s.mode == Mode::Moving)
        {
            Transition(s, Mode::Enabled, now, "heartbeat-timeout", log, node);
        }
        if (s.mode == Mode::Enabled)
        {
            Transition(s, Mode::Idle, now, "heartbeat-timeout", log, node);
        }
    }

    for (const auto& bytes : frames)
    {
        const auto f = DecodeRobotFrame(bytes);
        if (!f)
        {
            ++s.malformed;
            continue;
        }
        if (f->kind == DecodedFrame::Kind::Estop)
        {
            s = ApplyEstop(s, now, "optical-estop", log, node);
            continue;
        }
        if (s.estopLatched)
        {
            continue;
        }
        const SimTime age = now - f->issuedAt;
        if (age.Ticks() < 0 || age > params.staleAge)
        {
            ++s.staleRejected;
            continue;
        }
        if (!s.hasHeartbeat || f->issuedAt > s.lastHeartbeatAt)
        {
            s.lastHeartbeatAt = f->issuedAt;
        }
        s.hasHeartbeat = true;
        if (s.mode == Mode::Idle)
        {
            Transition(s, Mode::Enabled, now, "heartbeat", log, node);
        }
        if (f->kind == DecodedFrame::Kind::Motion)
        {
            const std::uint32_t seq = f->command->seq;
            if (s.lastCommandSeq && seq <= *s.lastCommandSeq)
            {
                ++s.staleRejected;
                continue;
            }
            s.lastCommandSeq = seq;
            if (s.mode == Mode::Enabled)
            {
                Transition(s, Mode::Moving, now, "motion-command", log, node);
            }
        }
    }
    return s;
}

void
WriteSafetyCsv(std::ostream& out, std::span<const SafetyEvent> events)
{
    out << "ticks,node,old_mode,new_mode,cause\n";
    for (const SafetyEvent& e : events)
    {
        out << e.at.Ticks() << ',' << e.node << ',' << ToString(e.oldMode) << ','
            << ToString(e.newMode) << ',' << e.cause << '\n';
    }
}

} // namespace owc::robot
