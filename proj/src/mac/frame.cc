#include "owc/mac/frame.h"

#include "owc/mac/crc32.h"

#include <algorithm>
#include <array>
#include <string>

namespace owc::mac
{

namespace
{

void
PutU16(std::uint8_t* out, std::uint16_t v)
{
    out[0] = static_cast<std::uint8_t>(v & 0xFF);
    out[1] = static_cast<std::uint8_t>(v >> 8);
}

std::uint16_t
GetU16(const std::uint8_t* in)
{
    return static_cast<std::uint16_t>(in[0] | (in[1] << 8));
}

std::uint32_t
GetU32(const std::uint8_t* in)
{
    return static_cast<std::uint32_t>(in[0]) | (static_cast<std::uint32_t>(in[1]) << 8) |
           (static_cast<std::uint32_t>(in[2]) << 16) | (static_cast<std::uint32_t>(in[3]) << 24);
}

} // namespace

Frame
Frame::Data(sim::NodeId src, sim::NodeId dst, std::uint16_t seq, std::vector<std::uint8_t> payload)
{
    if (payload.size() > kMaxPayload)
    {
        throw FrameError("payload of " + std::to_string(payload.size()) + " bytes exceeds " +
                         std::to_string(kMaxPayload));
    }
    if (src > 0xFFFF || dst > 0xFFFF)
    {
        throw FrameError("node id does not fit the 16-bit address field");
    }
    Frame f;
    f.m_kind = FrameKind::Data;
    f.m_src = src;
    f.m_dst = dst;
    f.m_seq = static_cast<std::uint16_t>(seq % kSeqModulus);
    f.m_payload = std::move(payload);
    f.ComputeFcs();
    return f;
}

Frame
Frame::Control(FrameKind kind, sim::NodeId src, sim::NodeId dst, std::uint16_t seq)
{
    if (kind == FrameKind::Data)
    {
        throw FrameError("control frame constructor called with DATA kind");
    }
    if (src > 0xFFFF || dst > 0xFFFF)
    {
        throw FrameError("node id does not fit the 16-bit address field");
    }
    Frame f;
    f.m_kind = kind;
    f.m_src = src;
    f.m_dst = dst;
    f.m_seq = static_cast<std::uint16_t>(seq % kSeqModulus);
    f.ComputeFcs();
    return f;
}

void
Frame::SetRetry(bool retry)
{
    if (retry != m_retry)
    {
        m_retry = retry;
        ComputeFcs();
    }
}

std::size_t
Frame::OnAirBytes() const
{
    switch (m_kind)
    {
    case FrameKind::Data:
        return kDataOverheadBytes + m_payload.size();
    case FrameKind::Rts:
        return kRtsBytes;
    case FrameKind::Cts:
        return kCtsBytes;
    case FrameKind::Ack:
        return kAckBytes;
    }
    return 0;
}

void
Frame::SerializeHeader(std::uint8_t* out) const
{
    out[0] = static_cast<std::uint8_t>(m_kind);
    out[1] = m_retry ? 1 : 0;
    PutU16(out + 2, static_cast<std::uint16_t>(m_src));
    PutU16(out + 4, static_cast<std::uint16_t>(m_dst));
    PutU16(out + 6, m_seq);
}

void
Frame::ComputeFcs()
{
    std::array<std::uint8_t, kHeaderBytes> header{};
    SerializeHeader(header.data());
    std::uint32_t crc = Crc32Update(0, header);
    m_fcs = Crc32Update(crc, m_payload);
}

std::vector<std::uint8_t>
Frame::Serialize() const
{
    std::vector<std::uint8_t> out(kHeaderBytes + m_payload.size() + kFcsBytes);
    SerializeHeader(out.data());
    std::copy(m_payload.begin(), m_payload.end(), out.begin() + kHeaderBytes);
    std::uint8_t* fcs = out.data() + kHeaderBytes + m_payload.size();
    for (int i = 0; i < 4; ++i)
    {
        fcs[i] = static_cast<std::uint8_t>((m_fcs >> (8 * i)) & 0xFF);
    }
    return out;
}

bool
FcsValid(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kHeaderBytes + kFcsBytes)
    {
        return false;
    }
    const std::size_t body = bytes.size() - kFcsBytes;
    return Crc32(bytes.first(body)) == GetU32(bytes.data() + body);
}

std::optional<Frame>
Frame::Parse(std::span<const std::uint8_t> bytes)
{
    if (!FcsValid(bytes))
    {
        return std::nullopt;
    }
    const std::uint8_t kind = bytes[0];
    if (kind > static_cast<std::uint8_t>(FrameKind::Ack) || bytes[1] > 1)
    {
        return std::nullopt;
    }
    const std::size_t payloadSize = bytes.size() - kHeaderBytes - kFcsBytes;
    const std::uint16_t seq = GetU16(bytes.data() + 6);
    if (seq >= kSeqModulus || payloadSize > kMaxPayload)
    {
        return std::nullopt;
    }
    if (kind != static_cast<std::uint8_t>(FrameKind::Data) && payloadSize != 0)
    {
        return std::nullopt;
    }
    Frame f;
    f.m_kind = static_cast<FrameKind>(kind);
    f.m_retry = bytes[1] == 1;
    f.m_src = GetU16(bytes.data() + 2);
    f.m_dst = GetU16(bytes.data() + 4);
    f.m_seq = seq;
    f.m_payload.assign(bytes.begin() + kHeaderBytes, bytes.end() - kFcsBytes);
    f.m_fcs = GetU32(bytes.data() + bytes.size() - kFcsBytes);
    return f;
}

} // namespace owc::mac
