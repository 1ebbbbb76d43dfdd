#ifndef OWC_TRAFFIC_PACKET_H
#define OWC_TRAFFIC_PACKET_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace owc::traffic
{

enum class PacketKind : std::uint8_t
{
    Datagram = 1,
    Segment = 2,
    SegmentAck = 3,
    EchoRequest = 4,
    EchoReply = 5,
    Heartbeat = 6,
    Motion = 7,
    Estop = 8,
};

/// Application header at the start of every MAC payload, little endian.
struct AppHeader
{
    PacketKind kind{PacketKind::Datagram};
    std::uint32_t seq{0};
    std::uint64_t aux{0}; ///< flow specific: cumulative ack, issue time in ticks

    static constexpr std::size_t kBytes = 16;

    /// Header followed by \p extra, zero padded to \p totalSize bytes.
    std::vector<std::uint8_t> Encode(std::size_t totalSize,
                                     std::span<const std::uint8_t> extra = {}) const;

    /// nullopt if the buffer is shorter than the header or the kind is unknown.
    static std::optional<AppHeader> Decode(std::span<const std::uint8_t> bytes);
};

} // namespace owc::traffic

#endif // OWC_TRAFFIC_PACKET_H
