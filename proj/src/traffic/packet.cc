#include "owc/traffic/packet.h"

#include <algorithm>
#include <stdexcept>

namespace owc::traffic
{

std::vector<std::uint8_t>
AppHeader::Encode(std::size_t totalSize, std::span<const std::uint8_t> extra) const
{
    if (totalSize < kBytes + extra.size())
    {
        throw std::invalid_argument("packet size smaller than its header");
    }
    std::vector<std::uint8_t> out(totalSize, 0);
    out[0] = static_cast<std::uint8_t>(kind);
    for (int i = 0; i < 4; ++i)
    {
        out[4 + i] = static_cast<std::uint8_t>(seq >> (8 * i));
    }
    for (int i = 0; i < 8; ++i)
    {
        out[8 + i] = static_cast<std::uint8_t>(aux >> (8 * i));
    }
    std::copy(extra.begin(), extra.end(), out.begin() + kBytes);
    return out;
}

std::optional<AppHeader>
AppHeader::Decode(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kBytes)
    {
        return std::nullopt;
    }
    const std::uint8_t kind = bytes[0];
    if (kind < static_cast<std::uint8_t>(PacketKind::Datagram) ||
        kind > static_cast<std::uint8_t>(PacketKind::Estop))
    {
        return std::nullopt;
    }
    AppHeader h;
    h.kind = static_cast<PacketKind>(kind);
    for (int i = 0; i < 4; ++i)
    {
        h.seq |= static_cast<std::uint32_t>(bytes[4 + i]) << (8 * i);
    }
    for (int i = 0; i < 8; ++i)
    {
        h.aux |= static_cast<std::uint64_t>(bytes[8 + i]) << (8 * i);
    }
    return h;
}

} // namespace owc::traffic
