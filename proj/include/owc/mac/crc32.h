#ifndef OWC_MAC_CRC32_H
#define OWC_MAC_CRC32_H

#include <cstddef>
#include <cstdint>
#include <span>

namespace owc::mac
{

/**
 * IEEE 802.3 / 802.11 frame check sequence: reflected polynomial 0xEDB88320,
 * initial value and final XOR 0xFFFFFFFF. Table driven.
 */
std::uint32_t Crc32(std::span<const std::uint8_t> data);

/// Continues a running CRC. Pass 0 as \p crc for the first chunk.
std::uint32_t Crc32Update(std::uint32_t crc, std::span<const std::uint8_t> data);

} // namespace owc::mac

#endif // OWC_MAC_CRC32_H
