#include "owc/mac/crc32.h"

#include <array>

namespace owc::mac
{

namespace
{

constexpr std::uint32_t kPolynomial = 0xEDB88320U;

constexpr std::array<std::uint32_t, 256>
MakeTable()
{
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i)
    {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k)
        {
            c = (c & 1U) ? (kPolynomial ^ (c >> 1)) : (c >> 1);
        }
        table[i] = c;
    }
    return table;
}

constexpr auto kTable = MakeTable();

} // namespace

std::uint32_t
Crc32Update(std::uint32_t crc, std::span<const std::uint8_t> data)
{
    std::uint32_t c = crc ^ 0xFFFFFFFFU;
    for (std::uint8_t byte : data)
    {
        c = kTable[(c ^ byte) & 0xFFU] ^ (c >> 8);
    }
    return c ^ 0xFFFFFFFFU;
}

std::uint32_t
Crc32(std::span<const std::uint8_t> data)
{
    return Crc32Update(0, data);
}

} // namespace owc::mac
