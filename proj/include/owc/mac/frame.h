#ifndef OWC_MAC_FRAME_H
#define OWC_MAC_FRAME_H

#include "owc/sim/simulator.h"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace owc::mac
{

enum class FrameKind : std::uint8_t
{
    Data = 0,
    Rts = 1,
    Cts = 2,
    Ack = 3,
};

constexpr std::uint16_t kSeqModulus = 4096;
constexpr std::size_t kMaxPayload = 2304;

/// Nominal 802.11 lengths used for airtime; the serialized header is more compact.
constexpr std::size_t kDataOverheadBytes = 28; // 24-byte MAC header + 4-byte FCS
constexpr std::size_t kRtsBytes = 20;
constexpr std::size_t kCtsBytes = 14;
constexpr std::size_t kAckBytes = 14;

/// Serialized layout: kind, flags, src(2), dst(2), seq(2), payload, fcs(4). Little endian.
constexpr std::size_t kHeaderBytes = 8;
constexpr std::size_t kFcsBytes = 4;

class FrameError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/**
 * \brief MAC protocol data unit with its frame check sequence.
 *
 * The FCS is computed when the frame is built and never changes afterwards.
 * Frames are immutable apart from the retry flag, which recomputes the FCS.
 */
class Frame
{
  public:
    static Frame Data(sim::NodeId src, sim::NodeId dst, std::uint16_t seq,
                      std::vector<std::uint8_t> payload);
    static Frame Control(FrameKind kind, sim::NodeId src, sim::NodeId dst, std::uint16_t seq);

    FrameKind Kind() const
    {
        return m_kind;
    }

    sim::NodeId Src() const
    {
        return m_src;
    }

    sim::NodeId Dst() const
    {
        return m_dst;
    }

    std::uint16_t Seq() const
    {
        return m_seq;
    }

    bool Retry() const
    {
        return m_retry;
    }

    void SetRetry(bool retry);

    const std::vector<std::uint8_t>& Payload() const
    {
        return m_payload;
    }

    std::uint32_t Fcs() const
    {
        return m_fcs;
    }

    /// Bytes counted for airtime.
    std::size_t OnAirBytes() const;

    std::size_t OnAirBits() const
    {
        return OnAirBytes() * 8;
    }

    std::vector<std::uint8_t> Serialize() const;

    /**
     * Parses and checks the FCS. Returns nullopt for truncated buffers,
     * unknown kinds, or FCS mismatch.
     */
    static std::optional<Frame> Parse(std::span<const std::uint8_t> bytes);

  private:
    Frame() = default;
    void ComputeFcs();
    void SerializeHeader(std::uint8_t* out) const;

    FrameKind m_kind{FrameKind::Data};
    sim::NodeId m_src{0};
    sim::NodeId m_dst{0};
    std::uint16_t m_seq{0};
    bool m_retry{false};
    std::vector<std::uint8_t> m_payload;
    std::uint32_t m_fcs{0};
};

/// Serialized-frame FCS check without building a Frame.
bool FcsValid(std::span<const std::uint8_t> bytes);

} // namespace owc::mac

#endif // OWC_MAC_FRAME_H
