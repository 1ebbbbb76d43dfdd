#ifndef OWC_MAC_EXCHANGE_H
#define OWC_MAC_EXCHANGE_H

#include "owc/mac/error-model.h"
#include "owc/mac/frame.h"
#include "owc/mac/mac-params.h"
#include "owc/sim/rng.h"
#include "owc/sim/sim-time.h"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace owc::mac
{

enum class TxOutcome : std::uint8_t
{
    Delivered,
    Dropped,
};

enum class DropReason : std::uint8_t
{
    None,
    RetryLimit,
    LinkDown,
};

const char* ToString(DropReason reason);

/// One frame on the air, times relative to the exchange start.
struct FrameRecord
{
    FrameKind kind;
    sim::SimTime start;
    sim::SimTime end;
    bool lost;
};

struct TxOptions
{
    bool expectAck{true};     ///< false: single DATA frame, no RTS/CTS, no retries
    bool recordFrames{false};
};

/**
 * \brief Result of one MSDU exchange as seen by both ends.
 *
 * The sender's outcome and the receiver's acceptance can differ: a lost ACK
 * after a received DATA frame leaves the data delivered while the sender
 * keeps retrying.
 */
struct TxResult
{
    TxOutcome outcome{TxOutcome::Dropped};
    DropReason reason{DropReason::None};
    std::uint32_t attempts{0};
    sim::SimTime duration;                  ///< medium occupancy of the whole chain
    std::optional<sim::SimTime> acceptedAt; ///< end of the first DATA copy the receiver kept
    std::uint32_t crcFailures{0};           ///< corrupted copies rejected by the FCS check
    std::uint32_t undetected{0};            ///< corrupted copies that passed the FCS check
    std::vector<FrameRecord> frames;
};

/**
 * \brief Receive side of one station: FCS check and duplicate filter.
 *
 * Keeps the last accepted sequence number per source, so a retransmission
 * of an already accepted frame is acknowledged but not passed up again.
 */
class MacReceiver
{
  public:
    /// True if the frame is new and must be passed to the upper layer.
    bool AcceptData(const Frame& frame);

    /**
     * Checks a damaged copy. Returns the parsed frame only if the FCS check
     * fails to notice the damage; increments the failure count otherwise.
     */
    std::optional<Frame> CheckCorrupted(const std::vector<std::uint8_t>& bytes);

    std::uint64_t CrcFailures() const
    {
        return m_crcFailures;
    }

    std::uint64_t Duplicates() const
    {
        return m_duplicates;
    }

  private:
    std::unordered_map<sim::NodeId, std::uint16_t> m_lastSeq;
    std::uint64_t m_crcFailures{0};
    std::uint64_t m_duplicates{0};
};

/**
 * Flips bits of a serialized frame: either one burst of at most 32 bits or
 * up to 8 scattered bits, always at least one.
 */
void CorruptBits(std::vector<std::uint8_t>& bytes, sim::RngStream& rng);

/**
 * Runs DIFS + backoff, optional RTS/CTS, DATA and ACK with binary exponential
 * backoff on failure. The frame's retry flag is updated on retransmissions.
 * Every lost DATA copy that is not an outage reaches \p receiver with real
 * bit errors and is checked against its FCS.
 */
TxResult Transmit(Frame& frame, const ErrorModel& errors, const MacParams& params,
                  sim::RngStream& backoffRng, sim::RngStream& noiseRng, MacReceiver& receiver,
                  const TxOptions& options = {});

/// Error-free duration of one exchange with the given backoff slot count.
sim::SimTime NominalExchangeTime(std::size_t payloadBytes, double rate, const MacParams& params,
                                 std::uint32_t backoffSlots, bool expectAck = true);

} // namespace owc::mac

#endif // OWC_MAC_EXCHANGE_H
