#ifndef OWC_TRAFFIC_FLOWS_H
#define OWC_TRAFFIC_FLOWS_H

#include "owc/traffic/topology.h"

#include <cstdint>
#include <vector>

namespace owc::traffic
{

/// Unreliable fixed-rate datagrams, counted at the console and at the router.
struct DatagramFlowParams
{
    std::size_t payloadSize{512};
    sim::SimTime sendInterval{sim::MilliSeconds(2)};
};

struct DatagramSlot
{
    std::uint64_t sent{0};
    std::uint64_t received{0};
};

/**
 * Sends one datagram every interval for nSlots * slotDuration, single attempt
 * on the optical hop. Receptions are credited to the slot the datagram was
 * sent in.
 */
std::vector<DatagramSlot> RunDatagramFlow(Topology& topo, const DatagramFlowParams& flow,
                                          sim::SimTime slotDuration, std::size_t nSlots);

/**
 * \brief Saturating reliable stream with go-back-N retransmission.
 *
 * The retransmission timeout follows the smoothed RTT: srtt + 4 rttvar,
 * clamped to [minRto, maxRto], doubled on every expiry. Only segments sent
 * once are sampled.
 */
struct StreamFlowParams
{
    std::size_t segmentSize{1460};
    std::size_t window{32 * 1460}; ///< in-flight byte limit
    std::size_t ackSize{40};
    std::uint32_t ackEvery{4};                       ///< segments per cumulative ack
    sim::SimTime ackDelay{sim::MilliSeconds(2)};     ///< ack sent no later than this
    sim::SimTime minRto{sim::MilliSeconds(200)};
    sim::SimTime initialRto{sim::Seconds(1.0)};
    sim::SimTime maxRto{sim::Seconds(60.0)};
};

struct StreamResult
{
    std::vector<std::uint64_t> bytesPerSlot; ///< in-order bytes at the router
    std::uint64_t segmentsSent{0};
    std::uint64_t retransmittedSegments{0};
    std::uint64_t bytesAcked{0};
    std::uint64_t maxInFlight{0};
};

StreamResult RunStreamFlow(Topology& topo, const StreamFlowParams& flow, sim::SimTime slotDuration,
                           std::size_t nSlots);

/**
 * \brief Router processing delay added before each echo reply.
 *
 * base + lognormal(bodyMedian, bodySigma), plus with probability tailProb an
 * exponential spike of mean tailScale.
 */
struct JitterParams
{
    sim::SimTime base{sim::MicroSeconds(6500)};
    double bodyMedian{2e-4}; ///< seconds
    double bodySigma{0.5};
    double tailProb{9e-5};
    double tailScale{0.05}; ///< seconds

    void Validate() const;
    sim::SimTime Draw(sim::RngStream& rng) const;
};

struct EchoFlowParams
{
    std::size_t payloadSize{512};
    sim::SimTime period{sim::MilliSeconds(100)};
    std::size_t echoesPerSlot{1000};
    sim::SimTime timeout{sim::Seconds(1.0)};
    JitterParams jitter;
};

struct EchoSlot
{
    std::vector<double> rtts; ///< seconds; infinity for lost echoes
    double duration{0.0};     ///< seconds from first send to last completion
};

/**
 * One request outstanding at a time. The next request leaves one period after
 * the previous one or when it completes, whichever is later.
 */
std::vector<EchoSlot> RunEchoFlow(Topology& topo, const EchoFlowParams& flow, std::size_t nSlots,
                                  std::uint64_t seed);

} // namespace owc::traffic

#endif // OWC_TRAFFIC_FLOWS_H
