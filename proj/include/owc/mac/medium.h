#ifndef OWC_MAC_MEDIUM_H
#define OWC_MAC_MEDIUM_H

#include "owc/mac/exchange.h"
#include "owc/sim/simulator.h"

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace owc::mac
{

struct MacStats
{
    std::uint64_t framesSent{0};
    std::uint64_t framesDelivered{0};
    std::uint64_t framesDropped{0};
    std::uint64_t retransmissions{0};
    std::uint64_t crcFailures{0};
    std::uint64_t undetected{0};
};

/**
 * \brief Shared optical medium between the stations of one lamp/dongle pair.
 *
 * Exchanges run one at a time, so occupancy intervals never overlap. Each
 * station keeps its own FIFO and stations with pending frames take turns in
 * id order, which stands in for fair contention without collisions. Uplink and downlink see the same error model.
 */
class Medium
{
  public:
    using ReceiveCallback = std::function<void(sim::NodeId src, const std::vector<std::uint8_t>&)>;
    using DoneCallback = std::function<void(const TxResult&)>;

    Medium(sim::Simulator& simulator, MacParams params, const ErrorModel& errors,
           std::uint64_t seed);

    void AddStation(sim::NodeId id, ReceiveCallback onReceive);

    /**
     * Queues one MSDU. \p onDone runs when the exchange ends; the receiver's
     * callback runs at the end of the first accepted DATA copy.
     */
    void Send(sim::NodeId src, sim::NodeId dst, std::vector<std::uint8_t> payload,
              bool expectAck, DoneCallback onDone = {});

    const MacStats& Stats(sim::NodeId id) const;

    std::size_t QueueLength() const;

    bool Busy() const
    {
        return m_busy;
    }

    /// Records [start, end) of every exchange when enabled.
    void RecordOccupancy(bool on)
    {
        m_recordOccupancy = on;
    }

    const std::vector<std::pair<sim::SimTime, sim::SimTime>>& Occupancy() const
    {
        return m_occupancy;
    }

  private:
    struct Request
    {
        sim::NodeId src;
        sim::NodeId dst;
        Frame frame;
        bool expectAck;
        DoneCallback onDone;
    };

    struct Station
    {
        ReceiveCallback onReceive;
        std::uint16_t nextSeq{0};
        MacReceiver receiver;
        MacStats stats;
        std::deque<Request> queue;
    };

    void StartNext();
    Station& Get(sim::NodeId id);

    sim::Simulator& m_sim;
    MacParams m_params;
    const ErrorModel& m_errors;
    sim::RngStream m_backoffRng;
    sim::RngStream m_noiseRng;
    std::map<sim::NodeId, Station> m_stations;
    sim::NodeId m_lastServed{0};
    bool m_busy{false};
    bool m_recordOccupancy{false};
    std::vector<std::pair<sim::SimTime, sim::SimTime>> m_occupancy;
};

} // namespace owc::mac

#endif // OWC_MAC_MEDIUM_H
