#include "owc/mac/medium.h"

#include <stdexcept>
#include <string>

namespace owc::mac
{

Medium::Medium(sim::Simulator& simulator, MacParams params, const ErrorModel& errors,
               std::uint64_t seed)
    : m_sim(simulator),
      m_params(std::move(params)),
      m_errors(errors),
      m_backoffRng(seed, sim::Stream::MacBackoff),
      m_noiseRng(seed, sim::Stream::ChannelNoise)
{
    m_params.Validate();
}

void
Medium::AddStation(sim::NodeId id, ReceiveCallback onReceive)
{
    Station& s = m_stations[id];
    s.onReceive = std::move(onReceive);
}

Medium::Station&
Medium::Get(sim::NodeId id)
{
    auto it = m_stations.find(id);
    if (it == m_stations.end())
    {
        throw std::out_of_range("no station with id " + std::to_string(id));
    }
    return it->second;
}

std::size_t
Medium::QueueLength() const
{
    std::size_t n = 0;
    for (const auto& [id, s] : m_stations)
    {
        n += s.queue.size();
    }
    return n;
}

const MacStats&
Medium::Stats(sim::NodeId id) const
{
    auto it = m_stations.find(id);
    if (it == m_stations.end())
    {
        throw std::out_of_range("no station with id " + std::to_string(id));
    }
    return it->second.stats;
}

void
Medium::Send(sim::NodeId src, sim::NodeId dst, std::vector<std::uint8_t> payload, bool expectAck,
             DoneCallback onDone)
{
    Station& s = Get(src);
    Get(dst);
    const std::uint16_t seq = s.nextSeq;
    s.nextSeq = static_cast<std::uint16_t>((s.nextSeq + 1) % kSeqModulus);
    ++s.stats.framesSent;
    s.queue.push_back({src, dst, Frame::Data(src, dst, seq, std::move(payload)), expectAck,
                       std::move(onDone)});
    if (!m_busy)
    {
        StartNext();
    }
}

void
Medium::StartNext()
{
    // Next station after the last one served, wrapping around, with a frame waiting.
    auto it = m_stations.upper_bound(m_lastServed);
    for (std::size_t n = 0; n < m_stations.size(); ++n, ++it)
    {
        if (it == m_stations.end())
        {
            it = m_stations.begin();
        }
        if (!it->second.queue.empty())
        {
            break;
        }
    }
    if (it == m_stations.end() || it->second.queue.empty())
    {
        m_busy = false;
        return;
    }
    m_busy = true;
    m_lastServed = it->first;
    auto req = std::make_shared<Request>(std::move(it->second.queue.front()));
    it->second.queue.pop_front();

    Station& dst = Get(req->dst);
    TxOptions opts;
    opts.expectAck = req->expectAck;
    const TxResult result =
        Transmit(req->frame, m_errors, m_params, m_backoffRng, m_noiseRng, dst.receiver, opts);

    const sim::SimTime start = m_sim.Now();
    if (m_recordOccupancy)
    {
        m_occupancy.emplace_back(start, start + result.duration);
    }
    if (result.acceptedAt && dst.onReceive)
    {
        m_sim.Schedule(start + *result.acceptedAt, req->dst, sim::EventKind::AppReceive,
                       [this, req] {
                           Get(req->dst).onReceive(req->src, req->frame.Payload());
                       });
    }
    m_sim.Schedule(start + result.duration, req->src, sim::EventKind::MacTxEnd,
                   [this, req, result] {
                       MacStats& st = Get(req->src).stats;
                       st.retransmissions += result.attempts - 1;
                       st.crcFailures += result.crcFailures;
                       st.undetected += result.undetected;
                       if (result.outcome == TxOutcome::Delivered)
                       {
                           ++st.framesDelivered;
                       }
                       else
                       {
                           ++st.framesDropped;
                       }
                       if (req->onDone)
                       {
                           req->onDone(result);
                       }
                       StartNext();
                   });
}

} // namespace owc::mac
