#include "owc/traffic/topology.h"

#include <memory>

namespace owc::traffic
{

Topology::Topology(sim::Simulator& simulator, const mac::MacParams& mac,
                   const mac::ErrorModel& errors, const WiredLinkParams& wired,
                   std::uint64_t seed)
    : m_sim(simulator),
      m_wired(wired),
      m_medium(simulator, mac, errors, seed),
      m_wiredRng(seed, sim::Stream::Wired)
{
    m_medium.AddStation(kConsole, [this](sim::NodeId, const std::vector<std::uint8_t>& p) {
        if (m_consoleHandler)
        {
            m_consoleHandler(p);
        }
    });
    m_medium.AddStation(kAccessPoint, [this](sim::NodeId, const std::vector<std::uint8_t>& p) {
        Wire(kRouter, p);
    });
}

void
Topology::Wire(sim::NodeId to, std::vector<std::uint8_t> payload)
{
    if (m_wiredRng.Bernoulli(m_wired.lossProb))
    {
        ++m_wiredLosses;
        return;
    }
    auto shared = std::make_shared<std::vector<std::uint8_t>>(std::move(payload));
    m_sim.ScheduleIn(m_wired.delay, to, sim::EventKind::WiredArrive, [this, to, shared] {
        if (to == kRouter)
        {
            if (m_routerHandler)
            {
                m_routerHandler(*shared);
            }
        }
        else
        {
            m_medium.Send(kAccessPoint, kConsole, std::move(*shared), true);
        }
    });
}

void
Topology::SendUp(std::vector<std::uint8_t> payload, bool reliable,
                 mac::Medium::DoneCallback onDone)
{
    m_medium.Send(kConsole, kAccessPoint, std::move(payload), reliable, std::move(onDone));
}

void
Topology::SendDown(std::vector<std::uint8_t> payload)
{
    Wire(kAccessPoint, std::move(payload));
}

} // namespace owc::traffic
