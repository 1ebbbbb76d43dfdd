#ifndef OWC_TRAFFIC_TOPOLOGY_H
#define OWC_TRAFFIC_TOPOLOGY_H

#include "owc/mac/error-model.h"
#include "owc/mac/mac-params.h"
#include "owc/mac/medium.h"
#include "owc/sim/rng.h"
#include "owc/sim/simulator.h"

#include <cstdint>
#include <functional>
#include <vector>

namespace owc::traffic
{

constexpr sim::NodeId kConsole = 0;
constexpr sim::NodeId kAccessPoint = 1;
constexpr sim::NodeId kRouter = 2;
constexpr sim::NodeId kCnc = 3;

struct WiredLinkParams
{
    sim::SimTime delay{sim::MicroSeconds(200)};
    double lossProb{1e-9};
};

/**
 * \brief console -- optical link -- AP -- wired link -- router.
 *
 * The CNC hangs off the router; packets for it are passed on without extra
 * delay. The access point forwards in both directions.
 */
class Topology
{
  public:
    using Handler = std::function<void(const std::vector<std::uint8_t>&)>;

    Topology(sim::Simulator& simulator, const mac::MacParams& mac, const mac::ErrorModel& errors,
             const WiredLinkParams& wired, std::uint64_t seed);

    /// Console to router. \p reliable selects ACKed MAC delivery with retries.
    void SendUp(std::vector<std::uint8_t> payload, bool reliable = true,
                mac::Medium::DoneCallback onDone = {});

    /// Router to console, always ACKed on the optical hop.
    void SendDown(std::vector<std::uint8_t> payload);

    void SetRouterHandler(Handler h)
    {
        m_routerHandler = std::move(h);
    }

    void SetConsoleHandler(Handler h)
    {
        m_consoleHandler = std::move(h);
    }

    sim::Simulator& Sim()
    {
        return m_sim;
    }

    mac::Medium& Medium()
    {
        return m_medium;
    }

    std::uint64_t WiredLosses() const
    {
        return m_wiredLosses;
    }

  private:
    void Wire(sim::NodeId to, std::vector<std::uint8_t> payload);

    sim::Simulator& m_sim;
    WiredLinkParams m_wired;
    mac::Medium m_medium;
    sim::RngStream m_wiredRng;
    Handler m_routerHandler;
    Handler m_consoleHandler;
    std::uint64_t m_wiredLosses{0};
};

} // namespace owc::traffic

#endif // OWC_TRAFFIC_TOPOLOGY_H
