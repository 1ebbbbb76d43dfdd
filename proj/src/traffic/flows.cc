#include "owc/traffic/flows.h"

#include "owc/traffic/packet.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <stdexcept>

namespace owc::traffic
{

using sim::SimTime;

std::vector<DatagramSlot>
RunDatagramFlow(Topology& topo, const DatagramFlowParams& flow, SimTime slotDuration,
                std::size_t nSlots)
{
    if (flow.sendInterval.Ticks() <= 0 || slotDuration.Ticks() <= 0)
    {
        throw std::invalid_argument("datagram interval and slot duration must be positive");
    }
    sim::Simulator& sim = topo.Sim();
    const SimTime start = sim.Now();
    const std::int64_t total = slotDuration.Ticks() * static_cast<std::int64_t>(nSlots);
    const std::uint64_t count = static_cast<std::uint64_t>(total / flow.sendInterval.Ticks());

    std::vector<DatagramSlot> slots(nSlots);
    auto slotOf = [&](std::uint64_t k) {
        return static_cast<std::size_t>(static_cast<std::int64_t>(k) *
                                        flow.sendInterval.Ticks() / slotDuration.Ticks());
    };

    topo.SetRouterHandler([&](const std::vector<std::uint8_t>& p) {
        const auto h = AppHeader::Decode(p);
        if (h && h->kind == PacketKind::Datagram && h->seq < count)
        {
            ++slots[slotOf(h->seq)].received;
        }
    });

    for (std::uint64_t k = 0; k < count; ++k)
    {
        sim.Schedule(start + flow.sendInterval * static_cast<std::int64_t>(k), kConsole,
                     sim::EventKind::AppSend, [&, k] {
                         ++slots[slotOf(k)].sent;
                         AppHeader h{PacketKind::Datagram, static_cast<std::uint32_t>(k), 0};
                         topo.SendUp(h.Encode(flow.payloadSize), false);
                     });
    }
    sim.Run();
    topo.SetRouterHandler({});
    return slots;
}

StreamResult
RunStreamFlow(Topology& topo, const StreamFlowParams& flow, SimTime slotDuration,
              std::size_t nSlots)
{
    if (flow.segmentSize < AppHeader::kBytes || flow.window < flow.segmentSize ||
        flow.ackEvery == 0)
    {
        throw std::invalid_argument("stream window must hold at least one segment");
    }
    sim::Simulator& sim = topo.Sim();
    const std::uint64_t windowSegments = flow.window / flow.segmentSize;

    StreamResult result;
    result.bytesPerSlot.assign(nSlots, 0);

    struct Sent
    {
        SimTime at;
        bool retransmitted{false};
    };

    struct State
    {
        std::uint64_t base{0};
        std::uint64_t next{0};
        std::uint64_t highest{0};
        bool stopped{false};
        sim::EventHandle rto;
        std::deque<Sent> sent; ///< index i holds segment base + i
        bool haveRtt{false};
        double srtt{0.0};
        double rttvar{0.0};
        SimTime timeout;
        // Router side.
        std::uint64_t expected{0};
        std::uint32_t unacked{0};
        sim::EventHandle delayedAck;
        bool started{false};
        SimTime firstArrival;
    };
    auto st = std::make_shared<State>();

    std::function<void()> fill;
    std::function<void()> armRto;

    auto sendAck = [&, st] {
        st->delayedAck.Cancel();
        st->unacked = 0;
        AppHeader h{PacketKind::SegmentAck, 0, st->expected};
        topo.SendDown(h.Encode(flow.ackSize));
    };

    st->timeout = flow.initialRto;
    auto clampRto = [&](SimTime t) { return std::clamp(t, flow.minRto, flow.maxRto); };

    armRto = [&, st] {
        st->rto.Cancel();
        st->rto = sim.ScheduleIn(st->timeout, kConsole, sim::EventKind::MacTimeout, [&, st] {
            if (st->base < st->next && !st->stopped)
            {
                st->timeout = clampRto(st->timeout * 2);
                st->next = st->base;
                fill();
            }
            armRto();
        });
    };

    auto sampleRtt = [&, st](double r) {
        if (!st->haveRtt)
        {
            st->haveRtt = true;
            st->srtt = r;
            st->rttvar = r / 2.0;
        }
        else
        {
            st->rttvar = 0.75 * st->rttvar + 0.25 * std::abs(st->srtt - r);
            st->srtt = 0.875 * st->srtt + 0.125 * r;
        }
        st->timeout = clampRto(sim::Seconds(st->srtt + 4.0 * st->rttvar));
    };

    fill = [&, st] {
        while (!st->stopped && st->next - st->base < windowSegments)
        {
            const std::uint64_t i = st->next++;
            ++result.segmentsSent;
            if (i < st->highest)
            {
                ++result.retransmittedSegments;
                st->sent[i - st->base].retransmitted = true;
            }
            else
            {
                st->sent.push_back({sim.Now(), false});
            }
            st->highest = std::max(st->highest, i + 1);
            AppHeader h{PacketKind::Segment, static_cast<std::uint32_t>(i), 0};
            topo.SendUp(h.Encode(flow.segmentSize), true);
            result.maxInFlight = std::max<std::uint64_t>(
                result.maxInFlight, (st->next - st->base) * flow.segmentSize);
        }
    };

    topo.SetRouterHandler([&, st](const std::vector<std::uint8_t>& p) {
        const auto h = AppHeader::Decode(p);
        if (!h || h->kind != PacketKind::Segment)
        {
            return;
        }
        if (h->seq != static_cast<std::uint32_t>(st->expected))
        {
            sendAck();
            return;
        }
        const SimTime now = sim.Now();
        if (!st->started)
        {
            st->started = true;
            st->firstArrival = now;
            // Slots are timed from the first bit reaching the router.
            sim.Schedule(now + slotDuration * static_cast<std::int64_t>(nSlots), kRouter,
                         sim::EventKind::SlotBoundary, [st] { st->stopped = true; });
        }
        if (!st->stopped)
        {
            const auto slot = static_cast<std::size_t>((now - st->firstArrival).Ticks() /
                                                       slotDuration.Ticks());
            if (slot < nSlots)
            {
                result.bytesPerSlot[slot] += flow.segmentSize;
            }
        }
        ++st->expected;
        if (++st->unacked >= flow.ackEvery)
        {
            sendAck();
        }
        else if (!st->delayedAck.IsPending())
        {
            st->delayedAck =
                sim.ScheduleIn(flow.ackDelay, kRouter, sim::EventKind::MacTimeout, sendAck);
        }
    });

    topo.SetConsoleHandler([&, st](const std::vector<std::uint8_t>& p) {
        const auto h = AppHeader::Decode(p);
        if (!h || h->kind != PacketKind::SegmentAck)
        {
            return;
        }
        if (h->aux > st->base && h->aux <= st->highest)
        {
            const Sent& last = st->sent[h->aux - 1 - st->base];
            if (!last.retransmitted)
            {
                sampleRtt((sim.Now() - last.at).Seconds());
            }
            st->sent.erase(st->sent.begin(),
                           st->sent.begin() + static_cast<std::ptrdiff_t>(h->aux - st->base));
            result.bytesAcked += (h->aux - st->base) * flow.segmentSize;
            st->base = h->aux;
            st->next = std::max(st->next, st->base);
            armRto();
            fill();
        }
    });

    // A link that never delivers ends the run after the nominal duration.
    sim.ScheduleIn(slotDuration * static_cast<std::int64_t>(nSlots), kConsole,
                   sim::EventKind::SlotBoundary, [st] {
                       if (!st->started)
                       {
                           st->stopped = true;
                       }
                   });
    fill();
    armRto();
    while (!st->stopped && sim.PendingCount() > 0)
    {
        sim.RunUntil(sim.Now() + sim::Seconds(1.0));
    }
    st->rto.Cancel();
    st->delayedAck.Cancel();
    topo.SetRouterHandler({});
    topo.SetConsoleHandler({});
    return result;
}

void
JitterParams::Validate() const
{
    if (base.Ticks() < 0 || !(bodyMedian >= 0.0) || !(bodySigma >= 0.0) ||
        !(tailProb >= 0.0 && tailProb <= 1.0) || !(tailScale >= 0.0))
    {
        throw std::invalid_argument("jitter parameters out of range");
    }
}

SimTime
JitterParams::Draw(sim::RngStream& rng) const
{
    double extra = bodyMedian > 0.0 ? bodyMedian * std::exp(bodySigma * rng.Normal()) : 0.0;
    const double u = rng.Uniform();
    if (u < tailProb)
    {
        extra += rng.Exponential(tailScale);
    }
    return base + sim::Seconds(extra);
}

std::vector<EchoSlot>
RunEchoFlow(Topology& topo, const EchoFlowParams& flow, std::size_t nSlots, std::uint64_t seed)
{
    flow.jitter.Validate();
    if (flow.echoesPerSlot == 0 || flow.period.Ticks() <= 0)
    {
        throw std::invalid_argument("echo flow needs a positive period and slot size");
    }
    sim::Simulator& sim = topo.Sim();
    sim::RngStream jitterRng(seed, sim::Stream::Jitter);
    const std::uint64_t total = static_cast<std::uint64_t>(nSlots) * flow.echoesPerSlot;

    std::vector<EchoSlot> slots(nSlots);
    std::vector<SimTime> slotStart(nSlots);

    struct State
    {
        std::uint64_t k{0};
        SimTime sentAt;
        bool outstanding{false};
        sim::EventHandle timeout;
    };
    auto st = std::make_shared<State>();
    std::function<void()> sendNext;

    auto complete = [&, st](double rtt) {
        const std::size_t slot = static_cast<std::size_t>(st->k / flow.echoesPerSlot);
        slots[slot].rtts.push_back(rtt);
        slots[slot].duration = (sim.Now() - slotStart[slot]).Seconds();
        st->outstanding = false;
        st->timeout.Cancel();
        ++st->k;
        if (st->k < total)
        {
            const SimTime next = std::max(st->sentAt + flow.period, sim.Now());
            sim.Schedule(next, kConsole, sim::EventKind::AppSend, sendNext);
        }
    };

    sendNext = [&, st] {
        const SimTime now = sim.Now();
        if (st->k % flow.echoesPerSlot == 0)
        {
            slotStart[st->k / flow.echoesPerSlot] = now;
        }
        st->sentAt = now;
        st->outstanding = true;
        AppHeader h{PacketKind::EchoRequest, static_cast<std::uint32_t>(st->k),
                    static_cast<std::uint64_t>(now.Ticks())};
        topo.SendUp(h.Encode(flow.payloadSize), true);
        st->timeout = sim.ScheduleIn(flow.timeout, kConsole, sim::EventKind::MacTimeout,
                                     [&, st] { complete(std::numeric_limits<double>::infinity()); });
    };

    topo.SetRouterHandler([&](const std::vector<std::uint8_t>& p) {
        const auto h = AppHeader::Decode(p);
        if (!h || h->kind != PacketKind::EchoRequest)
        {
            return;
        }
        const SimTime delay = flow.jitter.Draw(jitterRng);
        const AppHeader reply{PacketKind::EchoReply, h->seq, h->aux};
        sim.ScheduleIn(delay, kRouter, sim::EventKind::AppSend,
                       [&, reply] { topo.SendDown(reply.Encode(flow.payloadSize)); });
    });

    topo.SetConsoleHandler([&, st](const std::vector<std::uint8_t>& p) {
        const auto h = AppHeader::Decode(p);
        if (!h || h->kind != PacketKind::EchoReply)
        {
            return;
        }
        if (st->outstanding && h->seq == static_cast<std::uint32_t>(st->k))
        {
            complete((sim.Now() - st->sentAt).Seconds());
        }
    });

    if (total > 0)
    {
        sim.Schedule(sim.Now(), kConsole, sim::EventKind::AppSend, sendNext);
    }
    sim.Run();
    topo.SetRouterHandler({});
    topo.SetConsoleHandler({});
    return slots;
}

} // namespace owc::traffic
