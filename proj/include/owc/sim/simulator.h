#ifndef OWC_SIM_SIMULATOR_H
#define OWC_SIM_SIMULATOR_H

#include "owc/sim/sim-time.h"

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace owc::sim
{

using NodeId = std::uint32_t;

/// Event discriminator, printed in the event trace.
enum class EventKind : std::uint8_t
{
    Generic,
    AppSend,
    MacAccess,
    MacTxEnd,
    MacTimeout,
    WiredArrive,
    AppReceive,
    SlotBoundary,
    Heartbeat,
    SafetyCheck,
    EstopSignal,
};

std::string_view ToString(EventKind kind);

/// Thrown on kernel misuse, e.g. scheduling into the past.
class KernelError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/**
 * Cancellation token for a scheduled event. A default-constructed handle
 * refers to nothing and cancelling it is a no-op.
 */
class EventHandle
{
  public:
    EventHandle() = default;

    void Cancel();
    bool IsPending() const;

    std::uint64_t Seq() const;

  private:
    friend class Simulator;
    struct Record;
    explicit EventHandle(std::shared_ptr<Record> record);
    std::shared_ptr<Record> m_record;
};

/**
 * \brief Single-threaded discrete-event kernel.
 *
 * Events execute in (fire time, insertion sequence) order. An optional trace
 * stream receives one line per executed event: ticks, node and kind separated
 * by tabs.
 */
class Simulator
{
  public:
    using Action = std::function<void()>;

    Simulator() = default;
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    SimTime Now() const
    {
        return m_now;
    }

    /// \throws KernelError if \p at lies before Now().
    EventHandle Schedule(SimTime at, NodeId target, EventKind kind, Action action);

    EventHandle ScheduleIn(SimTime delay, NodeId target, EventKind kind, Action action);

    /// Processes every event with fire time <= deadline; the clock ends at the deadline.
    std::uint64_t RunUntil(SimTime deadline);

    /// Processes events until the queue drains; the clock ends at the last event.
    std::uint64_t Run();

    void SetTrace(std::ostream* trace)
    {
        m_trace = trace;
    }

    std::size_t PendingCount() const
    {
        return m_queue.size();
    }

    std::uint64_t ProcessedCount() const
    {
        return m_processed;
    }

  private:
    struct Entry
    {
        SimTime fireAt;
        std::uint64_t seq;
        std::shared_ptr<EventHandle::Record> record;
    };

    struct Later
    {
        bool operator()(const Entry& a, const Entry& b) const
        {
            if (a.fireAt != b.fireAt)
            {
                return a.fireAt > b.fireAt;
            }
            return a.seq > b.seq;
        }
    };

    bool Step(SimTime deadline);

    SimTime m_now{};
    std::uint64_t m_nextSeq{0};
    std::uint64_t m_processed{0};
    std::priority_queue<Entry, std::vector<Entry>, Later> m_queue;
    std::ostream* m_trace{nullptr};
};

struct EventHandle::Record
{
    std::uint64_t seq;
    NodeId target;
    EventKind kind;
    Simulator::Action action;
    bool cancelled{false};
    bool done{false};
};

} // namespace owc::sim

#endif // OWC_SIM_SIMULATOR_H
