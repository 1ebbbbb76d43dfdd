#include "owc/sim/simulator.h"

#include <string>

namespace owc::sim
{

std::string_view
ToString(EventKind kind)
{
    switch (kind)
    {
    case EventKind::Generic:
        return "generic";
    case EventKind::AppSend:
        return "app-send";
    case EventKind::MacAccess:
        return "mac-access";
    case EventKind::MacTxEnd:
        return "mac-tx-end";
    case EventKind::MacTimeout:
        return "mac-timeout";
    case EventKind::WiredArrive:
        return "wired-arrive";
    case EventKind::AppReceive:
        return "app-receive";
    case EventKind::SlotBoundary:
        return "slot-boundary";
    case EventKind::Heartbeat:
        return "heartbeat";
    case EventKind::SafetyCheck:
        return "safety-check";
    case EventKind::EstopSignal:
        return "estop-signal";
    }
    return "unknown";
}

EventHandle::EventHandle(std::shared_ptr<Record> record)
    : m_record(std::move(record))
{
}

void
EventHandle::Cancel()
{
    if (m_record && !m_record->done)
    {
        m_record->cancelled = true;
        m_record->action = nullptr;
    }
}

bool
EventHandle::IsPending() const
{
    return m_record && !m_record->done && !m_record->cancelled;
}

std::uint64_t
EventHandle::Seq() const
{
    return m_record ? m_record->seq : 0;
}

EventHandle
Simulator::Schedule(SimTime at, NodeId target, EventKind kind, Action action)
{
    if (at < m_now)
    {
        throw KernelError("event scheduled at " + std::to_string(at.Ticks()) +
                          " ns, before current time " + std::to_string(m_now.Ticks()) + " ns");
    }
    const std::uint64_t seq = m_nextSeq++;
    auto record = std::make_shared<EventHandle::Record>(
        EventHandle::Record{seq, target, kind, std::move(action)});
    m_queue.push(Entry{at, seq, record});
    return EventHandle(std::move(record));
}

EventHandle
Simulator::ScheduleIn(SimTime delay, NodeId target, EventKind kind, Action action)
{
    return Schedule(m_now + delay, target, kind, std::move(action));
}

bool
Simulator::Step(SimTime deadline)
{
    while (!m_queue.empty())
    {
        const Entry& top = m_queue.top();
        if (top.fireAt > deadline)
        {
            return false;
        }
        const SimTime fireAt = top.fireAt;
        auto record = top.record;
        m_queue.pop();
        if (record->cancelled)
        {
            continue;
        }
        m_now = fireAt;
        record->done = true;
        if (m_trace)
        {
            *m_trace << m_now.Ticks() << '\t' << record->target << '\t' << ToString(record->kind)
                     << '\n';
        }
        auto action = std::move(record->action);
        ++m_processed;
        if (action)
        {
            action();
        }
        return true;
    }
    return false;
}

std::uint64_t
Simulator::RunUntil(SimTime deadline)
{
    const std::uint64_t before = m_processed;
    while (Step(deadline))
    {
    }
    if (deadline > m_now)
    {
        m_now = deadline;
    }
    return m_processed - before;
}

std::uint64_t
Simulator::Run()
{
    const std::uint64_t before = m_processed;
    while (Step(SimTime::Max()))
    {
    }
    return m_processed - before;
}

} // namespace owc::sim
