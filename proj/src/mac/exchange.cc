#include "owc/mac/exchange.h"

#include <algorithm>

namespace owc::mac
{

using sim::SimTime;

const char*
ToString(DropReason reason)
{
    switch (reason)
    {
    case DropReason::None:
        return "none";
    case DropReason::RetryLimit:
        return "retry_limit";
    case DropReason::LinkDown:
        return "link_down";
    }
    return "unknown";
}

bool
MacReceiver::AcceptData(const Frame& frame)
{
    auto it = m_lastSeq.find(frame.Src());
    if (it != m_lastSeq.end() && frame.Retry() && it->second == frame.Seq())
    {
        ++m_duplicates;
        return false;
    }
    m_lastSeq[frame.Src()] = frame.Seq();
    return true;
}

std::optional<Frame>
MacReceiver::CheckCorrupted(const std::vector<std::uint8_t>& bytes)
{
    std::optional<Frame> parsed = Frame::Parse(bytes);
    if (!parsed)
    {
        ++m_crcFailures;
    }
    return parsed;
}

void
CorruptBits(std::vector<std::uint8_t>& bytes, sim::RngStream& rng)
{
    const std::uint64_t nbits = bytes.size() * 8;
    auto flip = [&bytes](std::uint64_t bit) {
        bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    };
    if (rng.Bernoulli(0.5))
    {
        // Burst: first and last bit flipped, inner bits random.
        const std::uint64_t len = 1 + rng.UniformInt(std::min<std::uint64_t>(32, nbits));
        const std::uint64_t start = rng.UniformInt(nbits - len + 1);
        flip(start);
        if (len > 1)
        {
            flip(start + len - 1);
            for (std::uint64_t b = start + 1; b + 1 < start + len; ++b)
            {
                if (rng.Bernoulli(0.5))
                {
                    flip(b);
                }
            }
        }
        return;
    }
    const std::uint64_t count = 1 + rng.UniformInt(std::min<std::uint64_t>(8, nbits));
    std::vector<std::uint64_t> chosen;
    while (chosen.size() < count)
    {
        const std::uint64_t bit = rng.UniformInt(nbits);
        if (std::find(chosen.begin(), chosen.end(), bit) == chosen.end())
        {
            chosen.push_back(bit);
            flip(bit);
        }
    }
}

namespace
{

class ExchangeClock
{
  public:
    ExchangeClock(bool record, std::vector<FrameRecord>& out)
        : m_record(record),
          m_out(out)
    {
    }

    void Wait(SimTime d)
    {
        m_now += d;
    }

    void OnAir(FrameKind kind, SimTime airtime, bool lost)
    {
        if (m_record)
        {
            m_out.push_back({kind, m_now, m_now + airtime, lost});
        }
        m_now += airtime;
    }

    SimTime Now() const
    {
        return m_now;
    }

  private:
    SimTime m_now{};
    bool m_record;
    std::vector<FrameRecord>& m_out;
};

} // namespace

TxResult
Transmit(Frame& frame, const ErrorModel& errors, const MacParams& params,
         sim::RngStream& backoffRng, sim::RngStream& noiseRng, MacReceiver& receiver,
         const TxOptions& options)
{
    TxResult result;
    ExchangeClock clock(options.recordFrames, result.frames);

    const double rate = SelectRate(errors.Snr(), params);
    const bool useRts = options.expectAck && frame.Payload().size() >= params.rtsThreshold;
    const std::uint32_t maxAttempts = options.expectAck ? params.retryLimit + 1 : 1;

    const SimTime rtsTime = Airtime(kRtsBytes, rate);
    const SimTime ctsTime = Airtime(kCtsBytes, rate);
    const SimTime ackTime = Airtime(kAckBytes, rate);
    const SimTime dataTime = Airtime(frame.OnAirBytes(), rate);
    const SimTime ctsTimeout = params.sifs + ctsTime + params.slotTime;
    const SimTime ackTimeout = params.sifs + ackTime + params.slotTime;

    const double pRts = errors.FrameLossProb(kRtsBytes * 8);
    const double pCts = errors.FrameLossProb(kCtsBytes * 8);
    const double pAck = errors.FrameLossProb(kAckBytes * 8);
    const double pData = errors.FrameLossProb(frame.OnAirBits());

    bool acked = false;
    for (std::uint32_t attempt = 0; attempt < maxAttempts && !acked; ++attempt)
    {
        ++result.attempts;
        if (attempt > 0)
        {
            frame.SetRetry(true);
        }
        const std::uint32_t cw = params.ContentionWindow(attempt);
        clock.Wait(params.difs + params.slotTime * static_cast<std::int64_t>(
                                                       backoffRng.UniformInt(cw + 1)));
        const bool outage = errors.DrawOutage(noiseRng);

        if (useRts)
        {
            const bool rtsLost = outage || noiseRng.Bernoulli(pRts);
            clock.OnAir(FrameKind::Rts, rtsTime, rtsLost);
            if (rtsLost)
            {
                clock.Wait(ctsTimeout);
                continue;
            }
            clock.Wait(params.sifs);
            const bool ctsLost = noiseRng.Bernoulli(pCts);
            clock.OnAir(FrameKind::Cts, ctsTime, ctsLost);
            if (ctsLost)
            {
                clock.Wait(params.slotTime);
                continue;
            }
            clock.Wait(params.sifs);
        }

        bool dataLost = outage;
        bool received = false;
        if (!outage)
        {
            dataLost = noiseRng.Bernoulli(pData);
            if (dataLost)
            {
                std::vector<std::uint8_t> bytes = frame.Serialize();
                CorruptBits(bytes, noiseRng);
                if (receiver.CheckCorrupted(bytes))
                {
                    ++result.undetected;
                    received = true;
                }
                else
                {
                    ++result.crcFailures;
                }
            }
            else
            {
                received = true;
            }
        }
        clock.OnAir(FrameKind::Data, dataTime, dataLost);
        if (received && receiver.AcceptData(frame) && !result.acceptedAt)
        {
            result.acceptedAt = clock.Now();
        }

        if (!options.expectAck)
        {
            acked = received;
            break;
        }
        if (!received || dataLost)
        {
            clock.Wait(ackTimeout);
            continue;
        }
        clock.Wait(params.sifs);
        const bool ackLost = noiseRng.Bernoulli(pAck);
        clock.OnAir(FrameKind::Ack, ackTime, ackLost);
        if (ackLost)
        {
            clock.Wait(params.slotTime);
            continue;
        }
        acked = true;
    }

    result.duration = clock.Now();
    if (acked)
    {
        result.outcome = TxOutcome::Delivered;
    }
    else
    {
        result.outcome = TxOutcome::Dropped;
        result.reason = errors.LinkUp() ? DropReason::RetryLimit : DropReason::LinkDown;
    }
    return result;
}

SimTime
NominalExchangeTime(std::size_t payloadBytes, double rate, const MacParams& params,
                    std::uint32_t backoffSlots, bool expectAck)
{
    SimTime t = params.difs + params.slotTime * static_cast<std::int64_t>(backoffSlots);
    t += Airtime(payloadBytes + kDataOverheadBytes, rate);
    if (!expectAck)
    {
        return t;
    }
    if (payloadBytes >= params.rtsThreshold)
    {
        t += Airtime(kRtsBytes, rate) + params.sifs + Airtime(kCtsBytes, rate) + params.sifs;
    }
    t += params.sifs + Airtime(kAckBytes, rate);
    return t;
}

} // namespace owc::mac
