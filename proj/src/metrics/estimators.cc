#include "owc/metrics/estimators.h"

#include <cmath>
#include <string>

namespace owc::metrics
{

double
CompensatedSum(std::span<const double> values)
{
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values)
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
        {
            carry += (sum - t) + v;
        }
        else
        {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

EstimateWithCi
MeanWithCi(std::span<const double> values, double z)
{
    if (values.size() < 2)
    {
        throw MetricsError("confidence interval needs at least 2 slots, got " +
                           std::to_string(values.size()));
    }
    const double n = static_cast<double>(values.size());
    const double mean = CompensatedSum(values) / n;
    std::vector<double> squares;
    squares.reserve(values.size());
    for (double v : values)
    {
        const double d = v - mean;
        squares.push_back(d * d);
    }
    const double s = std::sqrt(CompensatedSum(squares) / (n - 1.0));
    const double margin = z * s / std::sqrt(n);

    EstimateWithCi e;
    e.mean = mean;
    e.lower = mean - margin;
    e.upper = mean + margin;
    e.nSlots = values.size();
    e.stdDev = s;
    e.z = z;
    return e;
}

double
PerSlot(const SlotStats& stats)
{
    if (stats.framesAttempted == 0)
    {
        throw MetricsError("slot " + std::to_string(stats.index) + " attempted no frames");
    }
    if (stats.framesReceived > stats.framesAttempted)
    {
        throw MetricsError("slot " + std::to_string(stats.index) +
                           " received more frames than attempted");
    }
    return static_cast<double>(stats.framesAttempted - stats.framesReceived) /
           static_cast<double>(stats.framesAttempted);
}

EstimateWithCi
AggregatePer(std::span<const SlotStats> slots, double z)
{
    std::vector<double> values;
    values.reserve(slots.size());
    std::size_t excluded = 0;
    for (const SlotStats& s : slots)
    {
        if (s.framesAttempted == 0)
        {
            ++excluded;
            continue;
        }
        values.push_back(PerSlot(s));
    }
    EstimateWithCi e = MeanWithCi(values, z);
    e.excludedSlots = excluded;
    return e;
}

double
ThroughputSlot(const SlotStats& stats)
{
    if (!(stats.duration > 0.0))
    {
        throw MetricsError("slot " + std::to_string(stats.index) + " has non-positive duration");
    }
    return 8.0 * static_cast<double>(stats.bytesDelivered) / stats.duration;
}

EstimateWithCi
AggregateThroughput(std::span<const SlotStats> slots, double z)
{
    std::vector<double> values;
    values.reserve(slots.size());
    for (const SlotStats& s : slots)
    {
        values.push_back(ThroughputSlot(s));
    }
    return MeanWithCi(values, z);
}

RttSlot
RttForSlot(const SlotStats& stats, double threshold)
{
    if (stats.rtts.empty())
    {
        throw MetricsError("slot " + std::to_string(stats.index) + " has no echoes");
    }
    RttSlot r;
    r.echoes = stats.rtts.size();
    std::vector<double> completed;
    completed.reserve(stats.rtts.size());
    for (double t : stats.rtts)
    {
        if (t > threshold)
        {
            ++r.peaks;
        }
        if (std::isfinite(t))
        {
            completed.push_back(t);
        }
    }
    r.mean = completed.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : CompensatedSum(completed) / static_cast<double>(completed.size());
    return r;
}

RttAggregate
AggregateRtt(std::span<const SlotStats> slots, double z, double threshold)
{
    RttAggregate agg;
    std::vector<double> means;
    means.reserve(slots.size());
    std::size_t excluded = 0;
    for (const SlotStats& s : slots)
    {
        const RttSlot r = RttForSlot(s, threshold);
        agg.totalPeaks += r.peaks;
        agg.totalEchoes += r.echoes;
        if (std::isnan(r.mean))
        {
            ++excluded;
            continue;
        }
        means.push_back(r.mean);
    }
    agg.rtt = MeanWithCi(means, z);
    agg.rtt.excludedSlots = excluded;
    agg.peaksFraction =
        static_cast<double>(agg.totalPeaks) / static_cast<double>(agg.totalEchoes);
    return agg;
}

} // namespace owc::metrics
