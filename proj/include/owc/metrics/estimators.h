#ifndef OWC_METRICS_ESTIMATORS_H
#define OWC_METRICS_ESTIMATORS_H

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace owc::metrics
{

/// Default two-sided 95% normal quantile.
constexpr double kZ95 = 1.96;

/// Peak threshold on a single round trip, seconds. Strictly greater counts.
constexpr double kPeakThreshold = 0.030;

/// Marker stored in SlotStats::rtts for an echo that never completed.
constexpr double kLostEcho = std::numeric_limits<double>::infinity();

class MetricsError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Per-slot counters collected by the traffic flows.
struct SlotStats
{
    std::size_t index{0};
    std::uint64_t framesAttempted{0}; ///< datagrams sent by the console
    std::uint64_t framesReceived{0};  ///< datagrams seen at the router
    std::uint64_t bytesDelivered{0};
    double duration{0.0};     ///< seconds
    std::vector<double> rtts; ///< seconds; kLostEcho for lost echoes

    std::size_t EchoCount() const
    {
        return rtts.size();
    }
};

struct EstimateWithCi
{
    double mean{0.0};
    double lower{0.0};
    double upper{0.0};
    std::size_t nSlots{0};
    double stdDev{0.0};
    double z{kZ95};
    std::size_t excludedSlots{0}; ///< degenerate slots left out of the estimate

    double Margin() const
    {
        return upper - mean;
    }
};

struct RttSlot
{
    double mean{0.0};        ///< over completed echoes; NaN if none completed
    std::uint64_t peaks{0};  ///< echoes above the threshold, lost ones included
    std::uint64_t echoes{0}; ///< N_i
};

struct RttAggregate
{
    EstimateWithCi rtt;
    double peaksFraction{0.0};
    std::uint64_t totalPeaks{0};
    std::uint64_t totalEchoes{0};
};

/**
 * Neumaier-compensated sum, evaluated left to right. Used by every estimator
 * so that results do not depend on platform or input length.
 */
double CompensatedSum(std::span<const double> values);

/// Mean, sample standard deviation (n - 1) and normal confidence bounds.
EstimateWithCi MeanWithCi(std::span<const double> values, double z);

/// (F^A - F^R) / F^A. \throws MetricsError when nothing was attempted.
double PerSlot(const SlotStats& stats);

/// Averages per-slot PER over non-degenerate slots. Needs two of them.
EstimateWithCi AggregatePer(std::span<const SlotStats> slots, double z = kZ95);

/// 8 * B_i / T_i in bit/s. \throws MetricsError when the duration is not positive.
double ThroughputSlot(const SlotStats& stats);

EstimateWithCi AggregateThroughput(std::span<const SlotStats> slots, double z = kZ95);

RttSlot RttForSlot(const SlotStats& stats, double threshold = kPeakThreshold);

/**
 * Mean and interval over per-slot RTT means, peaks as a ratio of totals.
 * Slots whose echoes were all lost contribute peaks only.
 */
RttAggregate AggregateRtt(std::span<const SlotStats> slots, double z = kZ95,
                          double threshold = kPeakThreshold);

} // namespace owc::metrics

#endif // OWC_METRICS_ESTIMATORS_H
