#include "owc/mac/mac-params.h"

#include <bit>
#include <cmath>

namespace owc::mac
{

namespace
{

bool
IsPowerOfTwoMinusOne(std::uint32_t v)
{
    return std::has_single_bit(v + 1);
}

} // namespace

std::vector<RateEntry>
DefaultRateTable()
{
    // Thresholds in dB of electrical SNR, converted to linear below.
    constexpr double kThresholdDb[] = {16.0, 24.0, 30.0, 36.0, 42.0, 48.0, 54.0, 60.0};
    constexpr double kRateMbps[] = {1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0};
    std::vector<RateEntry> table;
    for (std::size_t i = 0; i < std::size(kRateMbps); ++i)
    {
        table.push_back({std::pow(10.0, kThresholdDb[i] / 10.0), kRateMbps[i] * 1e6});
    }
    return table;
}

void
MacParams::Validate() const
{
    if (slotTime.Ticks() <= 0 || sifs.Ticks() <= 0 || difs.Ticks() <= 0)
    {
        throw MacConfigError("slot_time, sifs and difs must be positive");
    }
    if (!IsPowerOfTwoMinusOne(cwMin) || !IsPowerOfTwoMinusOne(cwMax))
    {
        throw MacConfigError("cw_min and cw_max must be powers of two minus one");
    }
    if (cwMin > cwMax)
    {
        throw MacConfigError("cw_min must not exceed cw_max");
    }
    if (rateTable.empty())
    {
        throw MacConfigError("rate_table must not be empty");
    }
    for (std::size_t i = 0; i < rateTable.size(); ++i)
    {
        if (!(rateTable[i].phyRate > 0.0) || !std::isfinite(rateTable[i].phyRate))
        {
            throw MacConfigError("rate_table rates must be positive");
        }
        if (i > 0 && !(rateTable[i].snrThreshold > rateTable[i - 1].snrThreshold))
        {
            throw MacConfigError("rate_table thresholds must be strictly increasing");
        }
    }
}

std::uint32_t
MacParams::ContentionWindow(std::uint32_t attempt) const
{
    std::uint64_t cw = cwMin;
    for (std::uint32_t i = 0; i < attempt && cw < cwMax; ++i)
    {
        cw = 2 * cw + 1;
    }
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(cw, cwMax));
}

void
MacParams::ScaleRates(double factor)
{
    for (RateEntry& e : rateTable)
    {
        e.phyRate *= factor;
    }
}

double
SelectRate(double snr, const MacParams& params)
{
    double rate = params.rateTable.front().phyRate;
    for (const RateEntry& e : params.rateTable)
    {
        if (e.snrThreshold <= snr)
        {
            rate = e.phyRate;
        }
    }
    return rate;
}

sim::SimTime
Airtime(std::size_t bytes, double rate)
{
    const double ns = std::ceil(static_cast<double>(bytes) * 8.0 * 1e9 / rate);
    return sim::NanoSeconds(static_cast<std::int64_t>(ns));
}

} // namespace owc::mac
