#ifndef OWC_MAC_MAC_PARAMS_H
#define OWC_MAC_MAC_PARAMS_H

#include "owc/sim/sim-time.h"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace owc::mac
{

class MacConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

struct RateEntry
{
    double snrThreshold; ///< linear electrical SNR
    double phyRate;      ///< bit/s
};

/// Eight rates from 1 to 16 Mb/s with thresholds spaced in SNR.
std::vector<RateEntry> DefaultRateTable();

struct MacParams
{
    sim::SimTime slotTime{sim::MicroSeconds(9)};
    sim::SimTime sifs{sim::MicroSeconds(16)};
    sim::SimTime difs{sim::MicroSeconds(34)};
    std::uint32_t cwMin{15};
    std::uint32_t cwMax{1023};
    std::uint32_t retryLimit{7};
    std::size_t rtsThreshold{256}; ///< payload bytes at or above which RTS/CTS precedes DATA
    std::vector<RateEntry> rateTable{DefaultRateTable()};

    /// \throws MacConfigError naming the violated invariant.
    void Validate() const;

    /// Contention window for the given zero-based attempt.
    std::uint32_t ContentionWindow(std::uint32_t attempt) const;

    /// Multiplies every phy rate by \p factor.
    void ScaleRates(double factor);
};

/// Highest rate whose threshold is <= snr; the lowest rate when none is.
double SelectRate(double snr, const MacParams& params);

/// Transmission time of \p bytes at \p rate, rounded up to whole nanoseconds.
sim::SimTime Airtime(std::size_t bytes, double rate);

} // namespace owc::mac

#endif // OWC_MAC_MAC_PARAMS_H
