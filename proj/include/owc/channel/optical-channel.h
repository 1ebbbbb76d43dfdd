#ifndef OWC_CHANNEL_OPTICAL_CHANNEL_H
#define OWC_CHANNEL_OPTICAL_CHANNEL_H

#include "owc/channel/geometry.h"
#include "owc/sim/rng.h"

#include <cstddef>
#include <numbers>

namespace owc::channel
{

constexpr double
Deg(double degrees)
{
    return degrees * std::numbers::pi / 180.0;
}

/// LED lamp. Lambertian order follows from the half-power semi-angle.
struct EmitterParams
{
    double power{1.0};              ///< optical watts
    double halfPowerAngle{Deg(30)}; ///< radians

    double LambertianOrder() const;
    void Validate() const;
};

/// Photodiode front end of the USB dongle.
struct ReceiverParams
{
    double area{1e-4};           ///< m^2
    double fieldOfView{Deg(45)}; ///< semi-angle, radians
    double responsivity{0.5};    ///< A/W
    double concentratorGain{1.0};
    double filterGain{1.0};
    double noiseDensity{1e-22}; ///< A^2/Hz
    double bandwidth{2e7};      ///< Hz
    double sensitivityFloor{1e-7}; ///< W; no link below this received power

    double NoisePower() const
    {
        return noiseDensity * bandwidth;
    }

    void Validate() const;
};

struct ChannelState
{
    double dcGain{0.0};
    double receivedPower{0.0};
    double snr{0.0};
    double ber{0.5};
    bool linkUp{false};
    double incidenceAngle{0.0}; ///< radians off the dongle axis, strongest path

    double SnrDb() const;
};

/// m = -ln 2 / ln cos(half-power angle).
double LambertianOrder(double halfPowerAngle);

/**
 * Line-of-sight DC gain of a Lambertian source into a receiver of finite
 * field of view. Zero when the incidence angle exceeds the field of view or
 * either end faces away.
 */
double LosGain(const LinkGeometry& geom, const EmitterParams& emitter,
               const ReceiverParams& receiver);

/**
 * Single-bounce gain through the reflector: lamp to patch (order m), diffuse
 * re-emission from the patch (order 1) to the dongle. Scaled by the patch
 * reflectivity and area.
 *
 * \throws GeometryError if the geometry has no reflector.
 */
double NlosGain(const LinkGeometry& geom, const EmitterParams& emitter,
                const ReceiverParams& receiver, double patchArea);

constexpr double kDefaultPatchArea = 1e-2; ///< m^2

/**
 * Composes both paths (NLoS only when a reflector exists), applies obstacle
 * transmittance, and maps the electrical SNR to an on-off keying BER.
 */
ChannelState ComputeChannelState(const LinkGeometry& geom, const EmitterParams& emitter,
                                 const ReceiverParams& receiver,
                                 double patchArea = kDefaultPatchArea);

/**
 * \brief Impairments that vary from one MAC exchange to the next.
 *
 * Transient blockage (people, moving parts) whose probability decays with the
 * power margin above the sensitivity floor, and random tilt of the dongle
 * axis. One draw holds for a whole exchange.
 */
struct FadingParams
{
    double blockageAtFloor{0.0}; ///< blockage probability with zero margin
    double blockageDecayDb{10.0}; ///< dB of margin per e-fold of blockage probability
    double pointingJitter{0.0};  ///< radians, standard deviation per tilt axis

    void Validate() const;
};

/// 20 log10(P_r / floor); negative when the link is down.
double MarginDb(const ChannelState& state, const ReceiverParams& receiver);

/// blockageAtFloor * exp(-margin / blockageDecayDb), margin clamped at zero.
double BlockageProb(const ChannelState& state, const ReceiverParams& receiver,
                    const FadingParams& fading);

/**
 * Draws one exchange-long channel realization. True when the exchange is
 * blocked or the tilted dongle sees the source outside its field of view.
 */
bool SampleOutage(const ChannelState& state, const ReceiverParams& receiver,
                  const FadingParams& fading, sim::RngStream& rng);

/// Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2.
double QFunction(double x);

/// OOK bit error probability Q(sqrt(snr)).
double OokBer(double snr);

/// 1 - (1 - ber)^bits, evaluated without cancellation.
double FrameErrorProb(double ber, std::size_t frameBits);

} // namespace owc::channel

#endif // OWC_CHANNEL_OPTICAL_CHANNEL_H
