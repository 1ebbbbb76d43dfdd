#include "owc/channel/optical-channel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace owc::channel
{

namespace
{

constexpr double kUnitTolerance = 1e-9;

void
RequireUnit(const Vec3& v, const char* what)
{
    if (std::abs(Norm(v) - 1.0) > kUnitTolerance)
    {
        throw GeometryError(std::string(what) + " must be a unit vector");
    }
}

double
IncidenceAngle(const Vec3& from, const Vec3& to, const Vec3& toAxis)
{
    const Vec3 path = to - from;
    const double c = -Dot(path, toAxis) / Norm(path);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/**
 * Gain of one Lambertian leg: source of order \p order at \p from with axis
 * \p fromAxis into an aperture of area \p area at \p to with axis \p toAxis.
 * Returns 0 when either side faces away or the incidence exceeds \p fov.
 */
double
LegGain(const Vec3& from, const Vec3& fromAxis, double order, const Vec3& to, const Vec3& toAxis,
        double area, double fov)
{
    const Vec3 path = to - from;
    const double d2 = Dot(path, path);
    if (d2 <= 0.0)
    {
        return 0.0;
    }
    const double d = std::sqrt(d2);
    const double cosEmit = Dot(path, fromAxis) / d;
    const double cosIncidence = -Dot(path, toAxis) / d;
    if (cosEmit <= 0.0 || cosIncidence <= 0.0)
    {
        return 0.0;
    }
    if (cosIncidence < std::cos(fov))
    {
        return 0.0;
    }
    return (order + 1.0) * area / (2.0 * std::numbers::pi * d2) * std::pow(cosEmit, order) *
           cosIncidence;
}

} // namespace

void
LinkGeometry::Validate() const
{
    if (lampPos == donglePos)
    {
        throw GeometryError("lamp and dongle positions coincide");
    }
    RequireUnit(lampAxis, "lamp_axis");
    RequireUnit(dongleAxis, "dongle_axis");
    if (reflector)
    {
        RequireUnit(reflector->normal, "reflector normal");
        if (!(reflector->reflectivity >= 0.0 && reflector->reflectivity <= 1.0))
        {
            throw GeometryError("reflectivity must lie in [0, 1]");
        }
    }
    if (!(obstacleTransmittance > 0.0 && obstacleTransmittance <= 1.0))
    {
        throw GeometryError("obstacle transmittance must lie in (0, 1]");
    }
}

double
LambertianOrder(double halfPowerAngle)
{
    return -std::numbers::ln2 / std::log(std::cos(halfPowerAngle));
}

double
EmitterParams::LambertianOrder() const
{
    return channel::LambertianOrder(halfPowerAngle);
}

void
EmitterParams::Validate() const
{
    if (!(power > 0.0))
    {
        throw GeometryError("emitter power must be positive");
    }
    if (!(halfPowerAngle > 0.0 && halfPowerAngle < std::numbers::pi / 2))
    {
        throw GeometryError("half-power angle must lie in (0, pi/2)");
    }
}

void
ReceiverParams::Validate() const
{
    if (!(area > 0.0 && responsivity > 0.0 && concentratorGain > 0.0 && filterGain > 0.0 &&
          noiseDensity > 0.0 && bandwidth > 0.0 && sensitivityFloor > 0.0))
    {
        throw GeometryError("receiver parameters must be strictly positive");
    }
    if (!(fieldOfView > 0.0 && fieldOfView <= std::numbers::pi / 2))
    {
        throw GeometryError("field of view must lie in (0, pi/2]");
    }
}

double
ChannelState::SnrDb() const
{
    return snr > 0.0 ? 10.0 * std::log10(snr) : -std::numeric_limits<double>::infinity();
}

double
LosGain(const LinkGeometry& geom, const EmitterParams& emitter, const ReceiverParams& receiver)
{
    const double g = LegGain(geom.lampPos, geom.lampAxis, emitter.LambertianOrder(),
                             geom.donglePos, geom.dongleAxis, receiver.area,
                             receiver.fieldOfView);
    return g * receiver.filterGain * receiver.concentratorGain;
}

double
NlosGain(const LinkGeometry& geom, const EmitterParams& emitter, const ReceiverParams& receiver,
         double patchArea)
{
    if (!geom.reflector)
    {
        throw GeometryError("NLoS gain requested for a geometry without reflector");
    }
    const Reflector& r = *geom.reflector;
    // The patch is a receiver with a hemispherical field of view, then an order-1 source.
    const double toPatch = LegGain(geom.lampPos, geom.lampAxis, emitter.LambertianOrder(), r.point,
                                   r.normal, patchArea, std::numbers::pi / 2);
    if (toPatch == 0.0 || r.reflectivity == 0.0)
    {
        return 0.0;
    }
    const double fromPatch = LegGain(r.point, r.normal, 1.0, geom.donglePos, geom.dongleAxis,
                                     receiver.area, receiver.fieldOfView);
    return toPatch * r.reflectivity * fromPatch * receiver.filterGain * receiver.concentratorGain;
}

double
QFunction(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double
OokBer(double snr)
{
    return QFunction(std::sqrt(std::max(snr, 0.0)));
}

double
FrameErrorProb(double ber, std::size_t frameBits)
{
    if (ber <= 0.0)
    {
        return 0.0;
    }
    if (ber >= 1.0)
    {
        return 1.0;
    }
    return -std::expm1(static_cast<double>(frameBits) * std::log1p(-ber));
}

ChannelState
ComputeChannelState(const LinkGeometry& geom, const EmitterParams& emitter,
                    const ReceiverParams& receiver, double patchArea)
{
    ChannelState s;
    const double los = LosGain(geom, emitter, receiver);
    const double nlos = geom.reflector ? NlosGain(geom, emitter, receiver, patchArea) : 0.0;
    s.dcGain = los + nlos;
    if (nlos > los)
    {
        s.incidenceAngle = IncidenceAngle(geom.reflector->point, geom.donglePos, geom.dongleAxis);
    }
    else
    {
        s.incidenceAngle = IncidenceAngle(geom.lampPos, geom.donglePos, geom.dongleAxis);
    }
    s.receivedPower = emitter.power * s.dcGain * geom.obstacleTransmittance;
    const double current = receiver.responsivity * s.receivedPower;
    s.snr = current * current / receiver.NoisePower();
    s.ber = OokBer(s.snr);
    s.linkUp = s.receivedPower >= receiver.sensitivityFloor;
    return s;
}

void
FadingParams::Validate() const
{
    if (!(blockageAtFloor >= 0.0 && blockageAtFloor <= 1.0))
    {
        throw GeometryError("blockage probability must lie in [0, 1]");
    }
    if (!(blockageDecayDb > 0.0))
    {
        throw GeometryError("blockage decay must be positive");
    }
    if (!(pointingJitter >= 0.0 && pointingJitter < std::numbers::pi / 2))
    {
        throw GeometryError("pointing jitter must lie in [0, pi/2)");
    }
}

double
MarginDb(const ChannelState& state, const ReceiverParams& receiver)
{
    if (state.receivedPower <= 0.0)
    {
        return -std::numeric_limits<double>::infinity();
    }
    return 20.0 * std::log10(state.receivedPower / receiver.sensitivityFloor);
}

double
BlockageProb(const ChannelState& state, const ReceiverParams& receiver,
             const FadingParams& fading)
{
    const double margin = std::max(0.0, MarginDb(state, receiver));
    return fading.blockageAtFloor * std::exp(-margin / fading.blockageDecayDb);
}

bool
SampleOutage(const ChannelState& state, const ReceiverParams& receiver,
             const FadingParams& fading, sim::RngStream& rng)
{
    if (!state.linkUp)
    {
        return true;
    }
    const double pBlock = BlockageProb(state, receiver, fading);
    // Both draws always happen so the stream advances by a fixed amount per exchange.
    const bool blocked = rng.Uniform() < pBlock;
    bool outOfView = false;
    if (fading.pointingJitter > 0.0)
    {
        const double tx = state.incidenceAngle + fading.pointingJitter * rng.Normal();
        const double ty = fading.pointingJitter * rng.Normal();
        outOfView = std::hypot(tx, ty) > receiver.fieldOfView;
    }
    return blocked || outOfView;
}

} // namespace owc::channel
