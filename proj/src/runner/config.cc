#include "owc/runner/config.h"

#include "owc/traffic/packet.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace owc::runner
{

namespace
{

std::string
JoinIssues(const std::vector<ConfigIssue>& issues)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < issues.size(); ++i)
    {
        if (i)
        {
            out << '\n';
        }
        if (issues[i].line)
        {
            out << "line " << issues[i].line << ": ";
        }
        out << issues[i].field << ": " << issues[i].reason;
    }
    return out.str();
}

std::string
Trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double
ParseDouble(const std::string& s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
    {
        throw std::invalid_argument("expected a finite number, got '" + s + "'");
    }
    return v;
}

std::uint64_t
ParseUint(const std::string& s)
{
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end)
    {
        throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
    }
    return v;
}

bool
ParseBool(const std::string& s)
{
    if (s == "true" || s == "yes" || s == "1")
    {
        return true;
    }
    if (s == "false" || s == "no" || s == "0")
    {
        return false;
    }
    throw std::invalid_argument("expected true or false, got '" + s + "'");
}

using Getter = std::function<std::string(const ScenarioConfig&)>;
using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

struct Key
{
    std::string name;
    Getter get;
    Setter set;
    bool parameter;
};

template <typename Access>
Key
Number(const char* name, Access access, double unit, bool parameter)
{
    return {name,
            [access, unit](const ScenarioConfig& c) {
                return FormatNumber(access(const_cast<ScenarioConfig&>(c)) / unit);
            },
            [access, unit](ScenarioConfig& c, const std::string& v) {
                access(c) = ParseDouble(v) * unit;
            },
            parameter};
}

template <typename Access>
Key
Count(const char* name, Access access, bool parameter)
{
    return {name,
            [access](const ScenarioConfig& c) {
                return std::to_string(access(const_cast<ScenarioConfig&>(c)));
            },
            [access](ScenarioConfig& c, const std::string& v) {
                using T = std::remove_reference_t<decltype(access(c))>;
                const std::uint64_t n = ParseUint(v);
                if (n > std::numeric_limits<T>::max())
                {
                    throw std::invalid_argument("value out of range");
                }
                access(c) = static_cast<T>(n);
            },
            parameter};
}

/// Times are stored in nanoseconds; \p unitNs is the size of one config unit.
template <typename Access>
Key
Time(const char* name, Access access, double unitNs, bool parameter)
{
    return {name,
            [access, unitNs](const ScenarioConfig& c) {
                return FormatNumber(
                    static_cast<double>(access(const_cast<ScenarioConfig&>(c)).Ticks()) / unitNs);
            },
            [access, unitNs](ScenarioConfig& c, const std::string& v) {
                const double ns = ParseDouble(v) * unitNs;
                if (std::abs(ns) > 9e18)
                {
                    throw std::invalid_argument("time out of range");
                }
                access(c) = sim::NanoSeconds(std::llround(ns));
            },
            parameter};
}

template <typename Access>
Key
Flag(const char* name, Access access)
{
    return {name,
            [access](const ScenarioConfig& c) {
                return std::string(access(const_cast<ScenarioConfig&>(c)) ? "true" : "false");
            },
            [access](ScenarioConfig& c, const std::string& v) { access(c) = ParseBool(v); },
            false};
}

template <typename Access>
Key
OptionalNumber(const char* name, Access access)
{
    return {name,
            [access](const ScenarioConfig& c) {
                const auto& o = access(const_cast<ScenarioConfig&>(c));
                return o ? FormatNumber(*o) : std::string("default");
            },
            [access](ScenarioConfig& c, const std::string& v) {
                if (v == "default")
                {
                    access(c).reset();
                }
                else
                {
                    access(c) = ParseDouble(v);
                }
            },
            false};
}

std::string
RateTableText(const std::vector<mac::RateEntry>& table)
{
    std::string out;
    for (const auto& e : table)
    {
        if (!out.empty())
        {
            out += ", ";
        }
        out += FormatNumber(10.0 * std::log10(e.snrThreshold)) + ":" +
               FormatNumber(e.phyRate / 1e6);
    }
    return out;
}

/// "dB:Mbps, dB:Mbps, ..." in increasing order.
std::vector<mac::RateEntry>
ParseRateTable(const std::string& text)
{
    std::vector<mac::RateEntry> table;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        item = Trim(item);
        const auto colon = item.find(':');
        if (colon == std::string::npos)
        {
            throw std::invalid_argument("rate entries are threshold_db:rate_mbps");
        }
        const double db = ParseDouble(Trim(item.substr(0, colon)));
        const double mbps = ParseDouble(Trim(item.substr(colon + 1)));
        table.push_back({std::pow(10.0, db / 10.0), mbps * 1e6});
    }
    if (table.empty())
    {
        throw std::invalid_argument("rate table is empty");
    }
    return table;
}

const std::vector<Key>&
Keys()
{
    constexpr double kDegree = std::numbers::pi / 180.0;
    constexpr double kUs = 1e3;
    constexpr double kMs = 1e6;
    constexpr double kS = 1e9;
    static const std::vector<Key> keys = {
        {"name", [](const ScenarioConfig& c) { return c.name; },
         [](ScenarioConfig& c, const std::string& v) { c.name = v; }, false},
        {"description", [](const ScenarioConfig& c) { return c.description; },
         [](ScenarioConfig& c, const std::string& v) { c.description = v; }, false},
        Count("replications", [](ScenarioConfig& c) -> std::size_t& { return c.replications; },
              false),
        Count("seed", [](ScenarioConfig& c) -> std::uint64_t& { return c.seed; }, false),

        {"geometry.type",
         [](const ScenarioConfig& c) {
             return std::string(c.geometry.kind == GeometryKind::Los ? "los" : "nlos");
         },
         [](ScenarioConfig& c, const std::string& v) {
             if (v == "los")
             {
                 c.geometry.kind = GeometryKind::Los;
             }
             else if (v == "nlos")
             {
                 c.geometry.kind = GeometryKind::Nlos;
             }
             else
             {
                 throw std::invalid_argument("expected los or nlos, got '" + v + "'");
             }
         },
         false},
        {"geometry.sweep",
         [](const ScenarioConfig& c) { return std::string(ToString(c.geometry.axis)); },
         [](ScenarioConfig& c, const std::string& v) {
             if (v == "height")
             {
                 c.geometry.axis = SweepAxis::Height;
             }
             else if (v == "offset")
             {
                 c.geometry.axis = SweepAxis::Offset;
             }
             else if (v == "gap")
             {
                 c.geometry.axis = SweepAxis::Gap;
             }
             else
             {
                 throw std::invalid_argument("expected height, offset or gap, got '" + v + "'");
             }
         },
         false},
        Number("geometry.lamp_height",
               [](ScenarioConfig& c) -> double& { return c.geometry.lampHeight; }, 1.0, false),
        Number("geometry.offset", [](ScenarioConfig& c) -> double& { return c.geometry.offset; },
               1.0, false),
        Number("geometry.gap", [](ScenarioConfig& c) -> double& { return c.geometry.gap; }, 1.0,
               false),
        Number("geometry.sweep_start",
               [](ScenarioConfig& c) -> double& { return c.geometry.sweep.start; }, 1.0, false),
        Number("geometry.sweep_stop",
               [](ScenarioConfig& c) -> double& { return c.geometry.sweep.stop; }, 1.0, false),
        Number("geometry.sweep_step",
               [](ScenarioConfig& c) -> double& { return c.geometry.sweep.step; }, 1.0, false),
        {"geometry.obstacle",
         [](const ScenarioConfig& c) {
             return std::string(c.geometry.plexiglass ? "plexiglass" : "none");
         },
         [](ScenarioConfig& c, const std::string& v) {
             if (v != "none" && v != "plexiglass")
             {
                 throw std::invalid_argument("expected none or plexiglass, got '" + v + "'");
             }
             c.geometry.plexiglass = v == "plexiglass";
         },
         false},
        OptionalNumber("geometry.transmittance",
                       [](ScenarioConfig& c) -> std::optional<double>& {
                           return c.geometry.transmittance;
                       }),
        OptionalNumber("geometry.reflectivity",
                       [](ScenarioConfig& c) -> std::optional<double>& {
                           return c.geometry.reflectivity;
                       }),

        Number("channel.power_w",
               [](ScenarioConfig& c) -> double& { return c.channel.emitter.power; }, 1.0, true),
        Number("channel.half_power_angle_deg",
               [](ScenarioConfig& c) -> double& { return c.channel.emitter.halfPowerAngle; },
               kDegree, true),
        Number("channel.fov_deg",
               [](ScenarioConfig& c) -> double& { return c.channel.receiver.fieldOfView; },
               kDegree, true),
        Number("channel.area_m2",
               [](ScenarioConfig& c) -> double& { return c.channel.receiver.area; }, 1.0, true),
        Number("channel.responsivity",
               [](ScenarioConfig& c) -> double& { return c.channel.receiver.responsivity; }, 1.0,
               true),
        Number("channel.concentrator_gain",
               [](ScenarioConfig& c) -> double& { return c.channel.receiver.concentratorGain; },
               1.0, true),
        Number("channel.filter_gain",
               [](ScenarioConfig& c) -> double& { return c.channel.receiver.filterGain; }, 1.0,
               true),
        Number("channel.noise_density",
               [](ScenarioConfig& c) -> double& { return c.channel.receiver.noiseDensity; }, 1.0,
               true),
        Number("channel.bandwidth_hz",
               [](ScenarioConfig& c) -> double& { return c.channel.receiver.bandwidth; }, 1.0,
               true),
        Number("channel.sensitivity_floor_w",
               [](ScenarioConfig& c) -> double& { return c.channel.receiver.sensitivityFloor; },
               1.0, true),
        Number("channel.reflectivity",
               [](ScenarioConfig& c) -> double& { return c.channel.reflectivity; }, 1.0, true),
        Number("channel.plexiglass_transmittance",
               [](ScenarioConfig& c) -> double& { return c.channel.plexiglassTransmittance; },
               1.0, true),
        Number("channel.patch_area_m2",
               [](ScenarioConfig& c) -> double& { return c.channel.patchArea; }, 1.0, true),
        Number("channel.blockage",
               [](ScenarioConfig& c) -> double& { return c.channel.fading.blockageAtFloor; }, 1.0,
               true),
        Number("channel.blockage_decay_db",
               [](ScenarioConfig& c) -> double& { return c.channel.fading.blockageDecayDb; }, 1.0,
               true),
        Number("channel.pointing_jitter_deg",
               [](ScenarioConfig& c) -> double& { return c.channel.fading.pointingJitter; },
               kDegree, true),

        Time("mac.slot_time_us", [](ScenarioConfig& c) -> sim::SimTime& { return c.mac.slotTime; },
             kUs, true),
        Time("mac.sifs_us", [](ScenarioConfig& c) -> sim::SimTime& { return c.mac.sifs; }, kUs,
             true),
        Time("mac.difs_us", [](ScenarioConfig& c) -> sim::SimTime& { return c.mac.difs; }, kUs,
             true),
        Count("mac.cw_min", [](ScenarioConfig& c) -> std::uint32_t& { return c.mac.cwMin; }, true),
        Count("mac.cw_max", [](ScenarioConfig& c) -> std::uint32_t& { return c.mac.cwMax; }, true),
        Count("mac.retry_limit",
              [](ScenarioConfig& c) -> std::uint32_t& { return c.mac.retryLimit; }, true),
        Count("mac.rts_threshold",
              [](ScenarioConfig& c) -> std::size_t& { return c.mac.rtsThreshold; }, true),
        {"mac.rate_table",
         [](const ScenarioConfig& c) { return RateTableText(c.mac.rateTable); },
         [](ScenarioConfig& c, const std::string& v) { c.mac.rateTable = ParseRateTable(v); },
         true},
        Number("mac.rate_scale", [](ScenarioConfig& c) -> double& { return c.rateScale; }, 1.0,
               true),

        Flag("flows.datagram", [](ScenarioConfig& c) -> bool& { return c.flows.datagram; }),
        Flag("flows.stream", [](ScenarioConfig& c) -> bool& { return c.flows.stream; }),
        Flag("flows.echo", [](ScenarioConfig& c) -> bool& { return c.flows.echo; }),
        Flag("flows.robot", [](ScenarioConfig& c) -> bool& { return c.flows.robot; }),
        Time("flows.slot_s", [](ScenarioConfig& c) -> sim::SimTime& { return c.flows.slotDuration; },
             kS, false),
        Count("flows.slots", [](ScenarioConfig& c) -> std::size_t& { return c.flows.slots; },
              false),
        Count("flows.datagram_bytes",
              [](ScenarioConfig& c) -> std::size_t& { return c.flows.datagramParams.payloadSize; },
              false),
        Time("flows.datagram_interval_ms",
             [](ScenarioConfig& c) -> sim::SimTime& {
                 return c.flows.datagramParams.sendInterval;
             },
             kMs, false),
        Count("flows.segment_bytes",
              [](ScenarioConfig& c) -> std::size_t& { return c.flows.streamParams.segmentSize; },
              false),
        Count("flows.window_bytes",
              [](ScenarioConfig& c) -> std::size_t& { return c.flows.streamParams.window; },
              false),
        Count("flows.ack_every",
              [](ScenarioConfig& c) -> std::uint32_t& { return c.flows.streamParams.ackEvery; },
              false),
        Count("flows.echo_bytes",
              [](ScenarioConfig& c) -> std::size_t& { return c.flows.echoParams.payloadSize; },
              false),
        Time("flows.echo_period_ms",
             [](ScenarioConfig& c) -> sim::SimTime& { return c.flows.echoParams.period; }, kMs,
             false),
        Count("flows.echoes_per_slot",
              [](ScenarioConfig& c) -> std::size_t& { return c.flows.echoParams.echoesPerSlot; },
              false),

        Time("jitter.base_ms",
             [](ScenarioConfig& c) -> sim::SimTime& { return c.flows.echoParams.jitter.base; },
             kMs, true),
        Number("jitter.body_median_ms",
               [](ScenarioConfig& c) -> double& { return c.flows.echoParams.jitter.bodyMedian; },
               1e-3, true),
        Number("jitter.body_sigma",
               [](ScenarioConfig& c) -> double& { return c.flows.echoParams.jitter.bodySigma; },
               1.0, true),
        Number("jitter.tail_prob",
               [](ScenarioConfig& c) -> double& { return c.flows.echoParams.jitter.tailProb; },
               1.0, true),
        Number("jitter.tail_scale_ms",
               [](ScenarioConfig& c) -> double& { return c.flows.echoParams.jitter.tailScale; },
               1e-3, true),

        Time("wired.delay_us", [](ScenarioConfig& c) -> sim::SimTime& { return c.wired.delay; },
             kUs, false),
        Number("wired.loss", [](ScenarioConfig& c) -> double& { return c.wired.lossProb; }, 1.0,
               false),

        Time("safety.heartbeat_ms",
             [](ScenarioConfig& c) -> sim::SimTime& { return c.robot.safety.heartbeatPeriod; },
             kMs, false),
        Time("safety.hold_ms",
             [](ScenarioConfig& c) -> sim::SimTime& { return c.robot.safety.holdTimeout; }, kMs,
             false),
        Time("safety.stale_ms",
             [](ScenarioConfig& c) -> sim::SimTime& { return c.robot.safety.staleAge; }, kMs,
             false),
        {"safety.estop",
         [](const ScenarioConfig& c) { return std::string(robot::ToString(c.robot.estop.kind)); },
         [](ScenarioConfig& c, const std::string& v) {
             if (v == "hardwired")
             {
                 c.robot.estop.kind = robot::EstopKind::Hardwired;
             }
             else if (v == "optical_secondary")
             {
                 c.robot.estop.kind = robot::EstopKind::OpticalSecondary;
             }
             else
             {
                 throw std::invalid_argument("expected hardwired or optical_secondary, got '" + v +
                                             "'");
             }
         },
         false},
        Time("safety.estop_delay_us",
             [](ScenarioConfig& c) -> sim::SimTime& { return c.robot.estop.deliveryDelay; }, kUs,
             false),
        Number("safety.estop_failure",
               [](ScenarioConfig& c) -> double& { return c.robot.estop.failureProbability; }, 1.0,
               false),

        Number("metrics.z", [](ScenarioConfig& c) -> double& { return c.z; }, 1.0, false),
    };
    return keys;
}

const Key*
FindKey(const std::string& name)
{
    for (const Key& k : Keys())
    {
        if (k.name == name)
        {
            return &k;
        }
    }
    return nullptr;
}

void
Check(std::vector<ConfigIssue>& issues, bool ok, const char* field, const char* reason)
{
    if (!ok)
    {
        issues.push_back({0, field, reason});
    }
}

} // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(JoinIssues(issues)),
      m_issues(std::move(issues))
{
}

const char*
ToString(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::Height:
        return "height";
    case SweepAxis::Offset:
        return "offset";
    case SweepAxis::Gap:
        return "gap";
    }
    return "unknown";
}

std::string
FormatNumber(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool
Sweep::IsSet() const
{
    return !std::isnan(start) && !std::isnan(stop) && !std::isnan(step);
}

std::vector<double>
Sweep::Points() const
{
    std::vector<double> points;
    if (!IsSet() || step <= 0.0 || stop < start)
    {
        return points;
    }
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i)
    {
        points.push_back(start + static_cast<double>(i) * step);
    }
    return points;
}

double
GeometrySpec::FixedValue() const
{
    switch (axis)
    {
    case SweepAxis::Height:
        return lampHeight;
    case SweepAxis::Offset:
        return offset;
    case SweepAxis::Gap:
        return gap;
    }
    return 0.0;
}

std::vector<double>
GeometrySpec::SweepPoints() const
{
    return sweep.IsSet() ? sweep.Points() : std::vector<double>{FixedValue()};
}

channel::LinkGeometry
GeometrySpec::Build(double sweepValue, const ChannelSpec& channel) const
{
    double height = lampHeight;
    double dx = offset;
    double dv = gap;
    switch (axis)
    {
    case SweepAxis::Height:
        height = sweepValue;
        break;
    case SweepAxis::Offset:
        dx = sweepValue;
        break;
    case SweepAxis::Gap:
        dv = sweepValue;
        break;
    }

    channel::LinkGeometry g;
    g.lampPos = {0.0, 0.0, height};
    g.lampAxis = channel::kDown;
    if (kind == GeometryKind::Los)
    {
        g.donglePos = {dx, 0.0, 0.0};
        g.dongleAxis = channel::kUp;
    }
    else
    {
        g.donglePos = {dx, 0.0, dv};
        g.dongleAxis = channel::kDown;
        g.reflector = channel::Reflector{{0.0, 0.0, 0.0}, channel::kUp,
                                         reflectivity.value_or(channel.reflectivity)};
    }
    if (plexiglass)
    {
        g.obstacleTransmittance = transmittance.value_or(channel.plexiglassTransmittance);
    }
    else if (transmittance)
    {
        g.obstacleTransmittance = *transmittance;
    }
    return g;
}

mac::MacParams
ScenarioConfig::EffectiveMac() const
{
    mac::MacParams m = mac;
    m.ScaleRates(rateScale);
    return m;
}

void
ScenarioConfig::Validate() const
{
    std::vector<ConfigIssue> issues;
    const auto& e = channel.emitter;
    const auto& r = channel.receiver;
    const double right = std::numbers::pi / 2.0;

    Check(issues, !name.empty(), "name", "must not be empty");
    Check(issues, replications >= 1, "replications", "must be at least 1");
    Check(issues, z > 0.0, "metrics.z", "must be positive");

    Check(issues, e.power > 0.0, "channel.power_w", "must be positive");
    Check(issues, e.halfPowerAngle > 0.0 && e.halfPowerAngle < right,
          "channel.half_power_angle_deg", "must lie in (0, 90)");
    Check(issues, r.fieldOfView > 0.0 && r.fieldOfView <= right, "channel.fov_deg",
          "must lie in (0, 90]");
    Check(issues, r.area > 0.0, "channel.area_m2", "must be positive");
    Check(issues, r.responsivity > 0.0, "channel.responsivity", "must be positive");
    Check(issues, r.concentratorGain > 0.0, "channel.concentrator_gain", "must be positive");
    Check(issues, r.filterGain > 0.0, "channel.filter_gain", "must be positive");
    Check(issues, r.noiseDensity > 0.0, "channel.noise_density", "must be positive");
    Check(issues, r.bandwidth > 0.0, "channel.bandwidth_hz", "must be positive");
    Check(issues, r.sensitivityFloor > 0.0, "channel.sensitivity_floor_w", "must be positive");
    Check(issues, channel.reflectivity >= 0.0 && channel.reflectivity <= 1.0,
          "channel.reflectivity", "must lie in [0, 1]");
    Check(issues, channel.plexiglassTransmittance > 0.0 && channel.plexiglassTransmittance <= 1.0,
          "channel.plexiglass_transmittance", "must lie in (0, 1]");
    Check(issues, channel.patchArea > 0.0, "channel.patch_area_m2", "must be positive");
    Check(issues, channel.fading.blockageAtFloor >= 0.0 && channel.fading.blockageAtFloor <= 1.0,
          "channel.blockage", "must lie in [0, 1]");
    Check(issues, channel.fading.blockageDecayDb > 0.0, "channel.blockage_decay_db",
          "must be positive");
    Check(issues, channel.fading.pointingJitter >= 0.0 && channel.fading.pointingJitter < right,
          "channel.pointing_jitter_deg", "must lie in [0, 90)");

    try
    {
        mac.Validate();
    }
    catch (const mac::MacConfigError& err)
    {
        issues.push_back({0, "mac", err.what()});
    }
    Check(issues, rateScale > 0.0, "mac.rate_scale", "must be positive");

    const auto& g = geometry;
    Check(issues, g.lampHeight > 0.0, "geometry.lamp_height", "must be positive");
    Check(issues, g.offset >= 0.0, "geometry.offset", "must not be negative");
    Check(issues, g.gap > 0.0, "geometry.gap", "must be positive");
    const bool anySweep =
        !std::isnan(g.sweep.start) || !std::isnan(g.sweep.stop) || !std::isnan(g.sweep.step);
    Check(issues, !anySweep || g.sweep.IsSet(), "geometry.sweep_start",
          "sweep_start, sweep_stop and sweep_step go together");
    if (g.sweep.IsSet())
    {
        Check(issues, g.sweep.step > 0.0, "geometry.sweep_step", "must be positive");
        Check(issues, g.sweep.stop >= g.sweep.start, "geometry.sweep_stop",
              "must not be below sweep_start");
        Check(issues, g.sweep.step <= 0.0 || (g.sweep.stop - g.sweep.start) / g.sweep.step < 1e4,
              "geometry.sweep_step", "more than 10000 sweep points");
    }
    for (double v : g.SweepPoints())
    {
        if (g.axis == SweepAxis::Offset)
        {
            Check(issues, v >= 0.0, "geometry.sweep_start", "offsets must not be negative");
        }
        else
        {
            Check(issues, v > 0.0, "geometry.sweep_start", "heights and gaps must be positive");
        }
        if (g.kind == GeometryKind::Nlos)
        {
            const double h = g.axis == SweepAxis::Height ? v : g.lampHeight;
            const double dv = g.axis == SweepAxis::Gap ? v : g.gap;
            Check(issues, dv < h, "geometry.gap", "dongle must sit below the lamp");
        }
    }
    if (g.transmittance)
    {
        Check(issues, *g.transmittance > 0.0 && *g.transmittance <= 1.0,
              "geometry.transmittance", "must lie in (0, 1]");
    }
    if (g.reflectivity)
    {
        Check(issues, *g.reflectivity >= 0.0 && *g.reflectivity <= 1.0, "geometry.reflectivity",
              "must lie in [0, 1]");
    }

    const auto& f = flows;
    Check(issues, f.datagram || f.stream || f.echo || f.robot, "flows",
          "at least one flow must be enabled");
    Check(issues, f.slotDuration.Ticks() > 0, "flows.slot_s", "must be positive");
    Check(issues, f.slots >= 2, "flows.slots", "confidence intervals need at least 2 slots");
    Check(issues,
          f.datagramParams.payloadSize >= traffic::AppHeader::kBytes &&
              f.datagramParams.payloadSize <= 2304,
          "flows.datagram_bytes", "must lie in [16, 2304]");
    Check(issues, f.datagramParams.sendInterval.Ticks() > 0, "flows.datagram_interval_ms",
          "must be positive");
    Check(issues,
          f.streamParams.segmentSize >= traffic::AppHeader::kBytes &&
              f.streamParams.segmentSize <= 2304,
          "flows.segment_bytes", "must lie in [16, 2304]");
    Check(issues, f.streamParams.window >= f.streamParams.segmentSize, "flows.window_bytes",
          "must hold at least one segment");
    Check(issues, f.streamParams.ackEvery >= 1, "flows.ack_every", "must be at least 1");
    Check(issues,
          f.echoParams.payloadSize >= traffic::AppHeader::kBytes &&
              f.echoParams.payloadSize <= 2304,
          "flows.echo_bytes", "must lie in [16, 2304]");
    Check(issues, f.echoParams.period.Ticks() > 0, "flows.echo_period_ms", "must be positive");
    Check(issues, f.echoParams.echoesPerSlot >= 1, "flows.echoes_per_slot", "must be at least 1");
    try
    {
        f.echoParams.jitter.Validate();
    }
    catch (const std::invalid_argument& err)
    {
        issues.push_back({0, "jitter", err.what()});
    }

    Check(issues, wired.delay.Ticks() >= 0, "wired.delay_us", "must not be negative");
    Check(issues, wired.lossProb >= 0.0 && wired.lossProb < 1.0, "wired.loss", "must lie in [0, 1)");
    try
    {
        robot.safety.Validate();
    }
    catch (const std::invalid_argument& err)
    {
        issues.push_back({0, "safety", err.what()});
    }
    try
    {
        robot.estop.Validate();
    }
    catch (const std::invalid_argument& err)
    {
        issues.push_back({0, "safety.estop", err.what()});
    }

    if (!issues.empty())
    {
        throw ConfigError(std::move(issues));
    }
}

void
ApplyConfigText(ScenarioConfig& config, const std::string& text)
{
    std::vector<ConfigIssue> issues;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineNo = 0;
    while (std::getline(in, raw))
    {
        ++lineNo;
        const auto hash = raw.find('#');
        const std::string line = Trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            issues.push_back({lineNo, line, "expected key = value"});
            continue;
        }
        const std::string key = Trim(line.substr(0, eq));
        const std::string value = Trim(line.substr(eq + 1));
        const Key* k = FindKey(key);
        if (!k)
        {
            issues.push_back({lineNo, key, "unknown key"});
            continue;
        }
        if (!seen.insert(key).second)
        {
            issues.push_back({lineNo, key, "duplicate key"});
            continue;
        }
        try
        {
            k->set(config, value);
        }
        catch (const std::invalid_argument& err)
        {
            issues.push_back({lineNo, key, err.what()});
        }
    }
    if (!issues.empty())
    {
        throw ConfigError(std::move(issues));
    }
}

ScenarioConfig
ParseConfig(const std::string& text, const std::string& params)
{
    ScenarioConfig config;
    ApplyConfigText(config, params);
    ApplyConfigText(config, text);
    config.Validate();
    return config;
}

std::vector<std::string>
ParameterKeys()
{
    std::vector<std::string> names;
    for (const Key& k : Keys())
    {
        if (k.parameter)
        {
            names.push_back(k.name);
        }
    }
    return names;
}

std::string
SerializeParameters(const ScenarioConfig& config)
{
    std::string out;
    for (const Key& k : Keys())
    {
        if (k.parameter)
        {
            out += k.name + " = " + k.get(config) + "\n";
        }
    }
    return out;
}

std::string
GetValue(const ScenarioConfig& config, const std::string& key)
{
    const Key* k = FindKey(key);
    if (!k)
    {
        throw ConfigError({{0, key, "unknown key"}});
    }
    return k->get(config);
}

void
SetValue(ScenarioConfig& config, const std::string& key, const std::string& value)
{
    const Key* k = FindKey(key);
    if (!k)
    {
        throw ConfigError({{0, key, "unknown key"}});
    }
    try
    {
        k->set(config, value);
    }
    catch (const std::invalid_argument& err)
    {
        throw ConfigError({{0, key, err.what()}});
    }
}

} // namespace owc::runner
