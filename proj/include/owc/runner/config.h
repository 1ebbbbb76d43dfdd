#ifndef OWC_RUNNER_CONFIG_H
#define OWC_RUNNER_CONFIG_H

#include "owc/channel/optical-channel.h"
#include "owc/mac/mac-params.h"
#include "owc/metrics/estimators.h"
#include "owc/robot/session.h"
#include "owc/traffic/flows.h"

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace owc::runner
{

/// One problem found while reading a config: 0 as line means "after parsing".
struct ConfigIssue
{
    std::size_t line;
    std::string field;
    std::string reason;
};

class ConfigError : public std::runtime_error
{
  public:
    explicit ConfigError(std::vector<ConfigIssue> issues);

    const std::vector<ConfigIssue>& Issues() const
    {
        return m_issues;
    }

  private:
    std::vector<ConfigIssue> m_issues;
};

enum class GeometryKind : std::uint8_t
{
    Los,
    Nlos,
};

/// Swept coordinate: lamp height, horizontal offset, or dongle gap to the reflector.
enum class SweepAxis : std::uint8_t
{
    Height,
    Offset,
    Gap,
};

const char* ToString(SweepAxis axis);

/// Unset fields are NaN; a sweep is either fully set or absent.
struct Sweep
{
    double start{std::numeric_limits<double>::quiet_NaN()};
    double stop{std::numeric_limits<double>::quiet_NaN()};
    double step{std::numeric_limits<double>::quiet_NaN()};

    bool IsSet() const;

    /// start, start + step, ... up to stop inclusive (within 1e-9 of a step).
    std::vector<double> Points() const;
};

/// Calibrated physical-layer parameters shared by every scenario.
struct ChannelSpec
{
    channel::EmitterParams emitter;
    channel::ReceiverParams receiver;
    channel::FadingParams fading;
    double reflectivity{0.8};            ///< in-vitro reflecting surface
    double plexiglassTransmittance{0.7};
    double patchArea{channel::kDefaultPatchArea};
};

/**
 * \brief Placement family of one experiment.
 *
 * LoS: lamp at height lamp_height above the dongle plane, dongle at the
 * horizontal offset, both facing each other. NLoS: lamp at lamp_height above
 * a reflector on the floor, dongle facing the reflector at height gap and
 * the horizontal offset.
 */
struct GeometrySpec
{
    GeometryKind kind{GeometryKind::Los};
    SweepAxis axis{SweepAxis::Offset};
    double lampHeight{2.5};
    double offset{0.0};
    double gap{0.25};
    Sweep sweep;
    bool plexiglass{false};
    std::optional<double> transmittance;
    std::optional<double> reflectivity;

    /// The swept coordinate when it is not swept.
    double FixedValue() const;

    /// Sweep points, or the single fixed value without a sweep.
    std::vector<double> SweepPoints() const;

    channel::LinkGeometry Build(double sweepValue, const ChannelSpec& channel) const;
};

struct FlowSpec
{
    bool datagram{true};
    bool stream{true};
    bool echo{false};
    bool robot{false};
    sim::SimTime slotDuration{sim::Seconds(10.0)};
    std::size_t slots{30};
    traffic::DatagramFlowParams datagramParams;
    traffic::StreamFlowParams streamParams;
    traffic::EchoFlowParams echoParams;
};

struct RobotSpec
{
    robot::SafetyParams safety;
    robot::EstopChannel estop;
};

struct ScenarioConfig
{
    std::string name;
    std::string description;
    GeometrySpec geometry;
    ChannelSpec channel;
    mac::MacParams mac;
    double rateScale{1.0};
    FlowSpec flows;
    traffic::WiredLinkParams wired;
    RobotSpec robot;
    std::size_t replications{3};
    std::uint64_t seed{1};
    double z{metrics::kZ95};

    /// MacParams with the rate scale applied.
    mac::MacParams EffectiveMac() const;

    /// \throws ConfigError listing every violated range.
    void Validate() const;
};

/**
 * Applies `section.key = value` lines to \p config. Blank lines and `#`
 * comments are skipped. Unknown keys, malformed values and duplicate keys are
 * all reported together.
 *
 * \throws ConfigError
 */
void ApplyConfigText(ScenarioConfig& config, const std::string& text);

/// Defaults, then \p params (fitted parameter text, may be empty), then \p text.
ScenarioConfig ParseConfig(const std::string& text, const std::string& params = {});

/// Keys shared by every scenario: channel.*, mac.*, jitter.*.
std::vector<std::string> ParameterKeys();

/// Writes the values of ParameterKeys() in config syntax.
std::string SerializeParameters(const ScenarioConfig& config);

/// Reads one key as text, in the same spelling SerializeParameters uses.
std::string GetValue(const ScenarioConfig& config, const std::string& key);

/// Sets one key. \throws ConfigError for unknown keys or bad values.
void SetValue(ScenarioConfig& config, const std::string& key, const std::string& value);

/// %.6g with '.' as decimal separator.
std::string FormatNumber(double v);

} // namespace owc::runner

#endif // OWC_RUNNER_CONFIG_H
