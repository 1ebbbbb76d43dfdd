#include "owc/runner/builtins.h"

#include "fitted-params.inc"

namespace owc::runner
{

namespace
{

// Throughput and PER experiments share their flow settings with the defaults.
constexpr const char* kLosVertical = R"(name = los-vertical
description = in-vitro LoS, lamp raised above the dongle
geometry.type = los
geometry.sweep = height
geometry.offset = 0
geometry.sweep_start = 0.5
geometry.sweep_stop = 2.5
geometry.sweep_step = 0.25
)";

constexpr const char* kLosHorizontal = R"(name = los-horizontal
description = in-vitro LoS, dongle moved sideways under a 2.5 m lamp
geometry.type = los
geometry.sweep = offset
geometry.lamp_height = 2.5
geometry.sweep_start = 0
geometry.sweep_stop = 1.25
geometry.sweep_step = 0.25
)";

constexpr const char* kNlosVertical = R"(name = nlos-vertical
description = in-vitro NLoS, dongle facing the reflector at growing height
geometry.type = nlos
geometry.sweep = gap
geometry.lamp_height = 2.5
geometry.offset = 0
geometry.sweep_start = 0.25
geometry.sweep_stop = 1
geometry.sweep_step = 0.25
)";

constexpr const char* kNlosHorizontal = R"(name = nlos-horizontal
description = in-vitro NLoS, dongle 0.2 m above the reflector moved sideways
geometry.type = nlos
geometry.sweep = offset
geometry.lamp_height = 2.5
geometry.gap = 0.2
geometry.sweep_start = 0
geometry.sweep_stop = 0.25
geometry.sweep_step = 0.05
)";

constexpr const char* kFarmLos = R"(name = farm-los
description = farm LoS, lamp 5 m above the console
geometry.type = los
geometry.sweep = offset
geometry.lamp_height = 5
geometry.sweep_start = 0
geometry.sweep_stop = 2
geometry.sweep_step = 0.25
)";

constexpr const char* kFarmPlexiglass = R"(name = farm-plexiglass
description = farm LoS through the plexiglass guard
geometry.type = los
geometry.sweep = offset
geometry.lamp_height = 5
geometry.obstacle = plexiglass
geometry.sweep_start = 0
geometry.sweep_stop = 2
geometry.sweep_step = 0.25
)";

// The reflecting surface in the barn is distant and dark; modeled as low reflectivity.
constexpr const char* kFarmNlos = R"(name = farm-nlos
description = farm NLoS off a distant dark surface
geometry.type = nlos
geometry.sweep = offset
geometry.lamp_height = 6.5
geometry.gap = 1.5
geometry.reflectivity = 0.05
geometry.sweep_start = 0
geometry.sweep_stop = 2
geometry.sweep_step = 0.5
)";

constexpr const char* kRttVitroLos1 = R"(name = rtt-vitro-LoS1
description = echo latency, lamp 2.5 m straight above the dongle
geometry.type = los
geometry.sweep = offset
geometry.lamp_height = 2.5
geometry.offset = 0
flows.datagram = false
flows.stream = false
flows.echo = true
flows.robot = true
)";

constexpr const char* kRttVitroLos2 = R"(name = rtt-vitro-LoS2
description = echo latency, lamp 2.5 m high and 1.2 m to the side
geometry.type = los
geometry.sweep = offset
geometry.lamp_height = 2.5
geometry.offset = 1.2
flows.datagram = false
flows.stream = false
flows.echo = true
)";

constexpr const char* kRttVitroNlos3 = R"(name = rtt-vitro-NLoS3
description = echo latency over the reflector, dongle 0.25 m above it
geometry.type = nlos
geometry.sweep = gap
geometry.lamp_height = 2.5
geometry.gap = 0.25
geometry.offset = 0
flows.datagram = false
flows.stream = false
flows.echo = true
)";

constexpr const char* kRttFarmLos1 = R"(name = rtt-farm-LoS1
description = echo latency in the farm, lamp 5 m high and 2 m to the side
geometry.type = los
geometry.sweep = offset
geometry.lamp_height = 5
geometry.offset = 2
flows.datagram = false
flows.stream = false
flows.echo = true
)";

constexpr const char* kRttFarmLos2 = R"(name = rtt-farm-LoS2
description = echo latency in the farm through the plexiglass guard
geometry.type = los
geometry.sweep = offset
geometry.lamp_height = 5
geometry.offset = 2
geometry.obstacle = plexiglass
flows.datagram = false
flows.stream = false
flows.echo = true
)";

} // namespace

const std::vector<BuiltinScenario>&
BuiltinScenarios()
{
    static const std::vector<BuiltinScenario> all = {
        {"los-vertical", kLosVertical},
        {"los-horizontal", kLosHorizontal},
        {"nlos-vertical", kNlosVertical},
        {"nlos-horizontal", kNlosHorizontal},
        {"farm-los", kFarmLos},
        {"farm-plexiglass", kFarmPlexiglass},
        {"farm-nlos", kFarmNlos},
        {"rtt-vitro-LoS1", kRttVitroLos1},
        {"rtt-vitro-LoS2", kRttVitroLos2},
        {"rtt-vitro-NLoS3", kRttVitroNlos3},
        {"rtt-farm-LoS1", kRttFarmLos1},
        {"rtt-farm-LoS2", kRttFarmLos2},
    };
    return all;
}

const std::string&
ShippedParameters()
{
    static const std::string text = kFittedParams;
    return text;
}

const std::string&
ShippedTargets()
{
    static const std::string text = kShippedTargets;
    return text;
}

std::optional<ScenarioConfig>
LoadBuiltin(const std::string& id, const std::string& params)
{
    for (const auto& b : BuiltinScenarios())
    {
        if (b.id == id)
        {
            return ParseConfig(b.text, params);
        }
    }
    return std::nullopt;
}

} // namespace owc::runner
