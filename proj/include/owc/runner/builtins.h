#ifndef OWC_RUNNER_BUILTINS_H
#define OWC_RUNNER_BUILTINS_H

#include "owc/runner/config.h"

#include <optional>
#include <string>
#include <vector>

namespace owc::runner
{

struct BuiltinScenario
{
    std::string id;
    std::string text; ///< config source, without fitted parameters
};

/// The twelve experiment geometries, in a fixed order.
const std::vector<BuiltinScenario>& BuiltinScenarios();

/// Fitted parameter text compiled into the binary from data/fitted-params.conf.
const std::string& ShippedParameters();

/// Calibration targets compiled in from data/targets.conf.
const std::string& ShippedTargets();

/// Builtin \p id parsed on top of \p params.
std::optional<ScenarioConfig> LoadBuiltin(const std::string& id, const std::string& params);

} // namespace owc::runner

#endif // OWC_RUNNER_BUILTINS_H
