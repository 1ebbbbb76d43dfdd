#ifndef OWC_RUNNER_CALIBRATE_H
#define OWC_RUNNER_CALIBRATE_H

#include "owc/runner/config.h"

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace owc::runner
{

enum class TargetKind : std::uint8_t
{
    Ratio,
    Absolute,
    Boolean,
};

/**
 * \brief One reported figure the simulator has to reproduce.
 *
 * Numeric targets pass when |achieved / value - 1| <= tolerance. With
 * `factor` set they pass inside [value / factor, value * factor] instead.
 * A lower bound passes at any achieved >= value * (1 - tolerance).
 */
struct CalibrationTarget
{
    std::string id;
    std::string description;
    TargetKind kind{TargetKind::Ratio};
    double value{1.0};
    double tolerance{0.15};
    std::optional<double> factor;
    bool lowerBound{false};

    bool Passes(double achieved) const;

    /// Squared log error, zero inside a satisfied lower bound. Boolean: 0 or 10.
    double Loss(double achieved) const;
};

/// Parameter searched by the calibration, on a log grid between the bounds.
struct FreeParameter
{
    std::string key;
    double lower;
    double upper;
};

struct TargetSet
{
    std::vector<CalibrationTarget> targets;
    std::vector<FreeParameter> free;
};

/**
 * Reads `<id>.<field> = value` lines (fields: kind, value, tolerance, factor,
 * bound, description) and `free.<parameter key> = lower:upper` lines.
 *
 * \throws ConfigError for unknown ids, fields or keys and for out-of-range values.
 */
TargetSet ParseTargets(const std::string& text);

/// Every target id the evaluator can measure.
const std::vector<std::string>& KnownTargetIds();

/// Run lengths used while evaluating targets.
struct EvalScale
{
    sim::SimTime slotDuration{sim::Seconds(10.0)};
    std::size_t slots{30};
    std::size_t replications{3};
    std::size_t echoSlots{30};
    std::size_t echoReplications{3};
    bool endpointsOnly{true}; ///< sweeps that only feed extreme/peak ratios run two points
    std::uint64_t seed{1};
};

/// 10 s slots, 30 slots, 3 replications.
EvalScale DeskScale();

/// Short runs used inside the search loop.
EvalScale SearchScale();

/// Achieved value per target id; booleans are 1 or 0.
using Achieved = std::map<std::string, double>;

/**
 * Runs the builtin scenarios needed for \p ids with \p params applied on top
 * of the defaults. Calls \p progress with each scenario id when non-null.
 */
Achieved Evaluate(const std::string& params, const std::set<std::string>& ids,
                  const EvalScale& scale,
                  const std::function<void(const std::string&)>& progress = {});

struct TargetReport
{
    CalibrationTarget target;
    double achieved;
    bool pass;
};

std::vector<TargetReport> Report(const std::vector<CalibrationTarget>& targets,
                                 const Achieved& achieved);

double TotalLoss(const std::vector<CalibrationTarget>& targets, const Achieved& achieved);

/// One line per target: id, achieved, target, tolerance, PASS or FAIL.
void WriteReport(std::ostream& out, const std::vector<TargetReport>& report);

bool AllPass(const std::vector<TargetReport>& report);

struct CalibrationOptions
{
    std::size_t maxEvaluations{300};
    double initialStep{0.4}; ///< natural-log step of the multiplicative grid
    double finalStep{0.02};
    EvalScale scale{SearchScale()};
    std::ostream* log{nullptr};
};

struct CalibrationResult
{
    std::string params; ///< fitted parameter file text
    double loss{0.0};
    std::size_t evaluations{0};
    Achieved achieved;
};

/**
 * Coordinate descent: each free parameter in turn is multiplied and divided
 * by exp(step); a move is kept when the total loss drops. The step halves
 * after a sweep without improvement, until it reaches finalStep or the
 * evaluation budget runs out.
 */
CalibrationResult Calibrate(const TargetSet& set, const std::string& startParams,
                            const CalibrationOptions& options);

} // namespace owc::runner

#endif // OWC_RUNNER_CALIBRATE_H
