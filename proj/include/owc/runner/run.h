#ifndef OWC_RUNNER_RUN_H
#define OWC_RUNNER_RUN_H

#include "owc/mac/medium.h"
#include "owc/metrics/estimators.h"
#include "owc/robot/session.h"
#include "owc/runner/config.h"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace owc::runner
{

struct RunOptions
{
    std::optional<std::size_t> slots;
    std::optional<std::size_t> replications;
    std::optional<std::uint64_t> seed;
    bool paperScale{false}; ///< 10-minute slots, 27 per replication (4.5 h)
    std::ostream* trace{nullptr};
};

/// Config with the command-line overrides applied.
ScenarioConfig ApplyOptions(ScenarioConfig config, const RunOptions& options);

/// Per-flow MAC counters of the console station.
struct FlowMacStats
{
    std::string flow;
    mac::MacStats stats;
};

/// One sweep point under one replication seed.
struct ReplicationResult
{
    std::size_t index{0};
    std::uint64_t seed{0};
    std::vector<metrics::SlotStats> datagramSlots;
    std::vector<metrics::SlotStats> streamSlots;
    std::vector<metrics::SlotStats> echoSlots;
    std::vector<FlowMacStats> mac;
    std::optional<robot::SessionResult> session;
};

struct PointResult
{
    double sweepValue{0.0};
    channel::ChannelState channel;
    double phyRate{0.0};
    bool linkDown{false};
    std::vector<ReplicationResult> replications;
};

struct ScenarioResult
{
    ScenarioConfig config;
    std::vector<PointResult> points;
};

/**
 * Every sweep point times every replication; replication r is seeded with
 * ReplicationSeed(seed, r), the same at every sweep point. A point whose
 * received power is below the floor is still run and flagged link_down.
 */
ScenarioResult RunScenario(const ScenarioConfig& config, std::ostream* trace = nullptr);

/// Session script used when the robot flow is enabled.
robot::SessionScript StandardSession(const ScenarioConfig& config);

struct MetricRow
{
    std::string scenarioId;
    std::string metric;
    double mean{0.0};
    double lower{0.0};
    double upper{0.0};
    std::size_t nSlots{0};
    double z{metrics::kZ95};
    std::string extra;
};

/// "<name>@<axis>=<value>".
std::string PointId(const ScenarioConfig& config, double sweepValue);

/// Metrics pooled over replications, one row per metric per sweep point.
std::vector<MetricRow> MetricRows(const ScenarioResult& result);

/// Pooled estimates of one point; nullopt when the flow did not run.
std::optional<metrics::EstimateWithCi> PointThroughput(const PointResult& point, double z);
std::optional<metrics::EstimateWithCi> PointPer(const PointResult& point, double z);
std::optional<metrics::RttAggregate> PointRtt(const PointResult& point, double z);

void WriteMetricsCsv(std::ostream& out, const std::vector<MetricRow>& rows);

class OutputError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Writes <name>.metrics.csv, <name>.plot.tsv, <name>.mac.csv and, when the
 * robot flow ran, <name>.safety.csv into \p dir (created if missing).
 *
 * \throws OutputError naming the path that could not be written.
 */
std::vector<std::filesystem::path> EmitResults(const ScenarioResult& result,
                                               const std::filesystem::path& dir);

} // namespace owc::runner

#endif // OWC_RUNNER_RUN_H
