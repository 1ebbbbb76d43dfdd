#include "owc/runner/run.h"

#include "owc/mac/error-model.h"
#include "owc/traffic/flows.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace owc::runner
{

using sim::SimTime;

ScenarioConfig
ApplyOptions(ScenarioConfig config, const RunOptions& options)
{
    if (options.paperScale)
    {
        config.flows.slotDuration = sim::Seconds(600.0);
        config.flows.slots = 27;
    }
    if (options.slots)
    {
        config.flows.slots = *options.slots;
    }
    if (options.replications)
    {
        config.replications = *options.replications;
    }
    if (options.seed)
    {
        config.seed = *options.seed;
    }
    config.Validate();
    return config;
}

robot::SessionScript
StandardSession(const ScenarioConfig& config)
{
    robot::SessionScript s;
    s.duration = sim::Seconds(20.0);
    s.deadmanReleased = {{sim::Seconds(8.0), sim::Seconds(9.0)}};
    s.estopAt = sim::Seconds(15.0);
    s.estop = config.robot.estop;
    return s;
}

namespace
{

void
AddMac(ReplicationResult& rep, const char* flow, traffic::Topology& topo)
{
    rep.mac.push_back({flow, topo.Medium().Stats(traffic::kConsole)});
}

ReplicationResult
RunReplication(const ScenarioConfig& cfg, const mac::MacParams& macp, const mac::ErrorModel& em,
               bool linkUp, std::size_t index, std::ostream* trace)
{
    ReplicationResult rep;
    rep.index = index;
    rep.seed = sim::ReplicationSeed(cfg.seed, index);
    const auto& f = cfg.flows;
    const double slotSeconds = f.slotDuration.Seconds();

    if (f.datagram)
    {
        sim::Simulator s;
        s.SetTrace(trace);
        traffic::Topology topo(s, macp, em, cfg.wired, rep.seed);
        const auto slots = traffic::RunDatagramFlow(topo, f.datagramParams, f.slotDuration, f.slots);
        for (std::size_t i = 0; i < slots.size(); ++i)
        {
            metrics::SlotStats st;
            st.index = i;
            st.framesAttempted = slots[i].sent;
            st.framesReceived = slots[i].received;
            st.duration = slotSeconds;
            rep.datagramSlots.push_back(std::move(st));
        }
        AddMac(rep, "datagram", topo);
    }
    if (f.stream)
    {
        sim::Simulator s;
        s.SetTrace(trace);
        traffic::Topology topo(s, macp, em, cfg.wired, rep.seed);
        const auto res = traffic::RunStreamFlow(topo, f.streamParams, f.slotDuration, f.slots);
        for (std::size_t i = 0; i < res.bytesPerSlot.size(); ++i)
        {
            metrics::SlotStats st;
            st.index = i;
            st.bytesDelivered = res.bytesPerSlot[i];
            st.duration = slotSeconds;
            rep.streamSlots.push_back(std::move(st));
        }
        AddMac(rep, "stream", topo);
    }
    if (f.echo && linkUp)
    {
        sim::Simulator s;
        s.SetTrace(trace);
        traffic::Topology topo(s, macp, em, cfg.wired, rep.seed);
        const auto slots = traffic::RunEchoFlow(topo, f.echoParams, f.slots, rep.seed);
        for (std::size_t i = 0; i < slots.size(); ++i)
        {
            metrics::SlotStats st;
            st.index = i;
            st.rtts = slots[i].rtts;
            st.duration = slots[i].duration;
            rep.echoSlots.push_back(std::move(st));
        }
        AddMac(rep, "echo", topo);
    }
    if (f.robot)
    {
        rep.session = robot::RunSession(StandardSession(cfg), cfg.robot.safety, macp, em, cfg.wired,
                                        rep.seed, trace);
    }
    return rep;
}

template <typename Member>
std::vector<metrics::SlotStats>
Pool(const PointResult& point, Member member)
{
    std::vector<metrics::SlotStats> all;
    for (const auto& rep : point.replications)
    {
        const auto& slots = rep.*member;
        all.insert(all.end(), slots.begin(), slots.end());
    }
    return all;
}

std::string
ReadableName(const ScenarioConfig& config)
{
    return config.name.empty() ? std::string("scenario") : config.name;
}

} // namespace

ScenarioResult
RunScenario(const ScenarioConfig& config, std::ostream* trace)
{
    config.Validate();
    ScenarioResult result;
    result.config = config;
    const mac::MacParams macp = config.EffectiveMac();

    for (double v : config.geometry.SweepPoints())
    {
        PointResult point;
        point.sweepValue = v;
        const auto geom = config.geometry.Build(v, config.channel);
        point.channel = channel::ComputeChannelState(geom, config.channel.emitter,
                                                     config.channel.receiver,
                                                     config.channel.patchArea);
        point.linkDown = !point.channel.linkUp;
        point.phyRate = mac::SelectRate(point.channel.snr, macp);
        const mac::ChannelErrorModel em(point.channel, config.channel.receiver,
                                        config.channel.fading);
        for (std::size_t r = 0; r < config.replications; ++r)
        {
            point.replications.push_back(
                RunReplication(config, macp, em, !point.linkDown, r, trace));
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

std::string
PointId(const ScenarioConfig& config, double sweepValue)
{
    return ReadableName(config) + "@" + ToString(config.geometry.axis) + "=" +
           FormatNumber(sweepValue);
}

std::optional<metrics::EstimateWithCi>
PointThroughput(const PointResult& point, double z)
{
    const auto slots = Pool(point, &ReplicationResult::streamSlots);
    if (slots.empty())
    {
        return std::nullopt;
    }
    return metrics::AggregateThroughput(slots, z);
}

std::optional<metrics::EstimateWithCi>
PointPer(const PointResult& point, double z)
{
    const auto slots = Pool(point, &ReplicationResult::datagramSlots);
    if (slots.empty())
    {
        return std::nullopt;
    }
    return metrics::AggregatePer(slots, z);
}

std::optional<metrics::RttAggregate>
PointRtt(const PointResult& point, double z)
{
    const auto slots = Pool(point, &ReplicationResult::echoSlots);
    if (slots.empty())
    {
        return std::nullopt;
    }
    return metrics::AggregateRtt(slots, z);
}

std::vector<MetricRow>
MetricRows(const ScenarioResult& result)
{
    const ScenarioConfig& cfg = result.config;
    const double z = cfg.z;
    const std::string down = "link_down";
    std::vector<MetricRow> rows;

    auto fromEstimate = [&](const std::string& id, const char* metric,
                            const metrics::EstimateWithCi& e, std::string extra) {
        rows.push_back({id, metric, e.mean, e.lower, e.upper, e.nSlots, e.z, std::move(extra)});
    };

    for (const PointResult& p : result.points)
    {
        const std::string id = PointId(cfg, p.sweepValue);
        const std::string flag = p.linkDown ? down : std::string();
        if (cfg.flows.stream)
        {
            fromEstimate(id, "throughput_bps", *PointThroughput(p, z), flag);
        }
        if (cfg.flows.datagram)
        {
            fromEstimate(id, "per", *PointPer(p, z), flag);
        }
        if (cfg.flows.echo)
        {
            if (p.linkDown)
            {
                const double inf = std::numeric_limits<double>::infinity();
                rows.push_back({id, "rtt_s", inf, inf, inf, 0, z, down});
            }
            else
            {
                const auto rtt = *PointRtt(p, z);
                fromEstimate(id, "rtt_s", rtt.rtt, FormatNumber(rtt.peaksFraction));
            }
        }
        if (cfg.flows.robot)
        {
            std::vector<double> latencies;
            double violations = 0.0;
            const SimTime end = StandardSession(cfg).duration;
            for (const auto& rep : p.replications)
            {
                const auto& s = *rep.session;
                if (s.estopLatency)
                {
                    latencies.push_back(s.estopLatency->Seconds());
                }
                violations +=
                    static_cast<double>(robot::CountMovingViolations(s, cfg.robot.safety, end));
            }
            const std::size_t n = p.replications.size();
            if (latencies.size() >= 2)
            {
                fromEstimate(id, "estop_latency_s", metrics::MeanWithCi(latencies, z), flag);
            }
            else
            {
                const double v = latencies.empty() ? std::numeric_limits<double>::infinity()
                                                   : latencies.front();
                rows.push_back({id, "estop_latency_s", v, v, v, latencies.size(), z, flag});
            }
            rows.push_back({id, "moving_violations", violations, violations, violations, n, z, flag});
        }
    }
    return rows;
}

void
WriteMetricsCsv(std::ostream& out, const std::vector<MetricRow>& rows)
{
    out << "scenario_id,metric,mean,lower,upper,n_slots,z,extra\n";
    for (const MetricRow& r : rows)
    {
        out << r.scenarioId << ',' << r.metric << ',' << FormatNumber(r.mean) << ','
            << FormatNumber(r.lower) << ',' << FormatNumber(r.upper) << ',' << r.nSlots << ','
            << FormatNumber(r.z) << ',' << r.extra << '\n';
    }
}

namespace
{

std::ofstream
OpenOutput(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw OutputError("cannot write " + path.string());
    }
    return out;
}

void
Finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.close();
    if (!out)
    {
        throw OutputError("error while writing " + path.string());
    }
}

} // namespace

std::vector<std::filesystem::path>
EmitResults(const ScenarioResult& result, const std::filesystem::path& dir)
{
    if (result.points.empty())
    {
        throw OutputError("no results to write");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
    {
        throw OutputError("cannot create " + dir.string() + ": " + ec.message());
    }

    const ScenarioConfig& cfg = result.config;
    const std::string base = ReadableName(cfg);
    std::vector<std::filesystem::path> written;
    const auto rows = MetricRows(result);

    {
        const auto path = dir / (base + ".metrics.csv");
        auto out = OpenOutput(path);
        WriteMetricsCsv(out, rows);
        Finish(out, path);
        written.push_back(path);
    }
    {
        // Plot data: one block per metric, sweep value first, blank line between blocks.
        const auto path = dir / (base + ".plot.tsv");
        auto out = OpenOutput(path);
        out << "# " << ToString(cfg.geometry.axis) << "\tmean\tlower\tupper\n";
        std::vector<std::string> metricsSeen;
        for (const auto& r : rows)
        {
            if (std::find(metricsSeen.begin(), metricsSeen.end(), r.metric) == metricsSeen.end())
            {
                metricsSeen.push_back(r.metric);
            }
        }
        const std::size_t perPoint = metricsSeen.size();
        for (std::size_t m = 0; m < perPoint; ++m)
        {
            out << (m ? "\n\n" : "") << "# " << metricsSeen[m] << '\n';
            for (std::size_t i = 0; i < result.points.size(); ++i)
            {
                const MetricRow& r = rows[i * perPoint + m];
                out << FormatNumber(result.points[i].sweepValue) << '\t' << FormatNumber(r.mean)
                    << '\t' << FormatNumber(r.lower) << '\t' << FormatNumber(r.upper) << '\n';
            }
        }
        Finish(out, path);
        written.push_back(path);
    }
    {
        const auto path = dir / (base + ".mac.csv");
        auto out = OpenOutput(path);
        out << "scenario_id,replication,flow,snr_db,received_power_w,phy_rate_bps,frames_sent,"
               "frames_delivered,frames_dropped,retransmissions,crc_failures,undetected\n";
        for (const PointResult& p : result.points)
        {
            for (const auto& rep : p.replications)
            {
                for (const auto& m : rep.mac)
                {
                    out << PointId(cfg, p.sweepValue) << ',' << rep.index << ',' << m.flow << ','
                        << FormatNumber(p.channel.SnrDb()) << ','
                        << FormatNumber(p.channel.receivedPower) << ','
                        << FormatNumber(p.phyRate) << ',' << m.stats.framesSent << ','
                        << m.stats.framesDelivered << ',' << m.stats.framesDropped << ','
                        << m.stats.retransmissions << ',' << m.stats.crcFailures << ','
                        << m.stats.undetected << '\n';
                }
            }
        }
        Finish(out, path);
        written.push_back(path);
    }
    if (cfg.flows.robot)
    {
        const auto path = dir / (base + ".safety.csv");
        auto out = OpenOutput(path);
        std::vector<robot::SafetyEvent> events;
        for (const PointResult& p : result.points)
        {
            for (const auto& rep : p.replications)
            {
                events.insert(events.end(), rep.session->events.begin(),
                              rep.session->events.end());
            }
        }
        robot::WriteSafetyCsv(out, events);
        Finish(out, path);
        written.push_back(path);
    }
    return written;
}

} // namespace owc::runner
