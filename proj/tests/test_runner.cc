#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "owc/runner/builtins.h"
#include "owc/runner/calibrate.h"
#include "owc/runner/config.h"
#include "owc/runner/run.h"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace owc;
using namespace owc::runner;

namespace
{

bool
HasIssue(const ConfigError& e, const std::string& field)
{
    return std::any_of(e.Issues().begin(), e.Issues().end(),
                       [&](const ConfigIssue& i) { return i.field == field; });
}

ConfigError
ErrorOf(const std::string& text)
{
    try
    {
        ParseConfig(text);
    }
    catch (const ConfigError& e)
    {
        return e;
    }
    FAIL("config was accepted: " << text);
    return ConfigError({});
}

ScenarioConfig
Small(const std::string& id, std::size_t slots = 3, std::size_t reps = 1)
{
    auto cfg = LoadBuiltin(id, ShippedParameters());
    REQUIRE(cfg);
    RunOptions opts;
    opts.slots = slots;
    opts.replications = reps;
    ScenarioConfig c = ApplyOptions(*cfg, opts);
    c.flows.slotDuration = sim::Seconds(1.0);
    c.flows.echoParams.echoesPerSlot = 50;
    return c;
}

std::string
Csv(const ScenarioResult& r)
{
    std::ostringstream out;
    WriteMetricsCsv(out, MetricRows(r));
    return out.str();
}

/// Shipped fit with some parameters replaced.
std::string
Override(const std::vector<std::pair<std::string, std::string>>& values)
{
    ScenarioConfig c = ParseConfig("name = x\n", ShippedParameters());
    for (const auto& [key, value] : values)
    {
        SetValue(c, key, value);
    }
    return SerializeParameters(c);
}

std::string
Slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("minimal config takes every default")
{
    const ScenarioConfig c = ParseConfig("name = tiny\n");
    CHECK(c.name == "tiny");
    CHECK(c.replications == 3);
    CHECK(c.flows.slots == 30);
    CHECK(c.flows.slotDuration == sim::Seconds(10.0));
    CHECK(c.geometry.SweepPoints() == std::vector<double>{0.0});
}

TEST_CASE("comments and blank lines are ignored")
{
    const ScenarioConfig c = ParseConfig("# header\n\nname = x   # trailing\nseed = 99\n");
    CHECK(c.name == "x");
    CHECK(c.seed == 99);
}

TEST_CASE("unknown and duplicate keys are reported with their line")
{
    const ConfigError e = ErrorOf("name = a\ngeometry.colour = red\nname = b\n");
    REQUIRE(e.Issues().size() == 2);
    CHECK(e.Issues()[0].line == 2);
    CHECK(e.Issues()[0].field == "geometry.colour");
    CHECK(e.Issues()[1].line == 3);
    CHECK(e.Issues()[1].reason == "duplicate key");
}

TEST_CASE("range violations are all collected")
{
    const ConfigError e =
        ErrorOf("name = a\ngeometry.lamp_height = -1\nchannel.fov_deg = 95\nreplications = 0\n");
    CHECK(HasIssue(e, "geometry.lamp_height"));
    CHECK(HasIssue(e, "channel.fov_deg"));
    CHECK(HasIssue(e, "replications"));
}

TEST_CASE("a zero sweep step is rejected")
{
    const ConfigError e = ErrorOf("name = a\ngeometry.sweep = offset\ngeometry.sweep_start = 0\n"
                                  "geometry.sweep_stop = 1\ngeometry.sweep_step = 0\n");
    CHECK(HasIssue(e, "geometry.sweep_step"));
}

TEST_CASE("malformed values and lines are rejected")
{
    CHECK(HasIssue(ErrorOf("name = a\nseed = twelve\n"), "seed"));
    CHECK(HasIssue(ErrorOf("name = a\ngeometry.type = sideways\n"), "geometry.type"));
    CHECK(ErrorOf("name = a\njust words\n").Issues()[0].line == 2);
    CHECK(HasIssue(ErrorOf("name = a\nmac.rate_table = 10:1, 5:2\n"), "mac"));
}

TEST_CASE("parameter keys round-trip through serialization")
{
    ScenarioConfig c = ParseConfig("name = a\n");
    SetValue(c, "channel.fov_deg", "33.5");
    SetValue(c, "jitter.tail_prob", "0.00012");
    const ScenarioConfig d = ParseConfig("name = a\n", SerializeParameters(c));
    for (const auto& key : ParameterKeys())
    {
        CHECK(GetValue(d, key) == GetValue(c, key));
    }
    CHECK(GetValue(d, "channel.fov_deg") == "33.5");
}

TEST_CASE("twelve builtin scenarios load with the shipped fit")
{
    const auto& all = BuiltinScenarios();
    CHECK(all.size() == 12);
    for (const auto& b : all)
    {
        INFO(b.id);
        const auto cfg = LoadBuiltin(b.id, ShippedParameters());
        REQUIRE(cfg);
        CHECK(cfg->name == b.id);
        CHECK_FALSE(cfg->description.empty());
    }
    CHECK_FALSE(LoadBuiltin("no-such-scenario", ShippedParameters()));
}

TEST_CASE("builtin geometries")
{
    const auto los2 = LoadBuiltin("rtt-vitro-LoS2", ShippedParameters());
    REQUIRE(los2);
    const auto g = los2->geometry.Build(los2->geometry.FixedValue(), los2->channel);
    CHECK(g.lampPos.z == doctest::Approx(2.5));
    CHECK(g.donglePos.x == doctest::Approx(1.2));
    CHECK(los2->flows.echo);
    CHECK(LoadBuiltin("rtt-vitro-LoS1", ShippedParameters())->flows.robot);

    const auto vertical = LoadBuiltin("los-vertical", ShippedParameters());
    const auto pts = vertical->geometry.SweepPoints();
    CHECK(pts.size() == 9);
    CHECK(pts.front() == doctest::Approx(0.5));
    CHECK(pts.back() == doctest::Approx(2.5));

    const auto nlos = LoadBuiltin("nlos-vertical", ShippedParameters());
    const auto gn = nlos->geometry.Build(0.5, nlos->channel);
    REQUIRE(gn.reflector);
    CHECK(gn.donglePos.z == doctest::Approx(0.5));

    const auto plexi = LoadBuiltin("farm-plexiglass", ShippedParameters());
    const auto gp = plexi->geometry.Build(0.0, plexi->channel);
    CHECK(gp.obstacleTransmittance == doctest::Approx(plexi->channel.plexiglassTransmittance));
}

TEST_CASE("shipped targets parse and name only measurable ids")
{
    const TargetSet set = ParseTargets(ShippedTargets());
    CHECK(set.targets.size() >= 13);
    const auto& known = KnownTargetIds();
    for (const auto& t : set.targets)
    {
        CHECK(std::find(known.begin(), known.end(), t.id) != known.end());
    }
    CHECK_THROWS_AS(ParseTargets("T99-throughput.value = 1\n"), ConfigError);
}

TEST_CASE("target pass bands")
{
    CalibrationTarget t;
    t.value = 0.5;
    t.tolerance = 0.15;
    CHECK(t.Passes(0.57));
    CHECK_FALSE(t.Passes(0.58));
    CHECK_FALSE(t.Passes(std::nan("")));
    t.lowerBound = true;
    CHECK(t.Passes(5.0));
    CHECK(t.Loss(5.0) == 0.0);
    t.lowerBound = false;
    t.factor = 3.0;
    CHECK(t.Passes(1.49));
    CHECK_FALSE(t.Passes(0.16));
}

TEST_CASE("same seed gives byte-identical output, another seed differs")
{
    const ScenarioConfig c = Small("rtt-vitro-LoS1");
    std::ostringstream t1;
    std::ostringstream t2;
    const ScenarioResult a = RunScenario(c, &t1);
    const ScenarioResult b = RunScenario(c, &t2);
    CHECK(Csv(a) == Csv(b));
    CHECK(t1.str() == t2.str());
    CHECK_FALSE(t1.str().empty());

    ScenarioConfig other = c;
    other.seed = c.seed + 1;
    std::ostringstream t3;
    RunScenario(other, &t3);
    CHECK(t3.str() != t1.str());
}

TEST_CASE("emitted files are complete and metric bounds are ordered")
{
    const ScenarioConfig c = Small("rtt-vitro-LoS1", 3, 2);
    const ScenarioResult r = RunScenario(c);
    const auto dir = std::filesystem::temp_directory_path() / "owc-runner-test";
    std::filesystem::remove_all(dir);
    const auto files = EmitResults(r, dir);
    CHECK(files.size() == 4);
    for (const auto& f : files)
    {
        CHECK(std::filesystem::file_size(f) > 0);
    }
    CHECK(Slurp(dir / "rtt-vitro-LoS1.metrics.csv").rfind(
              "scenario_id,metric,mean,lower,upper,n_slots,z,extra\n", 0) == 0);
    for (const auto& row : MetricRows(r))
    {
        INFO(row.metric);
        CHECK(row.lower <= row.mean);
        CHECK(row.mean <= row.upper);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("unwritable output directory is reported")
{
    const ScenarioConfig c = Small("los-vertical", 2);
    ScenarioConfig one = c;
    one.geometry.sweep = {};
    const ScenarioResult r = RunScenario(one);
    CHECK_THROWS_AS(EmitResults(r, "/proc/owc-cannot-write-here"), OutputError);
}

TEST_CASE("farm NLoS is link_down at every point")
{
    ScenarioConfig c = Small("farm-nlos", 2);
    c.flows.stream = false;
    const ScenarioResult r = RunScenario(c);
    for (const auto& p : r.points)
    {
        CHECK(p.linkDown);
    }
    for (const auto& row : MetricRows(r))
    {
        CHECK(row.extra.find("link_down") != std::string::npos);
    }
}

TEST_CASE("LoS sweeps degrade monotonically in received power")
{
    for (const char* id : {"los-vertical", "los-horizontal", "farm-los"})
    {
        const auto cfg = LoadBuiltin(id, ShippedParameters());
        double previous = std::numeric_limits<double>::infinity();
        for (double v : cfg->geometry.SweepPoints())
        {
            const auto g = cfg->geometry.Build(v, cfg->channel);
            const double p = channel::ComputeChannelState(g, cfg->channel.emitter,
                                                          cfg->channel.receiver,
                                                          cfg->channel.patchArea)
                                 .receivedPower;
            CHECK(p <= previous);
            previous = p;
        }
    }
}

TEST_CASE("a transparent plexiglass guard cannot reproduce its own attenuation")
{
    EvalScale scale = SearchScale();
    scale.slotDuration = sim::Seconds(1.0);
    scale.slots = 3;
    const std::string params = Override({{"channel.plexiglass_transmittance", "1"}});
    const Achieved a = Evaluate(params, {"T6-throughput", "T6-per"}, scale);
    CHECK(a.at("T6-throughput") == 1.0);
    const TargetSet set = ParseTargets(ShippedTargets());
    for (const auto& rep : Report(set.targets, a))
    {
        if (rep.target.id == "T6-throughput")
        {
            CHECK_FALSE(rep.pass);
        }
    }
}

TEST_CASE("scaling every rate leaves the datagram PER unchanged")
{
    EvalScale scale = SearchScale();
    scale.slotDuration = sim::Seconds(1.0);
    scale.slots = 3;
    const std::set<std::string> ids{"T2-per", "T2-throughput"};
    // Blockage guarantees losses at both ends of the sweep.
    const Achieved base = Evaluate(Override({{"channel.blockage", "0.3"}}), ids, scale);
    const Achieved doubled =
        Evaluate(Override({{"channel.blockage", "0.3"}, {"mac.rate_scale", "2"}}), ids, scale);
    REQUIRE(std::isfinite(base.at("T2-per")));
    CHECK(doubled.at("T2-per") == doctest::Approx(base.at("T2-per")).epsilon(1e-12));
    // Fixed MAC overheads keep the throughput ratio from being exactly invariant.
    CHECK(doubled.at("T2-throughput") ==
          doctest::Approx(base.at("T2-throughput")).epsilon(0.15));
}
