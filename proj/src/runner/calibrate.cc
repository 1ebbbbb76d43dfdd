#include "owc/runner/calibrate.h"

#include "owc/runner/builtins.h"
#include "owc/runner/run.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace owc::runner
{

namespace
{

constexpr double kBooleanPenalty = 10.0;
constexpr double kUndefinedPenalty = 100.0;

struct PointMetrics
{
    double value{0.0};
    bool linkUp{false};
    double throughput{0.0};
    double per{0.0};
    double rtt{0.0};
    double peaks{0.0};
};

enum class Span : std::uint8_t
{
    Full,
    Endpoints,
    First,
    ChannelOnly,
};

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
ParseNumber(const std::string& s)
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

/// a / b with 0/0 reported as NaN so that it never passes a target.
double
Ratio(double a, double b)
{
    if (b == 0.0)
    {
        return a == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                        : std::numeric_limits<double>::infinity();
    }
    return a / b;
}

double
MeanOf(const std::vector<PointMetrics>& points, double PointMetrics::*field)
{
    std::vector<double> v;
    for (const auto& p : points)
    {
        v.push_back(p.*field);
    }
    return metrics::CompensatedSum(v) / static_cast<double>(v.size());
}

std::vector<PointMetrics>
RunFor(const std::string& id, const std::string& params, const EvalScale& scale, Span span)
{
    ScenarioConfig cfg = *LoadBuiltin(id, params);
    cfg.seed = scale.seed;
    cfg.flows.robot = false;
    cfg.flows.slotDuration = scale.slotDuration;
    if (cfg.flows.echo)
    {
        cfg.flows.slots = scale.echoSlots;
        cfg.replications = scale.echoReplications;
    }
    else
    {
        cfg.flows.slots = scale.slots;
        cfg.replications = scale.replications;
    }
    auto& sw = cfg.geometry.sweep;
    if (sw.IsSet() && span == Span::Endpoints && sw.stop > sw.start)
    {
        sw.step = sw.stop - sw.start;
    }
    if (sw.IsSet() && span == Span::First)
    {
        sw.stop = sw.start;
    }

    std::vector<PointMetrics> out;
    if (span == Span::ChannelOnly)
    {
        for (double v : cfg.geometry.SweepPoints())
        {
            const auto state = channel::ComputeChannelState(
                cfg.geometry.Build(v, cfg.channel), cfg.channel.emitter, cfg.channel.receiver,
                cfg.channel.patchArea);
            PointMetrics m;
            m.value = v;
            m.linkUp = state.linkUp;
            out.push_back(m);
        }
        return out;
    }

    const ScenarioResult res = RunScenario(cfg);
    for (const PointResult& p : res.points)
    {
        PointMetrics m;
        m.value = p.sweepValue;
        m.linkUp = !p.linkDown;
        if (const auto t = PointThroughput(p, cfg.z))
        {
            m.throughput = t->mean;
        }
        if (const auto e = PointPer(p, cfg.z))
        {
            m.per = e->mean;
        }
        if (cfg.flows.echo)
        {
            if (p.linkDown)
            {
                m.rtt = std::numeric_limits<double>::infinity();
                m.peaks = 1.0;
            }
            else
            {
                const auto r = *PointRtt(p, cfg.z);
                m.rtt = r.rtt.mean;
                m.peaks = r.peaksFraction;
            }
        }
        out.push_back(m);
    }
    return out;
}

struct RttSource
{
    const char* prefix;
    const char* scenario;
};

constexpr RttSource kRttSources[] = {
    {"T8-vitro-LoS1", "rtt-vitro-LoS1"}, {"T8-vitro-LoS2", "rtt-vitro-LoS2"},
    {"T8-vitro-NLoS3", "rtt-vitro-NLoS3"}, {"T8-farm-LoS1", "rtt-farm-LoS1"},
    {"T8-farm-LoS2", "rtt-farm-LoS2"},
};

constexpr const char* kSweepTargets[][2] = {
    {"T1", "los-vertical"},
    {"T2", "los-horizontal"},
    {"T3", "nlos-vertical"},
    {"T4", "nlos-horizontal"},
};

} // namespace

bool
CalibrationTarget::Passes(double achieved) const
{
    if (kind == TargetKind::Boolean)
    {
        return (achieved != 0.0) == (value != 0.0);
    }
    if (!std::isfinite(achieved))
    {
        return false;
    }
    if (factor)
    {
        return achieved >= value / *factor && achieved <= value * *factor;
    }
    if (lowerBound)
    {
        return achieved >= value * (1.0 - tolerance);
    }
    return std::abs(achieved / value - 1.0) <= tolerance;
}

double
CalibrationTarget::Loss(double achieved) const
{
    if (kind == TargetKind::Boolean)
    {
        return Passes(achieved) ? 0.0 : kBooleanPenalty;
    }
    if (!std::isfinite(achieved) || achieved <= 0.0)
    {
        return kUndefinedPenalty;
    }
    const double e = std::log(achieved / value);
    if (lowerBound && e >= 0.0)
    {
        return 0.0;
    }
    if (factor)
    {
        // Scaled so that the band edge costs as much as the edge of a 15% band.
        const double s = std::log(1.15) / std::log(*factor);
        return e * e * s * s;
    }
    return e * e;
}

const std::vector<std::string>&
KnownTargetIds()
{
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (int t = 1; t <= 6; ++t)
        {
            v.push_back("T" + std::to_string(t) + "-throughput");
            v.push_back("T" + std::to_string(t) + "-per");
        }
        v.push_back("T7-link-down");
        for (const auto& s : kRttSources)
        {
            v.push_back(std::string(s.prefix) + "-rtt");
            v.push_back(std::string(s.prefix) + "-peaks");
        }
        return v;
    }();
    return ids;
}

TargetSet
ParseTargets(const std::string& text)
{
    std::vector<ConfigIssue> issues;
    std::map<std::string, CalibrationTarget> byId;
    std::vector<std::string> order;
    TargetSet set;
    const auto keys = ParameterKeys();
    const auto& known = KnownTargetIds();

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
        try
        {
            if (key.rfind("free.", 0) == 0)
            {
                const std::string param = key.substr(5);
                if (std::find(keys.begin(), keys.end(), param) == keys.end() ||
                    param == "mac.rate_table")
                {
                    throw std::invalid_argument("not a numeric fitted parameter");
                }
                const auto colon = value.find(':');
                if (colon == std::string::npos)
                {
                    throw std::invalid_argument("expected lower:upper");
                }
                const double lo = ParseNumber(Trim(value.substr(0, colon)));
                const double hi = ParseNumber(Trim(value.substr(colon + 1)));
                if (!(lo > 0.0 && hi > lo))
                {
                    throw std::invalid_argument("bounds must satisfy 0 < lower < upper");
                }
                set.free.push_back({param, lo, hi});
                continue;
            }
            const auto dot = key.rfind('.');
            if (dot == std::string::npos)
            {
                throw std::invalid_argument("expected <target id>.<field>");
            }
            const std::string id = key.substr(0, dot);
            const std::string field = key.substr(dot + 1);
            if (std::find(known.begin(), known.end(), id) == known.end())
            {
                throw std::invalid_argument("unknown target id");
            }
            if (!byId.count(id))
            {
                order.push_back(id);
                byId[id].id = id;
            }
            CalibrationTarget& t = byId[id];
            if (field == "kind")
            {
                if (value == "ratio")
                {
                    t.kind = TargetKind::Ratio;
                }
                else if (value == "absolute")
                {
                    t.kind = TargetKind::Absolute;
                }
                else if (value == "boolean")
                {
                    t.kind = TargetKind::Boolean;
                }
                else
                {
                    throw std::invalid_argument("expected ratio, absolute or boolean");
                }
            }
            else if (field == "value")
            {
                t.value = value == "true" ? 1.0 : value == "false" ? 0.0 : ParseNumber(value);
            }
            else if (field == "tolerance")
            {
                t.tolerance = ParseNumber(value);
            }
            else if (field == "factor")
            {
                t.factor = ParseNumber(value);
            }
            else if (field == "bound")
            {
                if (value != "lower" && value != "none")
                {
                    throw std::invalid_argument("expected lower or none");
                }
                t.lowerBound = value == "lower";
            }
            else if (field == "description")
            {
                t.description = value;
            }
            else
            {
                throw std::invalid_argument("unknown field");
            }
        }
        catch (const std::invalid_argument& err)
        {
            issues.push_back({lineNo, key, err.what()});
        }
    }

    for (const std::string& id : order)
    {
        const CalibrationTarget& t = byId[id];
        if (t.kind != TargetKind::Boolean)
        {
            if (!(t.tolerance > 0.0 && t.tolerance < 1.0))
            {
                issues.push_back({0, id + ".tolerance", "must lie in (0, 1)"});
            }
            if (!(t.value > 0.0))
            {
                issues.push_back({0, id + ".value", "must be positive"});
            }
            if (t.factor && !(*t.factor > 1.0))
            {
                issues.push_back({0, id + ".factor", "must exceed 1"});
            }
        }
        set.targets.push_back(t);
    }
    if (set.targets.empty())
    {
        issues.push_back({0, "targets", "no targets given"});
    }
    if (!issues.empty())
    {
        throw ConfigError(std::move(issues));
    }
    return set;
}

EvalScale
DeskScale()
{
    return {};
}

EvalScale
SearchScale()
{
    EvalScale s;
    s.slotDuration = sim::Seconds(2.0);
    s.slots = 10;
    s.replications = 1;
    s.echoSlots = 10;
    s.echoReplications = 1;
    return s;
}

Achieved
Evaluate(const std::string& params, const std::set<std::string>& ids, const EvalScale& scale,
         const std::function<void(const std::string&)>& progress)
{
    auto wants = [&](const std::string& prefix) {
        return std::any_of(ids.begin(), ids.end(),
                           [&](const std::string& id) { return id.rfind(prefix, 0) == 0; });
    };
    auto run = [&](const char* scenario, Span span) {
        if (progress)
        {
            progress(scenario);
        }
        return RunFor(scenario, params, scale, span);
    };
    const Span partial = scale.endpointsOnly ? Span::Endpoints : Span::Full;

    Achieved out;
    for (const auto& [target, scenario] : kSweepTargets)
    {
        const std::string t = target;
        if (!wants(t + "-"))
        {
            continue;
        }
        const auto pts = run(scenario, partial);
        out[t + "-throughput"] = Ratio(pts.back().throughput, pts.front().throughput);
        out[t + "-per"] = Ratio(pts.back().per, pts.front().per);
    }

    std::vector<PointMetrics> farm;
    if (wants("T5-") || wants("T6-"))
    {
        farm = run("farm-los", wants("T6-") ? Span::Full : Span::First);
    }
    if (wants("T5-"))
    {
        const auto vitro = run("los-horizontal", Span::First);
        out["T5-throughput"] = Ratio(farm.front().throughput, vitro.front().throughput);
        out["T5-per"] = Ratio(farm.front().per, vitro.front().per);
    }
    if (wants("T6-"))
    {
        const auto plexi = run("farm-plexiglass", Span::Full);
        out["T6-throughput"] = Ratio(MeanOf(plexi, &PointMetrics::throughput),
                                     MeanOf(farm, &PointMetrics::throughput));
        out["T6-per"] = Ratio(MeanOf(plexi, &PointMetrics::per), MeanOf(farm, &PointMetrics::per));
    }
    if (wants("T7-"))
    {
        const auto pts = run("farm-nlos", Span::ChannelOnly);
        const bool allDown =
            std::none_of(pts.begin(), pts.end(), [](const PointMetrics& p) { return p.linkUp; });
        out["T7-link-down"] = allDown ? 1.0 : 0.0;
    }
    for (const auto& src : kRttSources)
    {
        const std::string p = src.prefix;
        if (!wants(p + "-"))
        {
            continue;
        }
        const auto pts = run(src.scenario, Span::Full);
        out[p + "-rtt"] = pts.front().rtt;
        out[p + "-peaks"] = pts.front().peaks;
    }
    return out;
}

std::vector<TargetReport>
Report(const std::vector<CalibrationTarget>& targets, const Achieved& achieved)
{
    std::vector<TargetReport> report;
    for (const auto& t : targets)
    {
        const auto it = achieved.find(t.id);
        const double a =
            it == achieved.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
        report.push_back({t, a, t.Passes(a)});
    }
    return report;
}

double
TotalLoss(const std::vector<CalibrationTarget>& targets, const Achieved& achieved)
{
    std::vector<double> terms;
    for (const auto& t : targets)
    {
        const auto it = achieved.find(t.id);
        terms.push_back(it == achieved.end() ? kUndefinedPenalty : t.Loss(it->second));
    }
    return metrics::CompensatedSum(terms);
}

void
WriteReport(std::ostream& out, const std::vector<TargetReport>& report)
{
    out << "target,achieved,value,tolerance,result\n";
    for (const auto& r : report)
    {
        std::string tol;
        if (r.target.kind == TargetKind::Boolean)
        {
            tol = "exact";
        }
        else if (r.target.factor)
        {
            tol = "x" + FormatNumber(*r.target.factor);
        }
        else
        {
            tol = (r.target.lowerBound ? ">=-" : "+-") + FormatNumber(r.target.tolerance);
        }
        out << r.target.id << ',' << FormatNumber(r.achieved) << ','
            << FormatNumber(r.target.value) << ',' << tol << ',' << (r.pass ? "PASS" : "FAIL")
            << '\n';
    }
}

bool
AllPass(const std::vector<TargetReport>& report)
{
    return std::all_of(report.begin(), report.end(), [](const TargetReport& r) { return r.pass; });
}

CalibrationResult
Calibrate(const TargetSet& set, const std::string& startParams, const CalibrationOptions& options)
{
    ScenarioConfig base;
    ApplyConfigText(base, startParams);

    std::set<std::string> ids;
    for (const auto& t : set.targets)
    {
        ids.insert(t.id);
    }

    std::vector<double> x;
    for (const auto& f : set.free)
    {
        x.push_back(std::clamp(ParseNumber(GetValue(base, f.key)), f.lower, f.upper));
    }

    CalibrationResult result;
    auto paramsFor = [&](const std::vector<double>& v) {
        ScenarioConfig c = base;
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            SetValue(c, set.free[i].key, FormatNumber(v[i]));
        }
        return SerializeParameters(c);
    };
    auto evaluate = [&](const std::vector<double>& v, Achieved& achieved) {
        ++result.evaluations;
        try
        {
            achieved = Evaluate(paramsFor(v), ids, options.scale);
        }
        catch (const std::exception&)
        {
            // Parameter combinations the model rejects are simply worse.
            achieved.clear();
            return std::numeric_limits<double>::infinity();
        }
        return TotalLoss(set.targets, achieved);
    };

    Achieved bestAchieved;
    double best = evaluate(x, bestAchieved);
    if (options.log)
    {
        *options.log << "start loss " << FormatNumber(best) << '\n';
    }

    double step = options.initialStep;
    while (step >= options.finalStep && result.evaluations < options.maxEvaluations)
    {
        bool improved = false;
        for (std::size_t i = 0; i < x.size() && result.evaluations < options.maxEvaluations; ++i)
        {
            for (double dir : {1.0, -1.0})
            {
                std::vector<double> trial = x;
                trial[i] = std::clamp(x[i] * std::exp(dir * step), set.free[i].lower,
                                      set.free[i].upper);
                if (trial[i] == x[i] || result.evaluations >= options.maxEvaluations)
                {
                    continue;
                }
                Achieved a;
                const double loss = evaluate(trial, a);
                if (loss < best)
                {
                    best = loss;
                    x = trial;
                    bestAchieved = std::move(a);
                    improved = true;
                    if (options.log)
                    {
                        *options.log << "eval " << result.evaluations << " step "
                                     << FormatNumber(step) << ' ' << set.free[i].key << " = "
                                     << FormatNumber(x[i]) << " loss " << FormatNumber(best)
                                     << '\n';
                    }
                    break;
                }
            }
        }
        if (!improved)
        {
            step /= 2.0;
        }
    }

    result.params = paramsFor(x);
    result.loss = best;
    result.achieved = std::move(bestAchieved);
    return result;
}

} // namespace owc::runner
