// Command-line front end: run, list, calibrate, verify.

#include "owc/runner/builtins.h"
#include "owc/runner/calibrate.h"
#include "owc/runner/run.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

using namespace owc::runner;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCalibration = 3;

constexpr const char* kOutEnv = "OWC_OUT_DIR";

std::string
ReadFile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void
WriteFile(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
    {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out)
    {
        throw OutputError("cannot write " + path.string());
    }
}

std::string
DefaultOutDir()
{
    const char* env = std::getenv(kOutEnv);
    return env && *env ? env : "results";
}

struct Common
{
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> slots;
    std::optional<std::size_t> replications;
    std::string out;
    std::string paramsFile;

    std::string Params() const
    {
        return paramsFile.empty() ? ShippedParameters() : ReadFile(paramsFile);
    }
};

void
AddCommon(CLI::App* cmd, Common& c)
{
    cmd->add_option("--seed", c.seed, "Base seed (64-bit)");
    cmd->add_option("--slots", c.slots, "Slots per replication")->check(CLI::PositiveNumber);
    cmd->add_option("--replications", c.replications, "Replication count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out,
                    std::string("Output directory (default $") + kOutEnv + " or ./results)");
    cmd->add_option("--params", c.paramsFile, "Fitted parameter file (default: shipped fit)")
        ->check(CLI::ExistingFile);
}

void
PrintIssues(const ConfigError& e)
{
    for (const auto& i : e.Issues())
    {
        std::cerr << "error: ";
        if (i.line)
        {
            std::cerr << "line " << i.line << ": ";
        }
        std::cerr << i.field << ": " << i.reason << '\n';
    }
}

int
CmdList()
{
    for (const auto& b : BuiltinScenarios())
    {
        const auto cfg = ParseConfig(b.text);
        std::cout << b.id << "\t" << cfg.description << '\n';
    }
    return kExitOk;
}

int
CmdRun(const std::string& target, const Common& c, bool trace, bool paperScale)
{
    ScenarioConfig cfg;
    const std::string params = c.Params();
    if (std::filesystem::is_regular_file(target))
    {
        cfg = ParseConfig(ReadFile(target), params);
    }
    else if (auto b = LoadBuiltin(target, params))
    {
        cfg = *b;
    }
    else
    {
        std::cerr << "error: '" << target << "' is neither a config file nor a builtin scenario\n";
        return kExitValidation;
    }

    RunOptions opts;
    opts.seed = c.seed;
    opts.slots = c.slots;
    opts.replications = c.replications;
    opts.paperScale = paperScale;
    cfg = ApplyOptions(cfg, opts);

    const std::filesystem::path dir = c.out.empty() ? DefaultOutDir() : c.out;
    std::ofstream traceOut;
    if (trace)
    {
        std::filesystem::create_directories(dir);
        const auto path = dir / (cfg.name + ".trace");
        traceOut.open(path, std::ios::binary | std::ios::trunc);
        if (!traceOut)
        {
            throw OutputError("cannot write " + path.string());
        }
    }

    const ScenarioResult result = RunScenario(cfg, trace ? &traceOut : nullptr);
    for (const auto& path : EmitResults(result, dir))
    {
        std::cout << path.string() << '\n';
    }
    if (trace)
    {
        traceOut.close();
        std::cout << (dir / (cfg.name + ".trace")).string() << '\n';
    }
    for (const auto& p : result.points)
    {
        if (p.linkDown)
        {
            std::cout << PointId(cfg, p.sweepValue) << ": link_down\n";
        }
    }
    return kExitOk;
}

std::set<std::string>
IdsOf(const TargetSet& set)
{
    std::set<std::string> ids;
    for (const auto& t : set.targets)
    {
        ids.insert(t.id);
    }
    return ids;
}

EvalScale
ScaleFrom(const Common& c)
{
    EvalScale scale = DeskScale();
    if (c.slots)
    {
        scale.slots = *c.slots;
        scale.echoSlots = *c.slots;
    }
    if (c.replications)
    {
        scale.replications = *c.replications;
        scale.echoReplications = *c.replications;
    }
    if (c.seed)
    {
        scale.seed = *c.seed;
    }
    return scale;
}

int
VerifyAndReport(const TargetSet& set, const std::string& params, const EvalScale& scale,
                const std::filesystem::path& reportPath)
{
    const auto achieved = Evaluate(params, IdsOf(set), scale, [](const std::string& s) {
        std::cerr << "running " << s << '\n';
    });
    const auto report = Report(set.targets, achieved);
    std::ostringstream text;
    WriteReport(text, report);
    std::cout << text.str();
    if (!reportPath.empty())
    {
        WriteFile(reportPath, text.str());
    }
    if (!AllPass(report))
    {
        std::cerr << "calibration targets not met\n";
        return kExitCalibration;
    }
    return kExitOk;
}

int
CmdCalibrate(const std::string& targetsFile, const Common& c, std::size_t budget, bool skipVerify)
{
    const TargetSet set = ParseTargets(ReadFile(targetsFile));
    const std::filesystem::path dir = c.out.empty() ? DefaultOutDir() : c.out;

    CalibrationOptions opts;
    opts.maxEvaluations = budget;
    opts.log = &std::cerr;
    if (c.seed)
    {
        opts.scale.seed = *c.seed;
    }
    const CalibrationResult fit = Calibrate(set, c.Params(), opts);
    std::cerr << "evaluations " << fit.evaluations << " loss " << FormatNumber(fit.loss) << '\n';

    const auto paramsPath = dir / "fitted-params.conf";
    WriteFile(paramsPath, "# written by owc-sim calibrate\n" + fit.params);
    std::cout << paramsPath.string() << '\n';

    if (skipVerify)
    {
        const auto report = Report(set.targets, fit.achieved);
        WriteReport(std::cout, report);
        return AllPass(report) ? kExitOk : kExitCalibration;
    }
    return VerifyAndReport(set, fit.params, ScaleFrom(c), dir / "calibration-report.csv");
}

int
CmdVerify(const std::string& targetsFile, const Common& c)
{
    const TargetSet set =
        ParseTargets(targetsFile.empty() ? ShippedTargets() : ReadFile(targetsFile));
    const std::filesystem::path dir = c.out.empty() ? DefaultOutDir() : c.out;
    return VerifyAndReport(set, c.Params(), ScaleFrom(c), dir / "verify-report.csv");
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Packet-level simulator of an optical wireless tele-operation link"};
    app.require_subcommand(1);

    Common common;
    bool trace = false;
    bool paperScale = false;
    std::string runTarget;
    std::string targetsFile;
    std::size_t budget = 300;
    bool skipVerify = false;

    app.add_subcommand("list", "List builtin scenarios");

    auto* run = app.add_subcommand("run", "Run a config file or builtin scenario");
    run->add_option("scenario", runTarget, "Config file path or builtin id")->required();
    AddCommon(run, common);
    run->add_flag("--trace", trace, "Write the event trace next to the results");
    run->add_flag("--paper-scale", paperScale, "10-minute slots, 27 per replication");

    auto* cal = app.add_subcommand("calibrate", "Fit the free parameters to a targets file");
    cal->add_option("targets", targetsFile, "Targets file")->required()->check(CLI::ExistingFile);
    AddCommon(cal, common);
    cal->add_option("--budget", budget, "Maximum number of evaluations")
        ->check(CLI::PositiveNumber);
    cal->add_flag("--skip-verify", skipVerify, "Report search-scale values only");

    auto* ver = app.add_subcommand("verify", "Re-check the shipped fit at desk scale");
    ver->add_option("--targets", targetsFile, "Targets file (default: shipped targets)")
        ->check(CLI::ExistingFile);
    AddCommon(ver, common);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try
    {
        if (app.got_subcommand("list"))
        {
            return CmdList();
        }
        if (app.got_subcommand("run"))
        {
            return CmdRun(runTarget, common, trace, paperScale);
        }
        if (app.got_subcommand("calibrate"))
        {
            return CmdCalibrate(targetsFile, common, budget, skipVerify);
        }
        return CmdVerify(targetsFile, common);
    }
    catch (const ConfigError& e)
    {
        PrintIssues(e);
        return kExitValidation;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
