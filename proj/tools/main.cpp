#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chernlab/errors.hpp"
#include "chernlab/zoo.hpp"
#include "config.hpp"
#include "experiment.hpp"
#include "verify.hpp"

namespace {

using namespace chernlab;
using namespace chernlab::cli;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string resolution;
    std::string format;
    std::string out;
    long seed = -1;
};

ConfigFile load_config(const Options& o) {
    ConfigFile cfg = o.config_path.empty() ? ConfigFile{} : ConfigFile::load(o.config_path);
    for (const auto& s : o.overrides) cfg.apply_override(s);
    if (!o.resolution.empty()) {
        const auto x = o.resolution.find('x');
        if (x == std::string::npos) throw ConfigError("--resolution expects NUxNV, got '" + o.resolution + "'", 0);
        cfg.set("quadrature", "n_u", o.resolution.substr(0, x));
        cfg.set("quadrature", "n_v", o.resolution.substr(x + 1));
    }
    if (!o.format.empty()) cfg.set("output", "format", o.format);
    if (!o.out.empty()) cfg.set("output", "path", o.out);
    if (o.seed >= 0) cfg.set("compare", "seed", std::to_string(o.seed));
    return cfg;
}

void emit(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + path + "'", 0);
    out << text;
}

int cmd_list(const Options& o) {
    const bool json = o.format == "json";
    std::string text = json ? "[\n" : "kind,expected_chern,reference_n_u,reference_n_v,domain\n";
    const auto& kinds = builtin_kinds();
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        const Surface s = make_surface(kinds[i]);
        const std::string chern = s.expected_chern ? std::to_string(*s.expected_chern) : "";
        const std::string domain = s.domain().is_rectangle()
                                       ? (s.domain().fully_periodic() ? "periodic rectangle" : "rectangle")
                                       : "geodesic polygon";
        if (json) {
            text += "  {\"kind\": \"" + kinds[i] + "\", \"expected_chern\": " + (chern.empty() ? "null" : chern) +
                    ", \"reference_n_u\": " + std::to_string(s.reference.n_u) +
                    ", \"reference_n_v\": " + std::to_string(s.reference.n_v) + ", \"domain\": \"" + domain + "\"}" +
                    (i + 1 < kinds.size() ? ",\n" : "\n");
        } else {
            text += kinds[i] + "," + chern + "," + std::to_string(s.reference.n_u) + "," +
                    std::to_string(s.reference.n_v) + "," + domain + "\n";
        }
    }
    if (json) text += "]\n";
    emit(text, o.out.empty() ? "-" : o.out);
    return kExitOk;
}

int cmd_chern(const Options& o, bool comparison) {
    const ExperimentConfig config = build_experiment(load_config(o));
    if (comparison && config.compare == CompareKind::none)
        throw ConfigError("compare needs a [compare] section (or --set compare.kind=...)", 0);
    if (!comparison && config.compare != CompareKind::none)
        throw ConfigError("the config has a [compare] section; use the compare subcommand", 0);
    const ReportRow row = run(config);
    emit(format_report(row, config.format), config.out_path);
    return row.flagged() ? kExitNotConverged : kExitOk;
}

int cmd_report(const Options& o) {
    ExperimentConfig config = build_experiment(load_config(o));
    config.compare = CompareKind::none;
    const ReportRow row = run(config);
    emit(format_grid(sample_grid(config), row, config.format), config.out_path);
    return row.flagged() ? kExitNotConverged : kExitOk;
}

int cmd_verify(const Options& o, int samples) {
    VerifyOptions v;
    if (o.seed >= 0) v.seed = static_cast<std::uint64_t>(o.seed);
    if (samples > 0) v.samples = samples;
    bool all = true;
    for (const SuiteResult& r : run_verify_suites(v)) {
        all = all && r.passed;
        std::printf("%s  %s  (worst error / tolerance = %.3g)%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.worst_ratio, r.detail.empty() ? "" : ": ", r.detail.c_str());
    }
    return all ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chern numbers and curvature identities of riemannian surfaces"};
    app.require_subcommand(1);
    Options o;
    int samples = 0;

    auto add_common = [&](CLI::App* sub, bool takes_config) {
        if (takes_config) {
            sub->add_option("config", o.config_path, "Experiment config file")->check(CLI::ExistingFile);
            sub->add_option("--set", o.overrides, "Override a config key: section.key=value");
            sub->add_option("--resolution", o.resolution, "Quadrature nodes NUxNV");
            sub->add_option("--seed", o.seed, "Perturbation seed");
        }
        sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", o.out, "Output path (default stdout)");
    };
    auto* list = app.add_subcommand("list", "List builtin surfaces");
    add_common(list, false);
    auto* chern = app.add_subcommand("chern", "First Chern number of one surface");
    add_common(chern, true);
    auto* compare = app.add_subcommand("compare", "Chern numbers of g and g' plus the Stokes residual of eta");
    add_common(compare, true);
    auto* report = app.add_subcommand("report", "Dump K sqrt(det g) over the sampling grid");
    add_common(report, true);
    auto* verify = app.add_subcommand("verify", "Run every invariant suite; exit 0 iff all pass");
    verify->add_option("--seed", o.seed, "Random seed for the property suites");
    verify->add_option("--samples", samples, "Random tensors per algebraic suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*list) return cmd_list(o);
        if (*chern) return cmd_chern(o, false);
        if (*compare) return cmd_chern(o, true);
        if (*report) return cmd_report(o);
        if (*verify) return cmd_verify(o, samples);
    } catch (const chernlab::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
