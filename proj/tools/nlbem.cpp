// nlbem: run simulations, convergence studies and property checks.
//
//   nlbem run      [--config FILE] [--set key=value]... [--output DIR]
//   nlbem converge --axis time|space [--config FILE] [--set key=value]...
//   nlbem verify   [--suite NAME]... [--report FILE] [--seed N]
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <cstdio>
#include <fstream>

#include <CLI11.hpp>

#include "nlbem/experiment.hpp"
#include "nlbem/verify.hpp"

using namespace nlbem;

namespace {

ExperimentConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides,
                                const std::string& output)
{
    nlohmann::json j = nlohmann::json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in)
            throw ValidationError("cannot open config file " + path);
        try {
            j = nlohmann::json::parse(in);
        }
        catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("config file " + path + ": " + e.what());
        }
    }
    for (const std::string& o : overrides)
        apply_override(j, o);
    if (!output.empty())
        j["output_dir"] = output;
    return config_from_json(j);
}

}// namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time domain boundary element solver with power law impedance"};
    app.require_subcommand(1);

    std::string config_path, output, axis_name = "time", report_path;
    std::vector<std::string> overrides, suites;
    std::uint64_t seed = VerifyOptions{}.seed;

    CLI::App* run = app.add_subcommand("run", "simulate and write fields.csv and densities.csv");
    run->add_option("-c,--config", config_path, "JSON experiment manifest");
    run->add_option("-s,--set", overrides, "override a config key, e.g. --set wave.t0=2");
    run->add_option("-o,--output", output, "output directory (overrides output_dir)");

    CLI::App* conv = app.add_subcommand("converge", "self convergence study against a reference run");
    conv->add_option("-c,--config", config_path, "JSON experiment manifest");
    conv->add_option("-s,--set", overrides, "override a config key");
    conv->add_option("-o,--output", output, "output directory (overrides output_dir)");
    conv->add_option("-a,--axis", axis_name, "time or space")->check(CLI::IsMember({"time", "space"}));

    CLI::App* ver = app.add_subcommand("verify", "run the property suites, JSON report");
    ver->add_option("--suite", suites, "suite name (repeatable; default all)");
    ver->add_option("-r,--report", report_path, "write the JSON report here instead of stdout");
    ver->add_option("--seed", seed, "seed of the random samples");
    ver->add_flag_callback("--list", [] {
        for (const std::string& s : verify_suite_names())
            std::printf("%s\n", s.c_str());
        std::exit(0);
    }, "list the suites");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (ver->parsed()) {
        VerifyOptions opt;
        opt.seed = seed;
        return cmd_verify(suites, opt, report_path);
    }
    ExperimentConfig cfg;
    try {
        cfg = resolve_config(config_path, overrides, output);
    }
    catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    }
    if (run->parsed())
        return cmd_run(cfg);
    return cmd_converge(cfg, axis_from_string(axis_name));
}
