// Command-line frontend: scenario configs in, deterministic CSV/JSON out.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scenarios.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out = "out.csv";
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, const char* default_out) {
    args.out = default_out;
    cmd->add_option("--config", args.config_path, "flat key = value scenario file");
    cmd->add_option("--set", args.sets, "override a config key (key=value, repeatable)");
    cmd->add_option("--out", args.out, "output file path");
    cmd->add_option("--jobs", args.jobs, "parallel workers for grid evaluation");
}

} // namespace

int main(int argc, char** argv) {
    using namespace mtcav;
    using namespace mtcav::cli;

    CLI::App app{"mtcav: damped Tavis-Cummings spectra, cat decoherence, kink transport and the "
                 "SI estimate pipeline"};
    app.require_subcommand(1);

    CommonArgs spectrum_args, evolve_args, cat_args, soliton_args, estimate_args, sweep_args;
    bool check = false;
    std::string report_out = "report_merged.json";
    std::vector<std::string> report_inputs;

    CLI::App* c_spectrum = app.add_subcommand("spectrum", "analytic or numeric Im chi scan");
    add_common(c_spectrum, spectrum_args, "spectrum.csv");
    CLI::App* c_evolve = app.add_subcommand("evolve", "lindblad/secular/phase-damping time series");
    add_common(c_evolve, evolve_args, "evolve.csv");
    CLI::App* c_cat = app.add_subcommand("cat", "cat-state decoherence scaling experiment");
    add_common(c_cat, cat_args, "cat.csv");
    CLI::App* c_soliton = app.add_subcommand("soliton", "traveling-kink solve and profile export");
    add_common(c_soliton, soliton_args, "soliton.csv");
    CLI::App* c_estimate = app.add_subcommand("estimate", "full SI pipeline report");
    add_common(c_estimate, estimate_args, "estimate.json");
    c_estimate->add_flag("--check", check, "exit 4 unless every gate passes");
    CLI::App* c_sweep = app.add_subcommand("sweep", "grid over one numeric config key");
    add_common(c_sweep, sweep_args, "sweep.csv");
    CLI::App* c_report = app.add_subcommand("report", "merge sweep outputs and fit scaling laws");
    c_report->add_option("inputs", report_inputs, "CSV files produced by run/sweep");
    c_report->add_option("--out", report_out, "merged JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunResult result;
        if (c_spectrum->parsed()) {
            ConfigView cfg(load_config(spectrum_args.config_path, spectrum_args.sets));
            result = cmd_spectrum(std::move(cfg), spectrum_args.out, spectrum_args.jobs);
        } else if (c_evolve->parsed()) {
            ConfigView cfg(load_config(evolve_args.config_path, evolve_args.sets));
            result = cmd_evolve(std::move(cfg), evolve_args.out);
        } else if (c_cat->parsed()) {
            ConfigView cfg(load_config(cat_args.config_path, cat_args.sets));
            result = cmd_cat(std::move(cfg), cat_args.out);
        } else if (c_soliton->parsed()) {
            ConfigView cfg(load_config(soliton_args.config_path, soliton_args.sets));
            result = cmd_soliton(std::move(cfg), soliton_args.out);
        } else if (c_estimate->parsed()) {
            ConfigView cfg(load_config(estimate_args.config_path, estimate_args.sets));
            result = cmd_estimate(std::move(cfg), estimate_args.out, check);
        } else if (c_sweep->parsed()) {
            ConfigView cfg(load_config(sweep_args.config_path, sweep_args.sets));
            result = cmd_sweep(std::move(cfg), sweep_args.out, sweep_args.jobs);
        } else if (c_report->parsed()) {
            result = cmd_report(report_inputs, report_out);
        }
        std::cout << result.summary << "\n";
        return result.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
