#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tmsim/config.hpp"
#include "tmsim/io.hpp"
#include "tmsim/scenario.hpp"

namespace {

struct CommonOpts {
    std::string config;
    std::string out = ".";
    std::int64_t seed = -1;  // -1 = keep the scenario's seed
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory (created if missing)");
    cmd->add_option("--seed", o.seed, "override the scenario noise seed")
        ->check(CLI::NonNegativeNumber);
}

tmsim::Scenario load(const CommonOpts& o) {
    tmsim::Scenario sc = tmsim::load_scenario(o.config);
    if (o.seed >= 0) sc.seed = static_cast<std::uint64_t>(o.seed);
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lambda-system simulator for Tm:YAG under a magnetic field"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tmsim::kVersion);

    CommonOpts sweep_o, spectrum_o, nutation_o, echo_o, lifetime_o, fit_o;
    std::string fit_input, fit_model = "nutation";

    add_common(app.add_subcommand("sweep", "branching ratio vs field angle"), sweep_o);
    add_common(app.add_subcommand("spectrum", "hole-burning spectrum"), spectrum_o);
    add_common(app.add_subcommand("nutation", "nutation traces and density extraction"),
               nutation_o);
    add_common(app.add_subcommand("echo", "echo-intensity branching-ratio solve"), echo_o);
    add_common(app.add_subcommand("lifetime", "hole decay and lifetime fit"), lifetime_o);
    CLI::App* fit = app.add_subcommand("fit", "fit a model to an external CSV");
    add_common(fit, fit_o);
    fit->add_option("--input", fit_input, "two-column CSV to fit")
        ->required()
        ->check(CLI::ExistingFile);
    fit->add_option("--model", fit_model, "nutation | exponential");

    CLI11_PARSE(app, argc, argv);

    try {
        tmsim::RunFiles rf;
        std::string out_dir;
        if (app.got_subcommand("sweep")) {
            rf = tmsim::run_sweep(load(sweep_o));
            out_dir = sweep_o.out;
        } else if (app.got_subcommand("spectrum")) {
            rf = tmsim::run_spectrum(load(spectrum_o));
            out_dir = spectrum_o.out;
        } else if (app.got_subcommand("nutation")) {
            rf = tmsim::run_nutation(load(nutation_o));
            out_dir = nutation_o.out;
        } else if (app.got_subcommand("echo")) {
            rf = tmsim::run_echo(load(echo_o));
            out_dir = echo_o.out;
        } else if (app.got_subcommand("lifetime")) {
            rf = tmsim::run_lifetime(load(lifetime_o));
            out_dir = lifetime_o.out;
        } else {
            rf = tmsim::run_fit(load(fit_o), fit_input, fit_model);
            out_dir = fit_o.out;
        }
        tmsim::write_outputs(rf, out_dir);
        for (const auto& [name, content] : rf.files)
            std::cout << name << "  (" << content.size() << " bytes)\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
