#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
    using namespace dispersia::cli;

    CLI::App app{"Spectral solver laboratory for concentrated-potential dispersive equations"};
    app.require_subcommand(1);
    app.fallthrough();

    RunManifest m;
    std::string configPath;
    std::string presetName;
    std::string outDir = "out";
    std::uint64_t seed = 0;
    bool noTiming = false;
    auto& o = m.overrides;

    app.add_option("--config", configPath, "JSON config file (run.json files are accepted)");
    app.add_option("--out", outDir, "output directory")->capture_default_str();
    app.add_option("--workers", m.workers, "parallel sweep cells")
        ->envname("DISPERSIA_WORKERS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--emit-plots", m.emitPlotScript, "write plot.gp for gnuplot");
    app.add_option("--preset", presetName, "bundled parameter set");
    app.add_flag("--list-presets", "print preset names and exit");
    app.add_option("--epsilon", o.epsilons, "eps value(s), comma separated for sweeps")->delimiter(',');
    app.add_option("--tau", o.taus, "step size(s), comma separated for sweeps")->delimiter(',');
    app.add_option("--scheme", o.schemes, "EI, LT, Strang or LRI; comma separated for sweeps")
        ->delimiter(',');
    app.add_option("--kappa", o.kappa, "dispersion order");
    app.add_option("--alpha", o.alpha, "dispersion exponent");
    app.add_option("--beta", o.beta, "moment exponent (reduce-moment)");
    app.add_option("--sign", o.sign, "moment sign, + or - (reduce-moment)");
    app.add_option("--lambda", o.lambda, "moment parameter (reduce-moment)");
    app.add_option("--deriv-order", o.derivOrder, "derivative order j of the error norm");
    auto* seedOpt = app.add_option("--seed", seed, "seed for sampled phase points");
    app.add_flag("--no-timing", noTiming, "write walltime_s = 0 for byte-identical results");

    for (auto c : {Command::Solve, Command::SweepConvergence, Command::SweepRegularity,
                   Command::Compare, Command::ReduceMoment, Command::VerifyPhase}) {
        const std::string name(to_string(c));
        app.add_subcommand(name)->callback([&m, c] { m.command = c; });
    }

    if (argc >= 2 && std::string(argv[1]) == "--list-presets") {
        for (const auto& p : preset_names()) std::cout << p << '\n';
        return exit_code::ok;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code::config;
    }

    if (!configPath.empty()) m.configPath = configPath;
    if (!presetName.empty()) m.preset = presetName;
    if (*seedOpt) m.seed = seed;
    m.outDir = outDir;
    m.timing = !noTiming;
    return run(m, std::cout, std::cerr);
}
