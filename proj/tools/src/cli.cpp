#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dispersia/diagnostics.hpp"

namespace dispersia::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class OutputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw OutputError("cannot write " + path.string());
    return f;
}

void write_json(const fs::path& path, const Json& doc) {
    auto f = open_out(path);
    f << doc.dump(2) << '\n';
}

Json read_json_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("--config", "cannot open " + path.string());
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ConfigError("--config", path.string() + ": " + e.what());
    }
}

double single(const std::vector<double>& values, const char* flag, Command cmd) {
    if (values.size() != 1) {
        throw ConfigError(flag, std::string(to_string(cmd)) + " takes a single value");
    }
    return values.front();
}

StepperKind scheme_flag(const std::string& name) {
    const auto s = parse_stepper(name);
    if (!s) throw ConfigError("--scheme", "unknown scheme '" + name + "'");
    return *s;
}

void apply_overrides(const RunManifest& m, RunConfig& cfg) {
    const auto& o = m.overrides;
    auto& model = cfg.solve.model;
    const bool sweep = m.command == Command::SweepConvergence ||
                       m.command == Command::SweepRegularity || m.command == Command::Compare;
    try {
        if (o.kappa) {
            if (m.command == Command::ReduceMoment) {
                cfg.moment.kappa = *o.kappa;
            } else if (*o.kappa != model.kappa()) {
                model = DispersiveModel::monomial(*o.kappa, model.alpha(), model.epsilon());
            }
        }
        if (o.alpha) model = model.with_alpha(*o.alpha);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(o.alpha ? "--alpha" : "--kappa", e.what());
    }
    if (!o.epsilons.empty()) {
        if (sweep) {
            cfg.sweep.epsilons = o.epsilons;
        } else {
            try {
                model = model.with_epsilon(single(o.epsilons, "--epsilon", m.command));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("--epsilon", e.what());
            }
        }
    }
    if (!o.taus.empty()) {
        if (sweep) {
            cfg.sweep.taus = o.taus;
        } else {
            cfg.solve.tau = single(o.taus, "--tau", m.command);
        }
    }
    if (!o.schemes.empty()) {
        if (sweep) {
            cfg.sweep.schemes.clear();
            for (const auto& s : o.schemes) cfg.sweep.schemes.push_back(scheme_flag(s));
        } else {
            if (o.schemes.size() != 1) throw ConfigError("--scheme", "solve takes a single scheme");
            cfg.solve.scheme = scheme_flag(o.schemes.front());
        }
    }
    if (o.beta) cfg.moment.beta = *o.beta;
    if (o.lambda) cfg.moment.lambda = *o.lambda;
    if (o.sign) {
        const auto s = parse_sign(*o.sign);
        if (!s) throw ConfigError("--sign", "expected '+' or '-'");
        cfg.moment.sign = *s;
    }
    if (o.derivOrder) {
        if (*o.derivOrder < 0) throw ConfigError("--deriv-order", "must be >= 0");
        cfg.sweep.derivOrder = *o.derivOrder;
    }
    if (m.seed) cfg.phase.samples.seed = *m.seed;
    if (!(cfg.solve.tau > 0.0)) throw ConfigError("--tau", "must be positive");
}

// ---------------------------------------------------------------------------

void write_results(const fs::path& path, const std::vector<ErrorRecord>& records, bool timing) {
    auto f = open_out(path);
    f << "scheme,kappa,alpha,epsilon,tau,z_final,j,error_x,normalized_error,walltime_s\n";
    for (const auto& r : records) {
        f << dispersia::to_string(r.scheme) << ',' << r.kappa << ',' << num(r.alpha) << ','
          << num(r.epsilon) << ',' << num(r.tau) << ',' << num(r.zFinal) << ',' << r.j << ','
          << num(r.errorX) << ',' << num(r.normalizedError) << ','
          << num(timing ? r.wallTime : 0.0) << '\n';
    }
}

std::vector<GroupRate> all_rates(const std::vector<ErrorRecord>& records) {
    auto rates = rates_vs_tau(records);
    auto eps = rates_vs_epsilon(records);
    rates.insert(rates.end(), eps.begin(), eps.end());
    return rates;
}

void write_rates(const fs::path& path, const std::vector<GroupRate>& rates) {
    auto f = open_out(path);
    f << "group,slope,r_squared\n";
    for (const auto& g : rates) f << g.key << ',' << num(g.fit.slope) << ',' << num(g.fit.rSquared) << '\n';
}

void write_regimes(const fs::path& path, const std::vector<ErrorRecord>& records) {
    auto f = open_out(path);
    f << "scheme,epsilon,tau,threshold,regime\n";
    for (const auto& r : records) {
        const char* regime = r.regime == StepRegime::Resolved     ? "resolved"
                             : r.regime == StepRegime::Unresolved ? "unresolved"
                                                                  : "n/a";
        f << dispersia::to_string(r.scheme) << ',' << num(r.epsilon) << ',' << num(r.tau) << ','
          << num(std::pow(r.epsilon, r.kappa - r.alpha)) << ',' << regime << '\n';
    }
}

// Rows are grouped contiguously by (scheme, eps) for convergence runs, so each
// curve is a fixed row range.
void write_plot_script(const fs::path& path, const RunConfig& cfg, Command cmd) {
    auto f = open_out(path);
    f << "# gnuplot script; run from this directory\n"
      << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set key outside right\n";
    if (cmd == Command::SweepRegularity) {
        f << "set xlabel 'epsilon'\nset ylabel 'error_x'\n"
          << "plot 'results.csv' skip 1 using 4:8 with linespoints title 'j = "
          << cfg.sweep.derivOrder << "'\n";
        return;
    }
    f << "set xlabel 'tau'\nset ylabel 'normalized error'\n";
    const std::size_t nt = cfg.sweep.taus.size();
    std::size_t block = 0;
    f << "plot \\\n";
    const std::size_t total = cfg.sweep.schemes.size() * cfg.sweep.epsilons.size();
    for (auto s : cfg.sweep.schemes) {
        for (double e : cfg.sweep.epsilons) {
            const std::size_t first = block * nt;
            f << "  'results.csv' skip 1 every ::" << first << "::" << first + nt - 1
              << " using 5:9 with linespoints title '" << dispersia::to_string(s)
              << " eps=" << short_num(e) << "'" << (++block < total ? ", \\\n" : "\n");
        }
    }
}

Json manifest_json(const RunManifest& m, const RunConfig& cfg) {
    Json j = {
        {"command", std::string(to_string(m.command))},
        {"workers", m.workers},
        {"emit_plots", m.emitPlotScript},
        {"timing", m.timing},
        {"seed", cfg.phase.samples.seed},
    };
    j["preset"] = m.preset ? Json(*m.preset) : Json(nullptr);
    j["config_path"] = m.configPath ? Json(m.configPath->string()) : Json(nullptr);
    return j;
}

void write_run_json(const RunManifest& m, const RunConfig& cfg) {
    Json doc = to_json(cfg);
    doc["manifest"] = manifest_json(m, cfg);
    write_json(m.outDir / "run.json", doc);
}

// ---------------------------------------------------------------------------

int run_solve(const RunManifest& m, const RunConfig& cfg, std::ostream& out) {
    try {
        step_count(cfg.solve.zFinal, cfg.solve.tau);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("tau", e.what());
    }
    const auto sol = solve(cfg.solve);
    const auto mu0 = sample_initial(cfg.solve.initial, cfg.solve.grid);
    const auto& grid = cfg.solve.grid;
    {
        auto f = open_out(m.outDir / "final_state.csv");
        f << "x,re,im\n";
        const auto v = sol.final.values();
        for (std::size_t j = 0; j < v.size(); ++j) {
            f << num(grid.node(j)) << ',' << num(v[j].real()) << ',' << num(v[j].imag()) << '\n';
        }
    }
    if (!sol.snapshots.empty()) {
        auto f = open_out(m.outDir / "snapshots.csv");
        f << "z,x,re,im\n";
        for (const auto& s : sol.snapshots) {
            const auto v = s.field.values();
            for (std::size_t j = 0; j < v.size(); ++j) {
                f << num(s.z) << ',' << num(grid.node(j)) << ',' << num(v[j].real()) << ','
                  << num(v[j].imag()) << '\n';
            }
        }
    }
    const Json summary = {
        {"steps", sol.steps},
        {"z_final", cfg.solve.zFinal},
        {"x_norm_initial", x_norm(mu0, 0)},
        {"x_norm_final", x_norm(sol.final, 0)},
        {"l2_norm_initial", l2_norm(mu0)},
        {"l2_norm_final", l2_norm(sol.final)},
    };
    write_json(m.outDir / "summary.json", summary);
    write_run_json(m, cfg);
    out << "solve: " << sol.steps << " steps of " << dispersia::to_string(cfg.solve.scheme)
        << ", ||mu(z)||_X = " << short_num(summary["x_norm_final"].get<double>()) << '\n';
    return exit_code::ok;
}

int run_sweep(const RunManifest& m, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<ErrorRecord> records;
    switch (m.command) {
        case Command::SweepRegularity: records = regularity_sweep(cfg.sweep); break;
        case Command::Compare: records = compare_methods(cfg.sweep); break;
        default: records = convergence_sweep(cfg.sweep); break;
    }
    const auto rates = all_rates(records);
    write_results(m.outDir / "results.csv", records, m.timing);
    write_rates(m.outDir / "rates.csv", rates);
    if (m.command == Command::Compare) write_regimes(m.outDir / "regimes.csv", records);
    if (m.emitPlotScript) write_plot_script(m.outDir / "plot.gp", cfg, m.command);
    write_run_json(m, cfg);

    for (const auto& g : rates) {
        out << g.key << "  slope " << short_num(g.fit.slope) << "  r^2 " << short_num(g.fit.rSquared)
            << '\n';
    }
    int failures = 0;
    for (const auto& r : records) {
        if (!r.ok()) {
            err << "error: " << r.failure << '\n';
            ++failures;
        }
    }
    out << records.size() - failures << " of " << records.size() << " cells succeeded\n";
    return failures ? exit_code::numerical : exit_code::ok;
}

int run_reduce(const RunManifest& m, const RunConfig& cfg, std::ostream& out) {
    const auto& q = cfg.moment;
    ReducedModel r;
    try {
        r = reduce_moment(q.kappa, q.beta, q.sign, q.lambda);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("moment", e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError("moment", e.what());
    }
    Json c = Json::object();
    if (r.droppedConstant) c["0"] = *r.droppedConstant;
    for (const auto& [power, value] : r.coeffs) c[std::to_string(power)] = value;
    Json doc = {
        {"kappa", r.kappa},
        {"beta", r.beta},
        {"sign", std::string(to_string(q.sign))},
        {"lambda", q.lambda},
        {"alpha", r.alpha},
        {"c", c},
        {"signFactor", r.signFactor},
        {"droppedConstant", r.droppedConstant ? Json(*r.droppedConstant) : Json(nullptr)},
        {"parity", r.parity == Parity::EvenPowers ? "even" : "odd"},
    };
    try {
        const auto scaled = to_dispersive_model(r, cfg.solve.model.epsilon());
        doc["rescaled"] = {
            {"kappa", scaled.model.kappa()},
            {"alpha", scaled.model.alpha()},
            {"coeffs", std::vector<double>(scaled.model.coeffs().begin(), scaled.model.coeffs().end())},
            {"zScale", scaled.zScale},
            {"potentialScale", scaled.potentialScale},
            {"orientation", scaled.orientation},
        };
    } catch (const std::domain_error&) {
        doc["rescaled"] = nullptr;
    }
    write_json(m.outDir / "reduced.json", doc);
    write_run_json(m, cfg);
    out << doc.dump() << '\n';
    return exit_code::ok;
}

int run_phase(const RunManifest& m, const RunConfig& cfg, std::ostream& out) {
    const auto& p = cfg.phase;
    const auto& model = cfg.solve.model;
    double c0 = 0.0;
    double floor = 0.0;
    PhaseBoundReport report;
    try {
        if (p.c0) {
            c0 = *p.c0;
            report = verify_phase_lower_bound(model, c0, p.samples);
        } else {
            const auto s = search_phase_constant(model, p.samples, p.maxC0);
            c0 = s.c0;
            floor = s.floor;
            report = s.report;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("phase", e.what());
    }
    const Json doc = {
        {"kappa", model.kappa()},
        {"alpha", model.alpha()},
        {"epsilon", model.epsilon()},
        {"coeffs", std::vector<double>(model.coeffs().begin(), model.coeffs().end())},
        {"c0", c0},
        {"searched", !p.c0.has_value()},
        {"floor", p.c0 ? Json(nullptr) : Json(floor)},
        {"minRatio", report.minRatio},
        {"worstPoint", {{"xi1", report.worstPoint.xi1}, {"xi2", report.worstPoint.xi2}}},
        {"scored", report.scored},
        {"filtered", report.filtered},
        {"degenerate", report.degenerate},
        {"holds", report.minRatio > 0.0},
    };
    write_json(m.outDir / "phase.json", doc);
    write_run_json(m, cfg);
    out << "verify-phase: C0 = " << short_num(c0) << ", min ratio = " << short_num(report.minRatio)
        << " over " << report.scored << " samples\n";
    return exit_code::ok;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::SweepConvergence: return "sweep-convergence";
        case Command::SweepRegularity: return "sweep-regularity";
        case Command::Compare: return "compare";
        case Command::ReduceMoment: return "reduce-moment";
        case Command::VerifyPhase: return "verify-phase";
    }
    return "?";
}

std::optional<Command> parse_command(std::string_view name) {
    for (auto c : {Command::Solve, Command::SweepConvergence, Command::SweepRegularity,
                   Command::Compare, Command::ReduceMoment, Command::VerifyPhase}) {
        if (name == to_string(c)) return c;
    }
    return std::nullopt;
}

RunConfig resolve_config(const RunManifest& m) {
    RunConfig cfg;
    if (m.preset) cfg = parse_config(preset(*m.preset), cfg);
    if (m.configPath) cfg = parse_config(read_json_file(*m.configPath), cfg);
    apply_overrides(m, cfg);
    if (!cfg.normalization) {
        cfg.normalization = m.command == Command::SweepRegularity ? Normalization::RegularityExponent
                                                                  : Normalization::ErrorExponent;
    }
    cfg.sweep.normalization = *cfg.normalization;
    cfg.sweep.workers = m.workers;
    cfg.sweep.base = cfg.solve;
    return cfg;
}

int run(const RunManifest& m, std::ostream& out, std::ostream& err) {
    try {
        if (m.workers < 1) throw ConfigError("--workers", "must be >= 1");
        const RunConfig cfg = resolve_config(m);
        std::error_code ec;
        fs::create_directories(m.outDir, ec);
        if (ec) throw ConfigError("--out", "cannot create " + m.outDir.string() + ": " + ec.message());
        switch (m.command) {
            case Command::Solve: return run_solve(m, cfg, out);
            case Command::SweepConvergence:
            case Command::SweepRegularity:
            case Command::Compare: return run_sweep(m, cfg, out, err);
            case Command::ReduceMoment: return run_reduce(m, cfg, out);
            case Command::VerifyPhase: return run_phase(m, cfg, out);
        }
        return exit_code::ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const OutputError& e) {
        err << "config error: --out: " << e.what() << '\n';
        return exit_code::config;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_code::numerical;
    } catch (const std::invalid_argument& e) {
        // Validation inside the library: mesh resolution, step counts, sweep fields.
        err << "config error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_code::numerical;
    }
}

}  // namespace dispersia::cli
