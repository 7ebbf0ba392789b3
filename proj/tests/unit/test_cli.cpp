#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "config.hpp"

using namespace dispersia;
using namespace dispersia::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("dispersia_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const TempDir& dir, const Json& doc) {
    const auto p = dir.path() / "config.json";
    std::ofstream(p) << doc.dump(2);
    return p;
}

Json small_sweep_doc() {
    return {
        {"model", {{"kappa", 2}, {"alpha", 1.0}, {"epsilon", 0.0625}}},
        {"grid", {{"half_width", 16.0}, {"n", 512}}},
        {"z_final", 1.0},
        {"sweep",
         {{"epsilons", {0.0625, 0.125}},
          {"taus", {0.1, 0.05}},
          {"schemes", {"EI", "LT"}},
          {"reference_tau", 0.005},
          {"reference_scheme", "same"}}},
    };
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_manifest(const RunManifest& m) {
    std::ostringstream out, err;
    const int code = run(m, out, err);
    return {code, out.str(), err.str()};
}

std::string config_error_field(const Json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
    const RunConfig c;
    EXPECT_EQ(to_json(parse_config(to_json(c))), to_json(c));
}

TEST(Config, EveryPresetParsesAndRoundTrips) {
    const auto names = preset_names();
    EXPECT_GE(names.size(), 10u);
    for (const auto& name : names) {
        const auto c = parse_config(preset(name));
        EXPECT_EQ(to_json(parse_config(to_json(c))), to_json(c)) << name;
        EXPECT_LE(c.solve.grid.spacing(), c.solve.model.epsilon()) << name;
        for (double e : c.sweep.epsilons) EXPECT_LE(c.solve.grid.spacing(), e * (1 + 1e-12)) << name;
    }
    EXPECT_THROW(preset("no-such-preset"), ConfigError);
}

TEST(Config, ParsesSchema) {
    Json doc = small_sweep_doc();
    doc["potential"] = {{"type", "exp_abs"}, {"amplitude", -2.0}};
    doc["initial"] = {{"type", "plane_wave"}, {"xi0", 3.0}};
    doc["scheme"] = "strang";
    doc["moment"] = {{"kappa", 3}, {"beta", 2.0}, {"sign", "-"}, {"lambda", -1.5}};
    doc["phase"] = {{"c0", 4.0}, {"xi1_count", 20}, {"seed", 9}};
    doc["sweep"]["normalization"] = "fixed_power";
    doc["sweep"]["fixed_power"] = 1.5;
    doc["sweep"]["log_factor"] = "theorem";
    const auto c = parse_config(doc);
    EXPECT_EQ(c.solve.model, DispersiveModel::monomial(2, 1.0, 0.0625));
    EXPECT_EQ(c.solve.grid, Grid(16.0, 512));
    EXPECT_EQ(std::get<ExpAbsPotential>(c.solve.potential).amplitude, -2.0);
    EXPECT_EQ(std::get<PlaneWaveInitial>(c.solve.initial).xi0, 3.0);
    EXPECT_EQ(c.solve.scheme, StepperKind::Strang);
    EXPECT_EQ(c.sweep.taus, (std::vector<double>{0.1, 0.05}));
    EXPECT_FALSE(c.sweep.referenceScheme.has_value());
    EXPECT_EQ(c.normalization, Normalization::FixedPower);
    EXPECT_EQ(c.sweep.fixedPower, 1.5);
    EXPECT_EQ(c.sweep.logFactor, LogFactor::Theorem);
    EXPECT_EQ(c.moment.kappa, 3);
    EXPECT_EQ(c.moment.sign, MomentSign::Minus);
    EXPECT_EQ(c.moment.lambda, -1.5);
    EXPECT_EQ(c.phase.c0, 4.0);
    EXPECT_EQ(c.phase.samples.xi1Count, 20);
    EXPECT_EQ(c.phase.samples.seed, 9u);

    Json spacing = {{"grid", {{"half_width", 8.0}, {"max_spacing", 0.01}}}};
    EXPECT_EQ(parse_config(spacing).solve.grid, Grid(8.0, 2048));
}

TEST(Config, ErrorsNameTheField) {
    EXPECT_EQ(config_error_field({{"bogus", 1}}), "bogus");
    EXPECT_EQ(config_error_field({{"sweep", {{"taus", {0.1, "x"}}}}}), "sweep.taus[1]");
    EXPECT_EQ(config_error_field({{"scheme", "rk4"}}), "scheme");
    EXPECT_EQ(config_error_field({{"model", {{"alpha", -1.0}}}}).rfind("model", 0), 0u);
    EXPECT_EQ(config_error_field({{"potential", {{"type", "square"}}}}), "potential.type");
    EXPECT_EQ(config_error_field({{"moment", {{"sign", "*"}}}}), "moment.sign");
    EXPECT_EQ(config_error_field({{"grid", {{"n", 64}, {"max_spacing", 0.1}}}}), "grid.max_spacing");
}

TEST(Config, ResolutionOrder) {
    TempDir dir;
    RunManifest m;
    m.command = Command::SweepConvergence;
    m.preset = "schrodinger-a1";
    m.configPath = write_config(dir, {{"sweep", {{"taus", {0.5}}}}});
    m.overrides.alpha = 0.5;
    const auto c = resolve_config(m);
    EXPECT_EQ(c.sweep.taus, (std::vector<double>{0.5}));
    EXPECT_EQ(c.solve.model.alpha(), 0.5);
    EXPECT_EQ(c.sweep.base.model.alpha(), 0.5);
    EXPECT_EQ(c.sweep.normalization, Normalization::ErrorExponent);
    m.command = Command::SweepRegularity;
    EXPECT_EQ(resolve_config(m).sweep.normalization, Normalization::RegularityExponent);
}

TEST(Run, SweepWritesFilesAndIsDeterministic) {
    TempDir dir;
    RunManifest m;
    m.command = Command::SweepConvergence;
    m.configPath = write_config(dir, small_sweep_doc());
    m.outDir = dir.path() / "a";
    m.timing = false;
    m.emitPlotScript = true;
    const auto first = run_manifest(m);
    ASSERT_EQ(first.code, exit_code::ok) << first.err;
    for (const char* f : {"results.csv", "rates.csv", "run.json", "plot.gp"}) {
        EXPECT_TRUE(fs::exists(m.outDir / f)) << f;
    }
    EXPECT_NE(first.out.find("8 of 8 cells succeeded"), std::string::npos);

    // Replaying the written run.json reproduces the tables byte for byte.
    RunManifest replay = m;
    replay.configPath = m.outDir / "run.json";
    replay.outDir = dir.path() / "b";
    ASSERT_EQ(run_manifest(replay).code, exit_code::ok);
    EXPECT_EQ(slurp(m.outDir / "results.csv"), slurp(replay.outDir / "results.csv"));
    EXPECT_EQ(slurp(m.outDir / "rates.csv"), slurp(replay.outDir / "rates.csv"));
}

TEST(Run, CompareWritesRegimes) {
    TempDir dir;
    RunManifest m;
    m.command = Command::Compare;
    m.configPath = write_config(dir, small_sweep_doc());
    m.outDir = dir.path();
    ASSERT_EQ(run_manifest(m).code, exit_code::ok);
    EXPECT_TRUE(fs::exists(dir.path() / "regimes.csv"));
}

TEST(Run, SolvePreservesNormWithoutPotential) {
    TempDir dir;
    RunManifest m;
    m.command = Command::Solve;
    m.preset = "free-schrodinger";
    m.outDir = dir.path();
    ASSERT_EQ(run_manifest(m).code, exit_code::ok);
    const auto summary = Json::parse(slurp(dir.path() / "summary.json"));
    EXPECT_NEAR(summary["x_norm_final"].get<double>(), summary["x_norm_initial"].get<double>(), 1e-12);
    EXPECT_TRUE(fs::exists(dir.path() / "final_state.csv"));
}

TEST(Run, ReduceMomentOutput) {
    TempDir dir;
    RunManifest m;
    m.command = Command::ReduceMoment;
    m.outDir = dir.path();
    m.overrides.kappa = 2;
    m.overrides.beta = 1.0;
    m.overrides.sign = "+";
    m.overrides.lambda = 1.0;
    ASSERT_EQ(run_manifest(m).code, exit_code::ok);
    const auto doc = Json::parse(slurp(dir.path() / "reduced.json"));
    EXPECT_EQ(doc["alpha"].get<double>(), 1.0);
    EXPECT_EQ(doc["c"]["0"].get<double>(), 0.5);
    EXPECT_EQ(doc["c"]["2"].get<double>(), 2.0);
    EXPECT_EQ(doc["signFactor"].get<int>(), 1);

    m.overrides.sign = "-";
    m.overrides.lambda = 0.0;
    EXPECT_EQ(run_manifest(m).code, exit_code::config);
}

TEST(Run, VerifyPhaseSearchesC0) {
    TempDir dir;
    RunManifest m;
    m.command = Command::VerifyPhase;
    m.preset = "kdv-a1";
    m.outDir = dir.path();
    m.configPath = write_config(dir, {{"phase", {{"xi1_count", 60}, {"xi2_count", 60}}}});
    ASSERT_EQ(run_manifest(m).code, exit_code::ok);
    const auto doc = Json::parse(slurp(dir.path() / "phase.json"));
    EXPECT_GT(doc["minRatio"].get<double>(), 0.0);
}

TEST(Run, ExitCodes) {
    TempDir dir;
    RunManifest m;
    m.command = Command::SweepConvergence;
    m.outDir = dir.path();

    m.preset = "no-such-preset";
    auto r = run_manifest(m);
    EXPECT_EQ(r.code, exit_code::config);
    EXPECT_NE(r.err.find("preset"), std::string::npos);

    m.preset.reset();
    Json bad = small_sweep_doc();
    bad["sweep"]["taus"] = {0.3};
    m.configPath = write_config(dir, bad);
    r = run_manifest(m);
    EXPECT_EQ(r.code, exit_code::config);
    EXPECT_NE(r.err.find("taus"), std::string::npos);

    m.configPath = dir.path() / "missing.json";
    EXPECT_EQ(run_manifest(m).code, exit_code::config);

    Json blowUp = small_sweep_doc();
    blowUp["potential"] = {{"type", "gaussian"}, {"amplitude", 800.0}, {"width_sq", 8.0}};
    blowUp["sweep"]["schemes"] = {"LT"};
    blowUp["scheme"] = "LT";
    m.configPath = write_config(dir, blowUp);
    r = run_manifest(m);
    EXPECT_EQ(r.code, exit_code::numerical);
    EXPECT_NE(r.err.find("non-finite"), std::string::npos);

    RunManifest solve;
    solve.command = Command::Solve;
    solve.outDir = dir.path();
    solve.configPath = write_config(dir, blowUp);
    solve.overrides.taus = {0.1};
    EXPECT_EQ(run_manifest(solve).code, exit_code::numerical);
    solve.overrides.taus = {0.3};
    EXPECT_EQ(run_manifest(solve).code, exit_code::config);
}
