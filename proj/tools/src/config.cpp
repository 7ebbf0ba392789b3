#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>

namespace dispersia::cli {

namespace {

std::string at(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void only_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError(at(path, key), "unknown key");
    }
}

double number(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
}

long long integer(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<long long>();
}

std::string text(const Json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const Json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], index(path, i)));
    return out;
}

template <class T, class F>
void read(const Json& obj, const char* key, const std::string& path, T& target, F convert) {
    if (auto it = obj.find(key); it != obj.end()) target = convert(*it, at(path, key));
}

StepperKind scheme_of(const Json& v, const std::string& path) {
    const auto s = parse_stepper(text(v, path));
    if (!s) throw ConfigError(path, "unknown scheme '" + v.get<std::string>() + "'");
    return *s;
}

// ---------------------------------------------------------------------------

DispersiveModel parse_model(const Json& obj, const DispersiveModel& base) {
    const std::string path = "model";
    only_keys(obj, path, {"kappa", "alpha", "epsilon", "coeffs"});
    int kappa = base.kappa();
    double alpha = base.alpha();
    double epsilon = base.epsilon();
    read(obj, "kappa", path, kappa,
         [](const Json& v, const std::string& p) { return static_cast<int>(integer(v, p)); });
    read(obj, "alpha", path, alpha, number);
    read(obj, "epsilon", path, epsilon, number);
    try {
        std::vector<double> coeffs;
        if (auto it = obj.find("coeffs"); it != obj.end()) {
            coeffs = numbers(*it, at(path, "coeffs"));
        } else if (kappa == base.kappa()) {
            coeffs.assign(base.coeffs().begin(), base.coeffs().end());
        } else {
            const auto mono = DispersiveModel::monomial(kappa, alpha, epsilon);
            coeffs.assign(mono.coeffs().begin(), mono.coeffs().end());
        }
        return DispersiveModel(kappa, coeffs, alpha, epsilon);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

PotentialSpec parse_potential(const Json& obj) {
    const std::string path = "potential";
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    const auto type = obj.contains("type") ? text(obj["type"], at(path, "type")) : "gaussian";
    if (type == "gaussian") {
        only_keys(obj, path, {"type", "amplitude", "width_sq"});
        GaussianPotential g;
        read(obj, "amplitude", path, g.amplitude, number);
        read(obj, "width_sq", path, g.widthSq, number);
        if (!(g.widthSq > 0.0)) throw ConfigError(at(path, "width_sq"), "must be positive");
        return g;
    }
    if (type == "exp_abs") {
        only_keys(obj, path, {"type", "amplitude"});
        ExpAbsPotential p;
        read(obj, "amplitude", path, p.amplitude, number);
        return p;
    }
    if (type == "zero") {
        only_keys(obj, path, {"type"});
        return GaussianPotential{0.0, 8.0};
    }
    if (type == "tabulated") {
        only_keys(obj, path, {"type", "x_min", "dx", "values"});
        TabulatedPotential t;
        read(obj, "x_min", path, t.xMin, number);
        read(obj, "dx", path, t.dx, number);
        read(obj, "values", path, t.values, numbers);
        if (!(t.dx > 0.0)) throw ConfigError(at(path, "dx"), "must be positive");
        if (t.values.size() < 2) throw ConfigError(at(path, "values"), "need at least two samples");
        return t;
    }
    throw ConfigError(at(path, "type"), "unknown potential type '" + type + "'");
}

InitialDataSpec parse_initial(const Json& obj) {
    const std::string path = "initial";
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    const auto type = obj.contains("type") ? text(obj["type"], at(path, "type")) : "gaussian";
    if (type == "gaussian") {
        only_keys(obj, path, {"type"});
        return GaussianInitial{};
    }
    if (type == "plane_wave") {
        only_keys(obj, path, {"type", "xi0"});
        PlaneWaveInitial p;
        read(obj, "xi0", path, p.xi0, number);
        return p;
    }
    if (type == "tabulated") {
        only_keys(obj, path, {"type", "x_min", "dx", "re", "im"});
        TabulatedInitial t;
        std::vector<double> re, im;
        read(obj, "x_min", path, t.xMin, number);
        read(obj, "dx", path, t.dx, number);
        read(obj, "re", path, re, numbers);
        read(obj, "im", path, im, numbers);
        if (!(t.dx > 0.0)) throw ConfigError(at(path, "dx"), "must be positive");
        if (im.empty()) im.assign(re.size(), 0.0);
        if (re.size() != im.size()) throw ConfigError(at(path, "im"), "length differs from re");
        if (re.size() < 2) throw ConfigError(at(path, "re"), "need at least two samples");
        for (std::size_t i = 0; i < re.size(); ++i) t.values.emplace_back(re[i], im[i]);
        return t;
    }
    throw ConfigError(at(path, "type"), "unknown initial data type '" + type + "'");
}

Grid parse_grid(const Json& obj, const Grid& base) {
    const std::string path = "grid";
    only_keys(obj, path, {"half_width", "n", "max_spacing"});
    if (obj.contains("n") && obj.contains("max_spacing")) {
        throw ConfigError(at(path, "max_spacing"), "give either n or max_spacing, not both");
    }
    double halfWidth = base.half_width();
    read(obj, "half_width", path, halfWidth, number);
    try {
        if (obj.contains("max_spacing")) {
            return Grid::with_max_spacing(halfWidth, number(obj["max_spacing"], at(path, "max_spacing")));
        }
        std::size_t n = base.size();
        read(obj, "n", path, n, [](const Json& v, const std::string& p) {
            const auto i = integer(v, p);
            if (i <= 0) throw ConfigError(p, "must be positive");
            return static_cast<std::size_t>(i);
        });
        return Grid(halfWidth, n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

Normalization parse_normalization(const Json& v, const std::string& path) {
    const auto s = text(v, path);
    if (s == "none") return Normalization::None;
    if (s == "error_exponent") return Normalization::ErrorExponent;
    if (s == "regularity_exponent") return Normalization::RegularityExponent;
    if (s == "fixed_power") return Normalization::FixedPower;
    throw ConfigError(path, "unknown normalization '" + s + "'");
}

LogFactor parse_log_factor(const Json& v, const std::string& path) {
    const auto s = text(v, path);
    if (s == "none") return LogFactor::None;
    if (s == "caption") return LogFactor::Caption;
    if (s == "theorem") return LogFactor::Theorem;
    throw ConfigError(path, "unknown log factor '" + s + "'");
}

void parse_sweep(const Json& obj, RunConfig& cfg) {
    const std::string path = "sweep";
    only_keys(obj, path,
              {"epsilons", "taus", "schemes", "reference_tau", "reference_scheme", "normalization",
               "log_factor", "fixed_power", "deriv_order"});
    auto& s = cfg.sweep;
    read(obj, "epsilons", path, s.epsilons, numbers);
    read(obj, "taus", path, s.taus, numbers);
    if (auto it = obj.find("schemes"); it != obj.end()) {
        const auto p = at(path, "schemes");
        if (!it->is_array()) throw ConfigError(p, "expected an array of scheme names");
        s.schemes.clear();
        for (std::size_t i = 0; i < it->size(); ++i) s.schemes.push_back(scheme_of((*it)[i], index(p, i)));
    }
    read(obj, "reference_tau", path, s.referenceTau, number);
    if (auto it = obj.find("reference_scheme"); it != obj.end()) {
        const auto p = at(path, "reference_scheme");
        if (it->is_string() && it->get<std::string>() == "same") {
            s.referenceScheme = std::nullopt;
        } else {
            s.referenceScheme = scheme_of(*it, p);
        }
    }
    if (auto it = obj.find("normalization"); it != obj.end()) {
        cfg.normalization = parse_normalization(*it, at(path, "normalization"));
    }
    read(obj, "log_factor", path, s.logFactor, parse_log_factor);
    read(obj, "fixed_power", path, s.fixedPower, number);
    read(obj, "deriv_order", path, s.derivOrder, [](const Json& v, const std::string& p) {
        const auto i = integer(v, p);
        if (i < 0) throw ConfigError(p, "must be >= 0");
        return static_cast<int>(i);
    });
}

void parse_moment(const Json& obj, MomentRequest& m) {
    const std::string path = "moment";
    only_keys(obj, path, {"kappa", "beta", "sign", "lambda"});
    read(obj, "kappa", path, m.kappa,
         [](const Json& v, const std::string& p) { return static_cast<int>(integer(v, p)); });
    read(obj, "beta", path, m.beta, number);
    read(obj, "lambda", path, m.lambda, number);
    if (auto it = obj.find("sign"); it != obj.end()) {
        const auto s = parse_sign(text(*it, at(path, "sign")));
        if (!s) throw ConfigError(at(path, "sign"), "expected '+' or '-'");
        m.sign = *s;
    }
}

void parse_phase(const Json& obj, PhaseRequest& p) {
    const std::string path = "phase";
    only_keys(obj, path,
              {"c0", "max_c0", "xi1_min", "xi1_max", "xi2_min", "xi2_max", "xi1_count", "xi2_count",
               "random_count", "seed"});
    auto count = [](const Json& v, const std::string& q) {
        const auto i = integer(v, q);
        if (i < 0) throw ConfigError(q, "must be >= 0");
        return static_cast<int>(i);
    };
    if (auto it = obj.find("c0"); it != obj.end()) {
        if (it->is_null()) {
            p.c0 = std::nullopt;
        } else {
            p.c0 = number(*it, at(path, "c0"));
        }
    }
    read(obj, "max_c0", path, p.maxC0, number);
    read(obj, "xi1_min", path, p.samples.xi1Min, number);
    read(obj, "xi1_max", path, p.samples.xi1Max, number);
    read(obj, "xi2_min", path, p.samples.xi2Min, number);
    read(obj, "xi2_max", path, p.samples.xi2Max, number);
    read(obj, "xi1_count", path, p.samples.xi1Count, count);
    read(obj, "xi2_count", path, p.samples.xi2Count, count);
    read(obj, "random_count", path, p.samples.randomCount, count);
    read(obj, "seed", path, p.samples.seed, [](const Json& v, const std::string& q) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(q, "expected a non-negative integer");
        return v.get<std::uint64_t>();
    });
}

// ---------------------------------------------------------------------------

Json potential_json(const PotentialSpec& spec) {
    return std::visit(
        [](const auto& p) -> Json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianPotential>) {
                return {{"type", "gaussian"}, {"amplitude", p.amplitude}, {"width_sq", p.widthSq}};
            } else if constexpr (std::is_same_v<T, ExpAbsPotential>) {
                return {{"type", "exp_abs"}, {"amplitude", p.amplitude}};
            } else {
                return {{"type", "tabulated"}, {"x_min", p.xMin}, {"dx", p.dx}, {"values", p.values}};
            }
        },
        spec);
}

Json initial_json(const InitialDataSpec& spec) {
    return std::visit(
        [](const auto& p) -> Json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, GaussianInitial>) {
                return {{"type", "gaussian"}};
            } else if constexpr (std::is_same_v<T, PlaneWaveInitial>) {
                return {{"type", "plane_wave"}, {"xi0", p.xi0}};
            } else {
                std::vector<double> re, im;
                for (const auto& v : p.values) {
                    re.push_back(v.real());
                    im.push_back(v.imag());
                }
                return {{"type", "tabulated"}, {"x_min", p.xMin}, {"dx", p.dx}, {"re", re}, {"im", im}};
            }
        },
        spec);
}

Json schemes_json(const std::vector<StepperKind>& schemes) {
    Json out = Json::array();
    for (auto s : schemes) out.push_back(std::string(dispersia::to_string(s)));
    return out;
}

// ---------------------------------------------------------------------------

struct PresetDef {
    const char* name;
    int kappa;
    double alpha;
    bool freeFlow;
};

constexpr PresetDef kPresets[] = {
    {"schrodinger-a1/2", 2, 0.5, false},  {"schrodinger-a2/3", 2, 2.0 / 3.0, false},
    {"schrodinger-a3/4", 2, 0.75, false}, {"schrodinger-a1", 2, 1.0, false},
    {"schrodinger-a4/3", 2, 4.0 / 3.0, false},
    {"kdv-a0", 3, 0.0, false},            {"kdv-a3/4", 3, 0.75, false},
    {"kdv-a1", 3, 1.0, false},            {"kdv-a3/2", 3, 1.5, false},
    {"kdv-a2", 3, 2.0, false},
    {"free-schrodinger", 2, 1.0, true},   {"free-kdv", 3, 1.0, true},
};

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Normalization n) noexcept {
    switch (n) {
        case Normalization::None: return "none";
        case Normalization::ErrorExponent: return "error_exponent";
        case Normalization::RegularityExponent: return "regularity_exponent";
        case Normalization::FixedPower: return "fixed_power";
    }
    return "?";
}

std::string_view to_string(LogFactor f) noexcept {
    switch (f) {
        case LogFactor::None: return "none";
        case LogFactor::Caption: return "caption";
        case LogFactor::Theorem: return "theorem";
    }
    return "?";
}

std::string_view to_string(MomentSign s) noexcept { return s == MomentSign::Plus ? "+" : "-"; }

std::optional<MomentSign> parse_sign(std::string_view text) {
    if (text == "+" || text == "plus") return MomentSign::Plus;
    if (text == "-" || text == "minus") return MomentSign::Minus;
    return std::nullopt;
}

RunConfig parse_config(const Json& doc, RunConfig cfg) {
    only_keys(doc, "",
              {"model", "potential", "initial", "grid", "tau", "z_final", "scheme", "snapshot_stride",
               "sweep", "moment", "phase", "manifest", "description"});
    auto& s = cfg.solve;
    if (doc.contains("model")) s.model = parse_model(doc["model"], s.model);
    if (doc.contains("potential")) s.potential = parse_potential(doc["potential"]);
    if (doc.contains("initial")) s.initial = parse_initial(doc["initial"]);
    if (doc.contains("grid")) s.grid = parse_grid(doc["grid"], s.grid);
    read(doc, "tau", "", s.tau, number);
    read(doc, "z_final", "", s.zFinal, number);
    if (doc.contains("scheme")) s.scheme = scheme_of(doc["scheme"], "scheme");
    read(doc, "snapshot_stride", "", s.snapshotStride, [](const Json& v, const std::string& p) {
        const auto i = integer(v, p);
        if (i < 0) throw ConfigError(p, "must be >= 0");
        return static_cast<std::size_t>(i);
    });
    if (doc.contains("sweep")) parse_sweep(doc["sweep"], cfg);
    if (doc.contains("moment")) parse_moment(doc["moment"], cfg.moment);
    if (doc.contains("phase")) parse_phase(doc["phase"], cfg.phase);
    if (!(s.tau > 0.0)) throw ConfigError("tau", "must be positive");
    if (!(s.zFinal >= 0.0)) throw ConfigError("z_final", "must be >= 0");
    cfg.sweep.base = s;
    return cfg;
}

Json to_json(const RunConfig& c) {
    const auto& s = c.solve;
    const auto& m = s.model;
    Json sweep = {
        {"epsilons", c.sweep.epsilons},
        {"taus", c.sweep.taus},
        {"schemes", schemes_json(c.sweep.schemes)},
        {"reference_tau", c.sweep.referenceTau},
        {"reference_scheme", c.sweep.referenceScheme
                                 ? std::string(dispersia::to_string(*c.sweep.referenceScheme))
                                 : std::string("same")},
        {"log_factor", std::string(to_string(c.sweep.logFactor))},
        {"fixed_power", c.sweep.fixedPower},
        {"deriv_order", c.sweep.derivOrder},
    };
    if (c.normalization) sweep["normalization"] = std::string(to_string(*c.normalization));
    const auto& ps = c.phase.samples;
    return {
        {"model",
         {{"kappa", m.kappa()},
          {"alpha", m.alpha()},
          {"epsilon", m.epsilon()},
          {"coeffs", std::vector<double>(m.coeffs().begin(), m.coeffs().end())}}},
        {"potential", potential_json(s.potential)},
        {"initial", initial_json(s.initial)},
        {"grid", {{"half_width", s.grid.half_width()}, {"n", s.grid.size()}}},
        {"tau", s.tau},
        {"z_final", s.zFinal},
        {"scheme", std::string(dispersia::to_string(s.scheme))},
        {"snapshot_stride", s.snapshotStride},
        {"sweep", sweep},
        {"moment",
         {{"kappa", c.moment.kappa},
          {"beta", c.moment.beta},
          {"sign", std::string(to_string(c.moment.sign))},
          {"lambda", c.moment.lambda}}},
        {"phase",
         {{"c0", c.phase.c0 ? Json(*c.phase.c0) : Json(nullptr)},
          {"max_c0", c.phase.maxC0},
          {"xi1_min", ps.xi1Min},
          {"xi1_max", ps.xi1Max},
          {"xi2_min", ps.xi2Min},
          {"xi2_max", ps.xi2Max},
          {"xi1_count", ps.xi1Count},
          {"xi2_count", ps.xi2Count},
          {"random_count", ps.randomCount},
          {"seed", ps.seed}}},
    };
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

Json preset(std::string_view name) {
    const auto it = std::find_if(std::begin(kPresets), std::end(kPresets),
                                 [&](const PresetDef& p) { return name == p.name; });
    if (it == std::end(kPresets)) {
        throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
    }
    const bool schrodinger = it->kappa == 2;
    Json potential;
    if (it->freeFlow) {
        potential = {{"type", "zero"}};
    } else if (schrodinger) {
        potential = {{"type", "gaussian"}, {"amplitude", -1.0}, {"width_sq", 8.0}};
    } else {
        potential = {{"type", "exp_abs"}, {"amplitude", -1.0}};
    }
    return {
        {"description", std::string(name)},
        {"model", {{"kappa", it->kappa}, {"alpha", it->alpha}, {"epsilon", 1.0 / 64}}},
        {"potential", potential},
        {"initial", {{"type", "gaussian"}}},
        // h = 2^-8 resolves eps down to 2^-8 on either domain.
        {"grid", {{"half_width", schrodinger ? 16.0 : 32.0}, {"n", schrodinger ? 8192 : 16384}}},
        {"tau", 1e-2},
        {"z_final", 1.0},
        {"scheme", "EI"},
        {"sweep",
         {{"epsilons", {1.0 / 256, 1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16}},
          {"taus", {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1}},
          {"schemes", {"EI"}},
          {"reference_tau", 1e-4},
          {"reference_scheme", "EI"}}},
        {"moment", {{"kappa", it->kappa}, {"beta", 1.0}, {"sign", "+"}, {"lambda", 1.0}}},
    };
}

}  // namespace dispersia::cli
