#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dispersia/harness.hpp"
#include "dispersia/integrators.hpp"
#include "dispersia/model.hpp"

namespace dispersia::cli {

using Json = nlohmann::json;

// Invalid configuration. field() is a dotted path such as "sweep.taus[2]".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct MomentRequest {
    int kappa = 2;
    double beta = 1.0;
    MomentSign sign = MomentSign::Plus;
    double lambda = 1.0;
};

struct PhaseRequest {
    PhaseSampleSpec samples;
    std::optional<double> c0;  // searched when unset
    double maxC0 = 1024.0;
};

// Everything a run can read from a config file. sweep.base mirrors solve.
struct RunConfig {
    SolveConfig solve{DispersiveModel::monomial(2, 1.0, 1.0 / 64), GaussianPotential{},
                      GaussianInitial{}, Grid(16.0, 8192)};
    SweepConfig sweep{solve};
    // Unset means the command picks: RegularityExponent for sweep-regularity,
    // ErrorExponent otherwise.
    std::optional<Normalization> normalization;
    MomentRequest moment;
    PhaseRequest phase;
};

// Parses the documented schema; unknown keys are rejected. Keys that are
// absent keep the defaults of `base`.
RunConfig parse_config(const Json& doc, RunConfig base = {});

// Full resolved form; parse_config(to_json(c)) == c.
Json to_json(const RunConfig& config);

// Bundled parameter sets, as config documents.
std::vector<std::string> preset_names();
Json preset(std::string_view name);  // throws ConfigError("preset", ...) when unknown

std::string_view to_string(Normalization n) noexcept;
std::string_view to_string(LogFactor f) noexcept;
std::string_view to_string(MomentSign s) noexcept;
std::optional<MomentSign> parse_sign(std::string_view text);

}  // namespace dispersia::cli
