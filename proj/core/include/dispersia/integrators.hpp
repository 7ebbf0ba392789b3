#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dispersia/model.hpp"
#include "dispersia/spectral.hpp"

namespace dispersia {

enum class StepperKind { ExponentialIntegrator, LieTrotter, Strang, LowRegularityIntegrator };

// Short names: "EI", "LT", "Strang", "LRI".
std::string_view to_string(StepperKind kind) noexcept;
// Accepts the short names (case-insensitive) and the long enumerator spellings.
std::optional<StepperKind> parse_stepper(std::string_view name);

// Per-step constants for one scheme and step size. Members that the scheme
// does not use stay empty.
struct PrecomputedStep {
    StepperKind scheme = StepperKind::ExponentialIntegrator;
    double tau = 0.0;
    Grid grid;
    FourierSymbol fullFlow;                      // exp(-i tau eps^a P(xi))
    std::optional<FourierSymbol> halfFlow;       // Strang
    std::optional<FourierSymbol> phi1Symbol;     // EI: phi1(-i tau eps^a P(xi))
    std::vector<Complex> potentialExp;           // LT, Strang: exp(tau R_eps)
    std::vector<Complex> filteredPotential;      // LRI: phi1(-i tau eps^a D) R_eps
    std::vector<double> rawPotential;            // R_eps on the nodes
};

struct SolveConfig {
    DispersiveModel model;
    PotentialSpec potential;
    InitialDataSpec initial;
    Grid grid;
    double tau = 1e-2;
    double zFinal = 1.0;
    StepperKind scheme = StepperKind::ExponentialIntegrator;
    std::size_t snapshotStride = 0;
};

// Number of steps zFinal / tau. Throws std::invalid_argument when tau <= 0,
// zFinal < 0, or zFinal / tau is not an integer (relative slack 1e-9).
std::size_t step_count(double zFinal, double tau);

PrecomputedStep precompute(const SolveConfig& config);

// Same as above without the SolveConfig checks; tau may be negative (used for
// adjoint checks).
PrecomputedStep precompute(const DispersiveModel& model, const PotentialSpec& potential,
                           const Grid& grid, double tau, StepperKind scheme);

// (phi1(-i tau eps^{a-k} Dtilde) R)(x / eps) evaluated on the eps-scaled grid
// (L / eps, n), with Dtilde = -sum_j d_{k-2j} eps^{2j} (-i d_x)^{k-2j}.
// Equals PrecomputedStep::filteredPotential for the LRI.
std::vector<Complex> rescaled_filtered_potential(const DispersiveModel& model,
                                                 const PotentialSpec& potential,
                                                 const Grid& grid, double tau);

// Reusable workspace for advancing one state in place.
class Stepper {
public:
    explicit Stepper(const PrecomputedStep& pre);

    // One step of pre.scheme applied in place.
    void advance(std::span<Complex> state);

private:
    void advance_ei(std::span<Complex> state);
    void advance_lt(std::span<Complex> state);
    void advance_strang(std::span<Complex> state);
    void advance_lri(std::span<Complex> state);
    void multiply_in_frequency(std::span<Complex> state, std::span<const Complex> symbol);

    const PrecomputedStep* pre_;
    std::vector<Complex> a_;
    std::vector<Complex> b_;
};

SpectralField step_ei(const SpectralField& state, const PrecomputedStep& pre);
SpectralField step_lt(const SpectralField& state, const PrecomputedStep& pre);
SpectralField step_strang(const SpectralField& state, const PrecomputedStep& pre);
SpectralField step_lri(const SpectralField& state, const PrecomputedStep& pre);
// Dispatches on pre.scheme.
SpectralField step(const SpectralField& state, const PrecomputedStep& pre);

struct Snapshot {
    double z = 0.0;
    SpectralField field;
};

struct Solution {
    SpectralField final;
    std::vector<Snapshot> snapshots;
    std::size_t steps = 0;
};

// Runs zFinal / tau steps from the sampled initial data. Snapshots at z = 0 and
// every snapshotStride steps when the stride is nonzero. Throws
// NumericalFailure when the state stops being finite.
Solution solve(const SolveConfig& config);

}  // namespace dispersia
