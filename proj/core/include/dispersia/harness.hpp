#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dispersia/integrators.hpp"
#include "dispersia/model.hpp"
#include "dispersia/spectral.hpp"

namespace dispersia {

// How errors are scaled before comparing across eps.
enum class Normalization {
    None,
    ErrorExponent,       // eps^beta with the log factor below, beta from expected_error_exponent
    RegularityExponent,  // eps^{1-(1+j)alpha/kappa}, or eps^{1-alpha}|ln eps| for j = kappa-1
    FixedPower,          // eps^fixedPower
};

// Logarithmic factor carried by the eps^{2-2alpha/kappa} branch of ErrorExponent.
enum class LogFactor {
    None,     // 1
    Caption,  // ln(1/eps) for kappa = 2, 1 otherwise
    Theorem,  // ln(1/eps) (ln(1/eps) + |ln tau|)^2 for kappa = 2, ln(1/eps) otherwise
};

struct SweepConfig {
    SolveConfig base;
    std::vector<double> epsilons{};
    std::vector<double> taus{};
    std::vector<StepperKind> schemes{StepperKind::ExponentialIntegrator};
    double referenceTau = 1e-4;
    // Scheme used for reference solutions; nullopt means each scheme is
    // measured against itself at referenceTau.
    std::optional<StepperKind> referenceScheme = StepperKind::ExponentialIntegrator;
    Normalization normalization = Normalization::ErrorExponent;
    LogFactor logFactor = LogFactor::Caption;
    double fixedPower = 0.0;
    int derivOrder = 0;
    unsigned workers = 1;
};

// Step size relative to the splitting threshold eps^{kappa-alpha}.
enum class StepRegime { NotApplicable, Resolved, Unresolved };

struct ErrorRecord {
    StepperKind scheme = StepperKind::ExponentialIntegrator;
    int kappa = 0;
    double alpha = 0.0;
    double epsilon = 0.0;
    double tau = 0.0;
    double zFinal = 0.0;
    int j = 0;
    double errorX = 0.0;
    double normalizer = 1.0;
    double normalizedError = 0.0;
    double wallTime = 0.0;  // seconds
    StepRegime regime = StepRegime::NotApplicable;
    std::string failure;    // empty on success

    bool ok() const noexcept { return failure.empty(); }
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rSquared = 0.0;
    std::size_t pointCount = 0;
};

// x_norm(a - b, j). Throws on grid mismatch.
double error_x(const SpectralField& a, const SpectralField& b, int j);

// Throws std::invalid_argument naming the offending field.
void validate(const SweepConfig& cfg);

// Normaliser for one sweep cell under cfg.normalization.
double normalizer(const SweepConfig& cfg, const DispersiveModel& model, double tau);

// ||d_x^j (mu(z) - exp(i z eps^a D) mu0)||_X per eps, with mu computed at
// referenceTau. One record per eps in input order.
std::vector<ErrorRecord> regularity_sweep(const SweepConfig& cfg);

// ||mu_ref(z) - mu_tau(z)||_X per (scheme, eps, tau), ordered by the input
// order of schemes, then epsilons, then taus.
std::vector<ErrorRecord> convergence_sweep(const SweepConfig& cfg);

// convergence_sweep over >= 2 schemes with each record's StepRegime set.
std::vector<ErrorRecord> compare_methods(const SweepConfig& cfg);

// Least squares line through (log x, log y). Requires >= 2 points with x, y > 0
// and at least two distinct x.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct GroupRate {
    std::string key;
    RateFit fit;
};

// Slope of errorX against tau for each (scheme, eps) group, and against eps for
// each (scheme, tau) group. Groups with fewer than two usable points are skipped.
std::vector<GroupRate> rates_vs_tau(std::span<const ErrorRecord> records);
std::vector<GroupRate> rates_vs_epsilon(std::span<const ErrorRecord> records);

struct ReferenceCheck {
    double errorAgainstReference = 0.0;
    double errorAgainstHalfReference = 0.0;
    double relativeDifference = 0.0;
};

// Compares the error of the finest tau against referenceTau and referenceTau / 2.
ReferenceCheck check_reference_convergence(const SweepConfig& cfg, StepperKind scheme,
                                           double epsilon);

// Runs body(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace dispersia
