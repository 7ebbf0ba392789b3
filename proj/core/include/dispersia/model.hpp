#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dispersia {

// Continuous model  d_z mu = i eps^alpha D mu + R(x/eps) mu  with D = -P(-i d_x).
//
// P(y) = sum_{0 <= 2j < kappa} d_{kappa-2j} y^{kappa-2j}, leading coefficient 1.
// Coefficients are indexed by j: coeffs()[0] = d_kappa = 1, coeffs()[1] = d_{kappa-2}, ...
class DispersiveModel {
public:
    DispersiveModel(int kappa, std::vector<double> coeffs, double alpha, double epsilon);

    // P(y) = y^kappa.
    static DispersiveModel monomial(int kappa, double alpha, double epsilon);

    int kappa() const noexcept { return kappa_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double alpha() const noexcept { return alpha_; }
    double epsilon() const noexcept { return epsilon_; }
    bool even() const noexcept { return kappa_ % 2 == 0; }

    // d_power, zero when the power does not carry the model's parity.
    double coefficient_of_power(int power) const noexcept;

    // eps^alpha
    double dispersion_strength() const;

    DispersiveModel with_epsilon(double epsilon) const;
    DispersiveModel with_alpha(double alpha) const;

    friend bool operator==(const DispersiveModel&, const DispersiveModel&) = default;

private:
    int kappa_;
    std::vector<double> coeffs_;
    double alpha_;
    double epsilon_;
};

// Number of parity-matching powers in P: ceil(kappa / 2).
int coefficient_count(int kappa) noexcept;

// ---------------------------------------------------------------------------
// Potentials and initial data

struct GaussianPotential {
    double amplitude = -1.0;
    double widthSq = 8.0;  // R(x) = amplitude * exp(-x^2 / widthSq)
    friend bool operator==(const GaussianPotential&, const GaussianPotential&) = default;
};

struct ExpAbsPotential {
    double amplitude = -1.0;  // R(x) = amplitude * exp(-|x|)
    friend bool operator==(const ExpAbsPotential&, const ExpAbsPotential&) = default;
};

// Samples of R on the uniform grid xMin + i*dx; linear interpolation inside,
// zero outside.
struct TabulatedPotential {
    double xMin = 0.0;
    double dx = 1.0;
    std::vector<double> values;
    friend bool operator==(const TabulatedPotential&, const TabulatedPotential&) = default;
};

using PotentialSpec = std::variant<GaussianPotential, ExpAbsPotential, TabulatedPotential>;

double evaluate(const PotentialSpec& spec, double x);
// True when R vanishes identically.
bool is_zero(const PotentialSpec& spec);

struct GaussianInitial {
    friend bool operator==(const GaussianInitial&, const GaussianInitial&) = default;
};  // mu0(x) = exp(-x^2 / 2)

struct PlaneWaveInitial {
    double xi0 = 0.0;  // mu0(x) = exp(i xi0 x)
    friend bool operator==(const PlaneWaveInitial&, const PlaneWaveInitial&) = default;
};

struct TabulatedInitial {
    double xMin = 0.0;
    double dx = 1.0;
    std::vector<std::complex<double>> values;
    friend bool operator==(const TabulatedInitial&, const TabulatedInitial&) = default;
};

using InitialDataSpec = std::variant<GaussianInitial, PlaneWaveInitial, TabulatedInitial>;

std::complex<double> evaluate(const InitialDataSpec& spec, double x);

// ---------------------------------------------------------------------------
// Dispersion polynomial and oscillatory phase

// P(y) in nested form: y^{parity} * H(y^2).
double eval_P(const DispersiveModel& model, double y);

// Phi(xi1, xi2) = eps^alpha (P(xi1/eps + xi2) - P(xi2)), evaluated directly.
double eval_phase(const DispersiveModel& model, double xi1, double xi2);

// Binomial polynomial Q_r(x, y); Q_1 = 1. Throws std::invalid_argument for r < 1.
double eval_Q(int r, double x, double y);

// Phi through the factorisation in (xi1, xi1 + 2 eps xi2).
double eval_phase_factored(const DispersiveModel& model, double xi1, double xi2);

// Rectangular (xi1, xi2) sample set. The grid part is a tensor linspace
// including endpoints; randomCount extra points are drawn uniformly from the
// same box with the given seed.
struct PhaseSampleSpec {
    double xi1Min = -8.0;
    double xi1Max = 8.0;
    double xi2Min = -8.0;
    double xi2Max = 8.0;
    int xi1Count = 400;
    int xi2Count = 400;
    int randomCount = 0;
    std::uint64_t seed = 0;
};

struct PhasePoint {
    double xi1 = 0.0;
    double xi2 = 0.0;
};

struct PhaseBoundReport {
    double minRatio = 0.0;
    PhasePoint worstPoint;
    std::size_t scored = 0;      // admissible samples with a nonzero denominator
    std::size_t filtered = 0;    // samples outside {|xi1| >= C0 eps or |xi1 + 2 eps xi2| >= C0 eps}
    std::size_t degenerate = 0;  // admissible samples where both sides vanish
};

// Minimum over admissible samples of
//   |eps^{kappa-alpha} Phi| / (|xi1 eta^s| (|xi1|^{kappa-1-s} + |eta|^{kappa-1-s}))
// with eta = xi1 + 2 eps xi2 and s = 1 for even kappa, 0 for odd kappa.
// Throws std::invalid_argument if C0 <= 0 or no sample is scored.
PhaseBoundReport verify_phase_lower_bound(const DispersiveModel& model, double c0,
                                          const PhaseSampleSpec& samples);

struct PhaseConstantSearch {
    double c0 = 0.0;
    double floor = 0.0;
    PhaseBoundReport report;
};

// Default C0 for a coefficient family. C0 runs over 1, 2, 4, ..., maxC0 and the
// first value whose sampled minimum ratio reaches half of the pure-monomial
// minimum (same kappa, same samples, C0 = 1) is returned. Throws
// std::runtime_error when maxC0 is exhausted.
PhaseConstantSearch search_phase_constant(const DispersiveModel& model,
                                          const PhaseSampleSpec& samples,
                                          double maxC0 = 1024.0);

// (g(y) - g(x)) / (y^kappa - x^kappa) for
//   g(y) = sum_j eps^{2j} dtilde_{kappa-2j} (kappa-2j) y^{kappa-2j},  0 <= x < y.
double g_difference_ratio(const DispersiveModel& model, double x, double y);

// ---------------------------------------------------------------------------
// Rate formulas

// beta = min{1 + (kappa-1) alpha / kappa, 2 - 2 alpha / kappa}
double expected_error_exponent(const DispersiveModel& model);

struct RegularityExponent {
    double exponent = 0.0;
    bool logFactor = false;
    friend bool operator==(const RegularityExponent&, const RegularityExponent&) = default;
};

// Growth of ||d_x^j (mu(z) - free(z))|| in eps. Throws for j outside [0, kappa-1].
RegularityExponent expected_regularity_exponent(const DispersiveModel& model, int j);

// ---------------------------------------------------------------------------
// Moment-equation reduction

enum class MomentSign { Plus, Minus };
enum class Parity { EvenPowers, OddPowers };

struct ReducedModel {
    int kappa = 0;
    double beta = 1.0;
    double alpha = 0.0;             // kappa - 1/beta
    std::map<int, double> coeffs;   // power j -> c_j > 0, the constant term excluded
    int signFactor = 1;             // sgn(lambda^kappa) for "+", sgn(lambda^{kappa-1}) for "-"
    std::optional<double> droppedConstant;  // c_0, "+" branch only
    Parity parity = Parity::EvenPowers;
};

// Expands sum_j binom(kappa, j) lambda^{kappa-j} / 2^{kappa-j} (-i d)^j (1 +- (-1)^j).
// Throws std::invalid_argument for kappa < 2 or beta < 1, and std::domain_error
// when every non-constant coefficient vanishes.
ReducedModel reduce_moment(int kappa, double beta, MomentSign sign, double lambda);

// A reduced model recast as a unit-leading DispersiveModel. The operator
// sign * c_lead * P(-i d) equals orientation * c_lead * D; after z -> z * c_lead
// the potential is multiplied by potentialScale = 1 / c_lead.
struct RescaledModel {
    DispersiveModel model;
    double zScale = 1.0;
    double potentialScale = 1.0;
    int orientation = 1;
};

// Throws std::domain_error when the highest surviving power is not kappa
// ("+" with odd kappa, "-" with even kappa) or alpha leaves [0, kappa].
RescaledModel to_dispersive_model(const ReducedModel& reduced, double epsilon);

}  // namespace dispersia
