#include "dispersia/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dispersia {

int coefficient_count(int kappa) noexcept { return (kappa + 1) / 2; }

DispersiveModel::DispersiveModel(int kappa, std::vector<double> coeffs, double alpha,
                                 double epsilon)
    : kappa_(kappa), coeffs_(std::move(coeffs)), alpha_(alpha), epsilon_(epsilon) {
    if (kappa_ < 2) {
        throw std::invalid_argument("kappa must be >= 2, got " + std::to_string(kappa_));
    }
    if (static_cast<int>(coeffs_.size()) != coefficient_count(kappa_)) {
        throw std::invalid_argument("coeffs must have ceil(kappa/2) = " +
                                    std::to_string(coefficient_count(kappa_)) +
                                    " entries, got " + std::to_string(coeffs_.size()));
    }
    if (coeffs_.front() != 1.0) {
        throw std::invalid_argument("leading coefficient d_kappa must equal 1");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("coeffs must be finite");
    }
    if (!(alpha_ >= 0.0 && alpha_ <= kappa_)) {
        throw std::invalid_argument("alpha must lie in [0, kappa]");
    }
    if (!(epsilon_ > 0.0 && epsilon_ <= 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1]");
    }
}

DispersiveModel DispersiveModel::monomial(int kappa, double alpha, double epsilon) {
    std::vector<double> c(static_cast<std::size_t>(std::max(coefficient_count(kappa), 1)), 0.0);
    c.front() = 1.0;
    return {kappa, std::move(c), alpha, epsilon};
}

double DispersiveModel::coefficient_of_power(int power) const noexcept {
    if (power > kappa_ || power < 1 || (kappa_ - power) % 2 != 0) return 0.0;
    return coeffs_[static_cast<std::size_t>((kappa_ - power) / 2)];
}

double DispersiveModel::dispersion_strength() const { return std::pow(epsilon_, alpha_); }

DispersiveModel DispersiveModel::with_epsilon(double epsilon) const {
    return {kappa_, coeffs_, alpha_, epsilon};
}

DispersiveModel DispersiveModel::with_alpha(double alpha) const {
    return {kappa_, coeffs_, alpha, epsilon_};
}

// ---------------------------------------------------------------------------

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class T>
T interpolate(double xMin, double dx, const std::vector<T>& values, double x) {
    if (values.empty() || dx <= 0.0) return T{};
    const double s = (x - xMin) / dx;
    if (s < 0.0 || s > static_cast<double>(values.size() - 1)) return T{};
    const auto i = static_cast<std::size_t>(std::floor(s));
    if (i + 1 >= values.size()) return values.back();
    const double w = s - static_cast<double>(i);
    return values[i] * (1.0 - w) + values[i + 1] * w;
}

}  // namespace

double evaluate(const PotentialSpec& spec, double x) {
    return std::visit(
        overloaded{
            [x](const GaussianPotential& g) { return g.amplitude * std::exp(-x * x / g.widthSq); },
            [x](const ExpAbsPotential& e) { return e.amplitude * std::exp(-std::abs(x)); },
            [x](const TabulatedPotential& t) { return interpolate(t.xMin, t.dx, t.values, x); },
        },
        spec);
}

bool is_zero(const PotentialSpec& spec) {
    return std::visit(
        overloaded{
            [](const GaussianPotential& g) { return g.amplitude == 0.0; },
            [](const ExpAbsPotential& e) { return e.amplitude == 0.0; },
            [](const TabulatedPotential& t) {
                return std::all_of(t.values.begin(), t.values.end(),
                                   [](double v) { return v == 0.0; });
            },
        },
        spec);
}

std::complex<double> evaluate(const InitialDataSpec& spec, double x) {
    return std::visit(
        overloaded{
            [x](const GaussianInitial&) { return std::complex<double>(std::exp(-0.5 * x * x)); },
            [x](const PlaneWaveInitial& p) { return std::polar(1.0, p.xi0 * x); },
            [x](const TabulatedInitial& t) { return interpolate(t.xMin, t.dx, t.values, x); },
        },
        spec);
}

// ---------------------------------------------------------------------------

double eval_P(const DispersiveModel& model, double y) {
    // Horner in y^2 from the leading term down, then the lowest power
    // (1 for odd kappa, 2 for even kappa).
    const auto c = model.coeffs();
    const double y2 = y * y;
    double acc = 0.0;
    for (double d : c) acc = acc * y2 + d;
    return model.even() ? acc * y2 : acc * y;
}

double expected_error_exponent(const DispersiveModel& model) {
    const double k = model.kappa();
    const double a = model.alpha();
    return std::min(1.0 + (k - 1.0) * a / k, 2.0 - 2.0 * a / k);
}

RegularityExponent expected_regularity_exponent(const DispersiveModel& model, int j) {
    const int k = model.kappa();
    if (j < 0 || j > k - 1) {
        throw std::invalid_argument("derivative order j must lie in [0, kappa-1]");
    }
    if (j == k - 1) return {1.0 - model.alpha(), true};
    return {1.0 - (1.0 + j) * model.alpha() / k, false};
}

}  // namespace dispersia
