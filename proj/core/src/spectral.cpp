#include "dispersia/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dispersia/diagnostics.hpp"
#include "fft.hpp"

namespace dispersia {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

// (-1)^k for the mode stored at slot m; n is even so slot parity equals mode parity.
double alternating(std::size_t slot) { return (slot % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

// ---------------------------------------------------------------------------

Grid::Grid(double halfWidth, std::size_t n) : halfWidth_(halfWidth), n_(n) {
    if (!(halfWidth > 0.0) || !std::isfinite(halfWidth)) {
        throw std::invalid_argument("grid half-width must be positive");
    }
    if (n < 8 || !is_power_of_two(n)) {
        throw std::invalid_argument("grid size must be a power of two >= 8, got " +
                                    std::to_string(n));
    }
}

Grid Grid::with_max_spacing(double halfWidth, double maxSpacing) {
    if (!(maxSpacing > 0.0)) throw std::invalid_argument("spacing must be positive");
    std::size_t n = 8;
    while (2.0 * halfWidth / static_cast<double>(n) > maxSpacing * (1.0 + 1e-12)) {
        n *= 2;
        if (n > (std::size_t{1} << 30)) throw std::invalid_argument("grid too large");
    }
    return {halfWidth, n};
}

double Grid::frequency_step() const noexcept { return std::numbers::pi / halfWidth_; }

std::size_t Grid::slot_of_mode(int k) const {
    if (k < min_mode() || k > max_mode()) {
        throw std::out_of_range("mode " + std::to_string(k) + " outside the grid");
    }
    return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<int>(n_));
}

int Grid::mode_at_slot(std::size_t slot) const noexcept {
    const auto m = static_cast<int>(slot);
    return slot < n_ / 2 ? m : m - static_cast<int>(n_);
}

// ---------------------------------------------------------------------------

FourierSymbol::FourierSymbol(const Grid& grid, Complex fill)
    : grid_(grid), slots_(grid.size(), fill) {}

FourierSymbol FourierSymbol::conj() const {
    FourierSymbol out(*this);
    for (auto& v : out.slots_) v = std::conj(v);
    return out;
}

FourierSymbol operator*(const FourierSymbol& a, const FourierSymbol& b) {
    require_same_grid(a.grid_, b.grid_);
    FourierSymbol out(a);
    for (std::size_t m = 0; m < out.slots_.size(); ++m) out.slots_[m] *= b.slots_[m];
    return out;
}

FrequencyCoefficients::FrequencyCoefficients(Grid grid, std::vector<Complex> slots)
    : grid_(grid), slots_(std::move(slots)) {
    if (slots_.size() != grid_.size()) {
        throw std::invalid_argument("coefficient count does not match the grid");
    }
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(Grid grid) : grid_(grid), values_(grid.size()) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("field length does not match the grid");
    }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

SpectralField& SpectralField::operator*=(Complex s) {
    for (auto& v : values_) v *= s;
    return *this;
}

bool SpectralField::all_finite() const noexcept {
    for (const auto& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

FrequencyCoefficients to_frequency(const SpectralField& field) {
    const Grid& g = field.grid();
    std::vector<Complex> out(g.size());
    detail::dft_forward(field.values(), out);
    // e^{-i xi_k x_j} = (-1)^k e^{-2 pi i jk/n} because x_0 = -L.
    const double h = g.spacing();
    for (std::size_t m = 0; m < out.size(); ++m) out[m] *= h * alternating(m);
    return {g, std::move(out)};
}

SpectralField to_physical(const FrequencyCoefficients& coeffs) {
    const Grid& g = coeffs.grid();
    std::vector<Complex> work(coeffs.slots().begin(), coeffs.slots().end());
    const double scale = 1.0 / (static_cast<double>(g.size()) * g.spacing());
    for (std::size_t m = 0; m < work.size(); ++m) work[m] *= scale * alternating(m);
    detail::dft_backward(work, work);
    return {g, std::move(work)};
}

Complex phi1(Complex z) {
    if (std::abs(z) < 1e-4) {
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0)));
    }
    // e^z - 1 without cancellation in the real part.
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    const Complex em1(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
    return em1 / z;
}

FourierSymbol free_propagator_symbol(const DispersiveModel& model, const Grid& grid, double z) {
    const double scale = z * model.dispersion_strength();
    return FourierSymbol::from_function(
        grid, [&](double xi) { return std::polar(1.0, -scale * eval_P(model, xi)); });
}

FourierSymbol derivative_symbol(const Grid& grid, int order) {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    return FourierSymbol::from_function(
        grid, [order](double xi) { return std::pow(Complex(0.0, xi), order); });
}

SpectralField apply_multiplier(const SpectralField& field, const FourierSymbol& symbol) {
    require_same_grid(field.grid(), symbol.grid());
    const std::size_t n = field.grid().size();
    std::vector<Complex> work(n);
    detail::dft_forward(field.values(), work);
    const auto s = symbol.slots();
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) work[m] *= s[m] * inv;
    detail::dft_backward(work, work);
    return {field.grid(), std::move(work)};
}

SpectralField free_propagate(const SpectralField& field, const DispersiveModel& model, double z) {
    return apply_multiplier(field, free_propagator_symbol(model, field.grid(), z));
}

SpectralField twist(const SpectralField& field, const DispersiveModel& model, double z) {
    return apply_multiplier(field, free_propagator_symbol(model, field.grid(), -z));
}

double x_norm(const FrequencyCoefficients& coeffs, int j) {
    if (j < 0) throw std::invalid_argument("x_norm order must be >= 0");
    const Grid& g = coeffs.grid();
    const auto c = coeffs.slots();
    double sum = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double w = j == 0 ? 1.0 : std::pow(std::abs(g.frequency(g.mode_at_slot(m))), j);
        sum += w * std::abs(c[m]);
    }
    return sum * g.frequency_step();
}

double x_norm(const SpectralField& field, int j) { return x_norm(to_frequency(field), j); }

double l2_norm(const SpectralField& field) {
    double sum = 0.0;
    for (const auto& v : field.values()) sum += std::norm(v);
    return std::sqrt(sum * field.grid().spacing());
}

std::vector<double> sample_potential(const PotentialSpec& spec, const Grid& grid, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double h = grid.spacing();
    if (h > 4.0 * epsilon) {
        std::ostringstream msg;
        msg << "grid spacing h = " << h << " exceeds 4 eps = " << 4.0 * epsilon
            << "; the potential R(x/eps) is not resolved";
        throw MeshResolutionError(msg.str());
    }
    if (h > epsilon) {
        std::ostringstream msg;
        msg << "grid spacing h = " << h << " exceeds eps = " << epsilon
            << "; R(x/eps) is under-resolved";
        warn(msg.str());
    }
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = evaluate(spec, grid.node(j) / epsilon);
    return out;
}

SpectralField sample_initial(const InitialDataSpec& spec, const Grid& grid) {
    return SpectralField::from_function(grid, [&](double x) { return evaluate(spec, x); });
}

}  // namespace dispersia
