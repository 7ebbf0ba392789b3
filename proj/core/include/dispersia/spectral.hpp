#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dispersia/model.hpp"

namespace dispersia {

using Complex = std::complex<double>;

// Periodic truncation of the line to (-L, L) with n nodes x_j = -L + j h and
// frequencies xi_k = pi k / L for k = -n/2 .. n/2 - 1.
class Grid {
public:
    Grid(double halfWidth, std::size_t n);

    // Smallest power-of-two grid (n >= 8) on (-L, L) whose spacing is <= maxSpacing.
    static Grid with_max_spacing(double halfWidth, double maxSpacing);

    double half_width() const noexcept { return halfWidth_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return 2.0 * halfWidth_ / static_cast<double>(n_); }
    double node(std::size_t j) const noexcept { return -halfWidth_ + static_cast<double>(j) * spacing(); }

    double frequency_step() const noexcept;
    int min_mode() const noexcept { return -static_cast<int>(n_ / 2); }
    int max_mode() const noexcept { return static_cast<int>(n_ / 2) - 1; }
    double frequency(int k) const noexcept { return static_cast<double>(k) * frequency_step(); }
    double max_frequency() const noexcept { return frequency(max_mode()); }

    // Storage order of frequency data follows the usual DFT layout; these two
    // translate between a mode number k and its storage slot.
    std::size_t slot_of_mode(int k) const;
    int mode_at_slot(std::size_t slot) const noexcept;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double halfWidth_;
    std::size_t n_;
};

// Fourier multiplier sampled at the grid frequencies.
class FourierSymbol {
public:
    explicit FourierSymbol(const Grid& grid, Complex fill = Complex(1.0));

    template <class F>
    static FourierSymbol from_function(const Grid& grid, F&& f) {
        FourierSymbol s(grid);
        for (std::size_t m = 0; m < grid.size(); ++m) {
            s.slots_[m] = f(grid.frequency(grid.mode_at_slot(m)));
        }
        return s;
    }

    const Grid& grid() const noexcept { return grid_; }
    Complex operator()(int k) const { return slots_[grid_.slot_of_mode(k)]; }

    // Raw storage in slot order, for kernels that stay in slot order throughout.
    std::span<const Complex> slots() const noexcept { return slots_; }
    std::span<Complex> slots() noexcept { return slots_; }

    FourierSymbol conj() const;
    friend FourierSymbol operator*(const FourierSymbol& a, const FourierSymbol& b);

private:
    Grid grid_;
    std::vector<Complex> slots_;
};

// Frequency-side representation under  phihat(xi_k) = h sum_j phi(x_j) e^{-i xi_k x_j}.
class FrequencyCoefficients {
public:
    FrequencyCoefficients(Grid grid, std::vector<Complex> slots);

    const Grid& grid() const noexcept { return grid_; }
    Complex operator()(int k) const { return slots_[grid_.slot_of_mode(k)]; }
    std::span<const Complex> slots() const noexcept { return slots_; }

private:
    Grid grid_;
    std::vector<Complex> slots_;
};

// Complex field sampled on the grid nodes.
class SpectralField {
public:
    explicit SpectralField(Grid grid);
    SpectralField(Grid grid, std::vector<Complex> values);

    template <class F>
    static SpectralField from_function(const Grid& grid, F&& f) {
        std::vector<Complex> v(grid.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
        return {grid, std::move(v)};
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const Complex> values() const noexcept { return values_; }
    std::span<Complex> values() noexcept { return values_; }
    Complex operator[](std::size_t j) const { return values_[j]; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(Complex s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }

    bool all_finite() const noexcept;

private:
    Grid grid_;
    std::vector<Complex> values_;
};

FrequencyCoefficients to_frequency(const SpectralField& field);
SpectralField to_physical(const FrequencyCoefficients& coeffs);

// phi1(z) = (e^z - 1) / z, cubic Taylor below |z| = 1e-4.
Complex phi1(Complex z);

// k -> exp(-i z eps^alpha P(xi_k)), the symbol of exp(i z eps^alpha D).
FourierSymbol free_propagator_symbol(const DispersiveModel& model, const Grid& grid, double z);

// k -> (i xi_k)^order
FourierSymbol derivative_symbol(const Grid& grid, int order);

SpectralField apply_multiplier(const SpectralField& field, const FourierSymbol& symbol);

// exp(i z eps^alpha D) field
SpectralField free_propagate(const SpectralField& field, const DispersiveModel& model, double z);

// psi = exp(-i z eps^alpha D) field
SpectralField twist(const SpectralField& field, const DispersiveModel& model, double z);

// sum_k |xi_k|^j |phihat(xi_k)| dxi, the discrete ||d_x^j phi||_X.
double x_norm(const FrequencyCoefficients& coeffs, int j);
double x_norm(const SpectralField& field, int j);

// sqrt(h sum_j |phi(x_j)|^2)
double l2_norm(const SpectralField& field);

// R(x_j / eps). Warns when h > eps, throws MeshResolutionError when h > 4 eps.
std::vector<double> sample_potential(const PotentialSpec& spec, const Grid& grid, double epsilon);

SpectralField sample_initial(const InitialDataSpec& spec, const Grid& grid);

}  // namespace dispersia
