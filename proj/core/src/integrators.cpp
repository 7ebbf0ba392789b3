#include "dispersia/integrators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dispersia/diagnostics.hpp"
#include "fft.hpp"

namespace dispersia {

std::string_view to_string(StepperKind kind) noexcept {
    switch (kind) {
        case StepperKind::ExponentialIntegrator: return "EI";
        case StepperKind::LieTrotter: return "LT";
        case StepperKind::Strang: return "Strang";
        case StepperKind::LowRegularityIntegrator: return "LRI";
    }
    return "?";
}

std::optional<StepperKind> parse_stepper(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "ei" || lower == "exponentialintegrator") return StepperKind::ExponentialIntegrator;
    if (lower == "lt" || lower == "lietrotter") return StepperKind::LieTrotter;
    if (lower == "strang") return StepperKind::Strang;
    if (lower == "lri" || lower == "lowregularityintegrator") {
        return StepperKind::LowRegularityIntegrator;
    }
    return std::nullopt;
}

std::size_t step_count(double zFinal, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
    if (!(zFinal >= 0.0) || !std::isfinite(zFinal)) {
        throw std::invalid_argument("z_final must be >= 0");
    }
    const double ratio = zFinal / tau;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, steps)) {
        std::ostringstream msg;
        msg << "z_final / tau = " << ratio << " is not an integer step count";
        throw std::invalid_argument(msg.str());
    }
    return static_cast<std::size_t>(steps);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Complex> filter_in_frequency(std::span<const double> values,
                                         std::span<const Complex> symbol) {
    const std::size_t n = values.size();
    std::vector<Complex> work(values.begin(), values.end());
    detail::dft_forward(work, work);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) work[m] *= symbol[m] * inv;
    detail::dft_backward(work, work);
    return work;
}

}  // namespace

PrecomputedStep precompute(const DispersiveModel& model, const PotentialSpec& potential,
                           const Grid& grid, double tau, StepperKind scheme) {
    PrecomputedStep pre{scheme, tau, grid, free_propagator_symbol(model, grid, tau), {}, {}, {}, {}, {}};
    pre.rawPotential = sample_potential(potential, grid, model.epsilon());
    const double strength = tau * model.dispersion_strength();

    switch (scheme) {
        case StepperKind::ExponentialIntegrator:
            pre.phi1Symbol = FourierSymbol::from_function(grid, [&](double xi) {
                return phi1(Complex(0.0, -strength * eval_P(model, xi)));
            });
            break;
        case StepperKind::Strang:
            pre.halfFlow = free_propagator_symbol(model, grid, 0.5 * tau);
            [[fallthrough]];
        case StepperKind::LieTrotter:
            pre.potentialExp.resize(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j) {
                pre.potentialExp[j] = std::exp(tau * pre.rawPotential[j]);
            }
            break;
        case StepperKind::LowRegularityIntegrator: {
            // phi1(-i tau eps^a D) has symbol phi1(+i tau eps^a P(xi)).
            const auto filter = FourierSymbol::from_function(grid, [&](double xi) {
                return phi1(Complex(0.0, strength * eval_P(model, xi)));
            });
            pre.filteredPotential = filter_in_frequency(pre.rawPotential, filter.slots());
            break;
        }
    }
    return pre;
}

PrecomputedStep precompute(const SolveConfig& config) {
    step_count(config.zFinal, config.tau);
    return precompute(config.model, config.potential, config.grid, config.tau, config.scheme);
}

std::vector<Complex> rescaled_filtered_potential(const DispersiveModel& model,
                                                 const PotentialSpec& potential,
                                                 const Grid& grid, double tau) {
    const double eps = model.epsilon();
    const Grid scaled(grid.half_width() / eps, grid.size());
    std::vector<double> r(grid.size());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = evaluate(potential, scaled.node(j));

    // Ptilde(eta) = sum_j d_{k-2j} eps^{2j} eta^{k-2j}
    const auto c = model.coeffs();
    const double eps2 = eps * eps;
    auto pTilde = [&](double eta) {
        double sum = 0.0;
        double epsPow = 1.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            sum += c[j] * epsPow * std::pow(eta, model.kappa() - 2 * static_cast<int>(j));
            epsPow *= eps2;
        }
        return sum;
    };
    // Dtilde has symbol -Ptilde, so -i tau eps^{a-k} Dtilde -> +i tau eps^{a-k} Ptilde.
    const double strength = tau * std::pow(eps, model.alpha() - model.kappa());
    const auto filter = FourierSymbol::from_function(
        scaled, [&](double eta) { return phi1(Complex(0.0, strength * pTilde(eta))); });
    return filter_in_frequency(r, filter.slots());
}

// ---------------------------------------------------------------------------

Stepper::Stepper(const PrecomputedStep& pre)
    : pre_(&pre), a_(pre.grid.size()), b_(pre.grid.size()) {}

void Stepper::advance(std::span<Complex> state) {
    if (state.size() != pre_->grid.size()) {
        throw std::invalid_argument("state length does not match the precomputed grid");
    }
    switch (pre_->scheme) {
        case StepperKind::ExponentialIntegrator: advance_ei(state); break;
        case StepperKind::LieTrotter: advance_lt(state); break;
        case StepperKind::Strang: advance_strang(state); break;
        case StepperKind::LowRegularityIntegrator: advance_lri(state); break;
    }
}

void Stepper::multiply_in_frequency(std::span<Complex> state, std::span<const Complex> symbol) {
    const std::size_t n = state.size();
    detail::dft_forward(state, a_);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) a_[m] *= symbol[m] * inv;
    detail::dft_backward(a_, state);
}

void Stepper::advance_ei(std::span<Complex> state) {
    // mu <- F^{-1}[ E * F mu + tau * phi1 * F(R mu) ]
    const std::size_t n = state.size();
    const auto& r = pre_->rawPotential;
    for (std::size_t j = 0; j < n; ++j) b_[j] = r[j] * state[j];
    detail::dft_forward(state, a_);
    detail::dft_forward(b_, b_);
    const auto flow = pre_->fullFlow.slots();
    const auto phi = pre_->phi1Symbol->slots();
    const double tau = pre_->tau;
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) a_[m] = (flow[m] * a_[m] + tau * phi[m] * b_[m]) * inv;
    detail::dft_backward(a_, state);
}

void Stepper::advance_lt(std::span<Complex> state) {
    const auto& e = pre_->potentialExp;
    for (std::size_t j = 0; j < state.size(); ++j) state[j] *= e[j];
    multiply_in_frequency(state, pre_->fullFlow.slots());
}

void Stepper::advance_strang(std::span<Complex> state) {
    const auto half = pre_->halfFlow->slots();
    multiply_in_frequency(state, half);
    const auto& e = pre_->potentialExp;
    for (std::size_t j = 0; j < state.size(); ++j) state[j] *= e[j];
    multiply_in_frequency(state, half);
}

void Stepper::advance_lri(std::span<Complex> state) {
    // Filtered potential times mu in physical space, then the free flow.
    const auto& f = pre_->filteredPotential;
    const double tau = pre_->tau;
    for (std::size_t j = 0; j < state.size(); ++j) b_[j] = tau * f[j] * state[j];
    multiply_in_frequency(state, pre_->fullFlow.slots());
    for (std::size_t j = 0; j < state.size(); ++j) state[j] += b_[j];
}

namespace {

SpectralField step_as(const SpectralField& state, const PrecomputedStep& pre, StepperKind kind) {
    if (!(state.grid() == pre.grid)) {
        throw std::invalid_argument("state grid differs from the precomputed grid");
    }
    if (pre.scheme != kind) {
        throw std::invalid_argument(std::string("precomputed step is for ") +
                                    std::string(to_string(pre.scheme)) + ", not " +
                                    std::string(to_string(kind)));
    }
    SpectralField out(state);
    Stepper(pre).advance(out.values());
    return out;
}

}  // namespace

SpectralField step_ei(const SpectralField& state, const PrecomputedStep& pre) {
    return step_as(state, pre, StepperKind::ExponentialIntegrator);
}
SpectralField step_lt(const SpectralField& state, const PrecomputedStep& pre) {
    return step_as(state, pre, StepperKind::LieTrotter);
}
SpectralField step_strang(const SpectralField& state, const PrecomputedStep& pre) {
    return step_as(state, pre, StepperKind::Strang);
}
SpectralField step_lri(const SpectralField& state, const PrecomputedStep& pre) {
    return step_as(state, pre, StepperKind::LowRegularityIntegrator);
}
SpectralField step(const SpectralField& state, const PrecomputedStep& pre) {
    return step_as(state, pre, pre.scheme);
}

// ---------------------------------------------------------------------------

Solution solve(const SolveConfig& config) {
    const std::size_t steps = step_count(config.zFinal, config.tau);
    SpectralField mu = sample_initial(config.initial, config.grid);
    Solution out{mu, {}, steps};
    if (!mu.all_finite()) throw NumericalFailure("initial data is not finite");
    if (config.snapshotStride > 0) out.snapshots.push_back({0.0, mu});
    if (steps == 0) return out;

    const PrecomputedStep pre = precompute(config);
    Stepper stepper(pre);
    for (std::size_t n = 1; n <= steps; ++n) {
        stepper.advance(mu.values());
        if (!mu.all_finite()) {
            std::ostringstream msg;
            msg << to_string(config.scheme) << " produced non-finite values at step " << n
                << " (z = " << static_cast<double>(n) * config.tau << ", tau = " << config.tau
                << ", eps = " << config.model.epsilon() << ")";
            throw NumericalFailure(msg.str());
        }
        if (config.snapshotStride > 0 && n % config.snapshotStride == 0) {
            out.snapshots.push_back({static_cast<double>(n) * config.tau, mu});
        }
    }
    out.final = std::move(mu);
    return out;
}

}  // namespace dispersia
