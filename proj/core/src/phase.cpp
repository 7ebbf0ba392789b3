#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dispersia/model.hpp"

namespace dispersia {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

// d_{kappa-2j} / 2^{kappa-2j-1}
double reduced_coefficient(const DispersiveModel& model, std::size_t j) {
    const int power = model.kappa() - 2 * static_cast<int>(j);
    return std::ldexp(model.coeffs()[j], -(power - 1));
}

// sum_j eps^{2j} dtilde_{kappa-2j} Q_{kappa-2j}(xi1^2, eta^2)
double factored_sum(const DispersiveModel& model, double xi1, double eta) {
    const double eps2 = model.epsilon() * model.epsilon();
    const double x = xi1 * xi1;
    const double y = eta * eta;
    double sum = 0.0;
    double epsPow = 1.0;
    for (std::size_t j = 0; j < model.coeffs().size(); ++j) {
        const int r = model.kappa() - 2 * static_cast<int>(j);
        sum += epsPow * reduced_coefficient(model, j) * eval_Q(r, x, y);
        epsPow *= eps2;
    }
    return sum;
}

}  // namespace

double eval_phase(const DispersiveModel& model, double xi1, double xi2) {
    const double eps = model.epsilon();
    return model.dispersion_strength() * (eval_P(model, xi1 / eps + xi2) - eval_P(model, xi2));
}

double eval_Q(int r, double x, double y) {
    if (r < 1) throw std::invalid_argument("Q_r requires r >= 1");
    // r = 2p:   sum_{j<p}  binom(r, 2j+1) x^j y^{p-1-j}
    // r = 2p+1: sum_{j<=p} binom(r, 2j+1) x^j y^{p-j}
    const int p = r / 2;
    const int top = (r % 2 == 0) ? p - 1 : p;
    double sum = 0.0;
    for (int j = 0; j <= top; ++j) {
        sum += binomial(r, 2 * j + 1) * std::pow(x, j) * std::pow(y, top - j);
    }
    return sum;
}

double eval_phase_factored(const DispersiveModel& model, double xi1, double xi2) {
    const double eps = model.epsilon();
    const double eta = xi1 + 2.0 * eps * xi2;
    const double parityFactor = model.even() ? xi1 * eta : xi1;
    const double scale = std::pow(eps, model.alpha() - model.kappa());
    return scale * factored_sum(model, xi1, eta) * parityFactor;
}

PhaseBoundReport verify_phase_lower_bound(const DispersiveModel& model, double c0,
                                          const PhaseSampleSpec& samples) {
    if (!(c0 > 0.0)) throw std::invalid_argument("C0 must be positive");
    if (samples.xi1Count < 1 || samples.xi2Count < 1 || samples.randomCount < 0) {
        throw std::invalid_argument("sample counts must be positive");
    }

    const double eps = model.epsilon();
    const int s = model.even() ? 1 : 0;
    const int tailPower = model.kappa() - 1 - s;
    const double threshold = c0 * eps;
    const double toUnit = std::pow(eps, model.kappa() - model.alpha());

    PhaseBoundReport report;
    report.minRatio = std::numeric_limits<double>::infinity();

    auto score = [&](double xi1, double xi2) {
        const double eta = xi1 + 2.0 * eps * xi2;
        if (std::abs(xi1) < threshold && std::abs(eta) < threshold) {
            ++report.filtered;
            return;
        }
        const double prefactor = std::abs(xi1 * std::pow(eta, s));
        const double denom =
            prefactor * (std::pow(std::abs(xi1), tailPower) + std::pow(std::abs(eta), tailPower));
        if (denom == 0.0) {
            ++report.degenerate;
            return;
        }
        const double ratio = std::abs(toUnit * eval_phase_factored(model, xi1, xi2)) / denom;
        ++report.scored;
        if (ratio < report.minRatio) {
            report.minRatio = ratio;
            report.worstPoint = {xi1, xi2};
        }
    };

    auto linspace = [](double lo, double hi, int count, int i) {
        return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
    };
    for (int a = 0; a < samples.xi1Count; ++a) {
        const double xi1 = linspace(samples.xi1Min, samples.xi1Max, samples.xi1Count, a);
        for (int b = 0; b < samples.xi2Count; ++b) {
            score(xi1, linspace(samples.xi2Min, samples.xi2Max, samples.xi2Count, b));
        }
    }
    std::mt19937_64 rng(samples.seed);
    std::uniform_real_distribution<double> u1(samples.xi1Min, samples.xi1Max);
    std::uniform_real_distribution<double> u2(samples.xi2Min, samples.xi2Max);
    for (int r = 0; r < samples.randomCount; ++r) {
        const double xi1 = u1(rng);
        score(xi1, u2(rng));
    }

    if (report.scored == 0) {
        throw std::invalid_argument("no admissible sample with |xi1| >= C0 eps or "
                                    "|xi1 + 2 eps xi2| >= C0 eps");
    }
    return report;
}

PhaseConstantSearch search_phase_constant(const DispersiveModel& model,
                                          const PhaseSampleSpec& samples, double maxC0) {
    const auto reference =
        verify_phase_lower_bound(DispersiveModel::monomial(model.kappa(), model.alpha(),
                                                           model.epsilon()),
                                 1.0, samples);
    const double floor = 0.5 * reference.minRatio;
    for (double c0 = 1.0; c0 <= maxC0; c0 *= 2.0) {
        auto report = verify_phase_lower_bound(model, c0, samples);
        if (report.minRatio >= floor) return {c0, floor, report};
    }
    throw std::runtime_error("no C0 <= " + std::to_string(maxC0) +
                             " reaches the phase lower-bound floor");
}

double g_difference_ratio(const DispersiveModel& model, double x, double y) {
    if (!(x >= 0.0 && y > x)) throw std::invalid_argument("g ratio requires 0 <= x < y");
    const double eps2 = model.epsilon() * model.epsilon();
    double gx = 0.0;
    double gy = 0.0;
    double epsPow = 1.0;
    for (std::size_t j = 0; j < model.coeffs().size(); ++j) {
        const int r = model.kappa() - 2 * static_cast<int>(j);
        const double w = epsPow * reduced_coefficient(model, j) * r;
        gx += w * std::pow(x, r);
        gy += w * std::pow(y, r);
        epsPow *= eps2;
    }
    return (gy - gx) / (std::pow(y, model.kappa()) - std::pow(x, model.kappa()));
}

}  // namespace dispersia
