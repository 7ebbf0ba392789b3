#include <cmath>
#include <stdexcept>

#include "dispersia/model.hpp"

namespace dispersia {

namespace {

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

ReducedModel reduce_moment(int kappa, double beta, MomentSign sign, double lambda) {
    if (kappa < 2) throw std::invalid_argument("kappa must be >= 2");
    if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
    if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");

    ReducedModel out;
    out.kappa = kappa;
    out.beta = beta;
    out.alpha = kappa - 1.0 / beta;

    // "+" keeps even j and factors sgn(lambda^kappa); "-" keeps odd j and
    // factors sgn(lambda^{kappa-1}). For lambda = 0 only j = kappa survives and
    // its coefficient is positive, so the factor is +1.
    const bool plus = sign == MomentSign::Plus;
    out.parity = plus ? Parity::EvenPowers : Parity::OddPowers;
    const int factorPower = plus ? kappa : kappa - 1;
    const int s = sign_of(std::pow(lambda, factorPower));
    out.signFactor = (lambda == 0.0) ? 1 : s;

    const int first = plus ? 0 : 1;
    for (int j = first; j <= kappa; j += 2) {
        // binom(kappa, j) |lambda|^{kappa-j} / 2^{kappa-j-1}
        const double c = binomial(kappa, j) * std::pow(std::abs(lambda), kappa - j) *
                         std::ldexp(1.0, -(kappa - j - 1));
        if (j == 0) {
            out.droppedConstant = c;
            continue;
        }
        if (c > 0.0) out.coeffs.emplace(j, c);
    }
    if (out.coeffs.empty()) {
        throw std::domain_error("moment reduction: every non-constant coefficient vanishes");
    }
    return out;
}

RescaledModel to_dispersive_model(const ReducedModel& reduced, double epsilon) {
    const int kappa = reduced.kappa;
    const auto lead = reduced.coeffs.find(kappa);
    if (lead == reduced.coeffs.end()) {
        throw std::domain_error("reduced operator has order below kappa; no unit-leading form");
    }
    const double cLead = lead->second;
    std::vector<double> d(static_cast<std::size_t>(coefficient_count(kappa)), 0.0);
    for (const auto& [power, c] : reduced.coeffs) {
        d[static_cast<std::size_t>((kappa - power) / 2)] = c / cLead;
    }
    d.front() = 1.0;
    // sign * cLead * P(-i d) = -(sign) * cLead * D  since D = -P(-i d).
    return {DispersiveModel(kappa, std::move(d), reduced.alpha, epsilon), cLead, 1.0 / cLead,
            -reduced.signFactor};
}

}  // namespace dispersia
