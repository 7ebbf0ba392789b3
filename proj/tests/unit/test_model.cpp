#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dispersia/model.hpp"

using namespace dispersia;

namespace {

// Direct power sum, no nesting.
double naive_P(const DispersiveModel& m, double y) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m.coeffs().size(); ++j) {
        sum += m.coeffs()[j] * std::pow(y, m.kappa() - 2 * static_cast<int>(j));
    }
    return sum;
}

DispersiveModel random_model(std::mt19937_64& rng, int kappa) {
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> d(static_cast<std::size_t>(coefficient_count(kappa)));
    d[0] = 1.0;
    for (std::size_t j = 1; j < d.size(); ++j) d[j] = coef(rng);
    const double alpha = kappa * unit(rng);
    const double eps = std::ldexp(1.0, -static_cast<int>(1 + 7 * unit(rng)));
    return {kappa, d, alpha, eps};
}

}  // namespace

TEST(Model, RejectsInvalidParameters) {
    EXPECT_THROW(DispersiveModel(1, {1.0}, 0.5, 0.1), std::invalid_argument);
    EXPECT_THROW(DispersiveModel(2, {2.0}, 0.5, 0.1), std::invalid_argument);
    EXPECT_THROW(DispersiveModel(4, {1.0}, 0.5, 0.1), std::invalid_argument);
    EXPECT_THROW(DispersiveModel(2, {1.0}, 2.5, 0.1), std::invalid_argument);
    EXPECT_THROW(DispersiveModel(2, {1.0}, -0.1, 0.1), std::invalid_argument);
    EXPECT_THROW(DispersiveModel(2, {1.0}, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(DispersiveModel(2, {1.0}, 1.0, 1.5), std::invalid_argument);
    EXPECT_NO_THROW(DispersiveModel(5, {1.0, -0.5, 2.0}, 0.0, 1.0));
}

TEST(Model, CoefficientCountIsCeilHalf) {
    EXPECT_EQ(coefficient_count(2), 1);
    EXPECT_EQ(coefficient_count(3), 2);
    EXPECT_EQ(coefficient_count(4), 2);
    EXPECT_EQ(coefficient_count(5), 3);
}

TEST(Model, CoefficientOfPower) {
    const DispersiveModel m(4, {1.0, -1.0}, 1.0, 0.5);
    EXPECT_EQ(m.coefficient_of_power(4), 1.0);
    EXPECT_EQ(m.coefficient_of_power(2), -1.0);
    EXPECT_EQ(m.coefficient_of_power(3), 0.0);
    EXPECT_EQ(m.coefficient_of_power(0), 0.0);
}

TEST(EvalP, Examples) {
    EXPECT_DOUBLE_EQ(eval_P(DispersiveModel::monomial(2, 1.0, 0.5), 3.0), 9.0);
    EXPECT_DOUBLE_EQ(eval_P(DispersiveModel(4, {1.0, -1.0}, 1.0, 0.5), 2.0), 12.0);
    EXPECT_DOUBLE_EQ(eval_P(DispersiveModel(3, {1.0, 0.5}, 1.0, 0.5), -1.0), -1.5);
}

TEST(EvalP, MatchesPowerSum) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> y(-50.0, 50.0);
    for (int kappa = 2; kappa <= 6; ++kappa) {
        for (int i = 0; i < 200; ++i) {
            const auto m = random_model(rng, kappa);
            const double v = y(rng);
            const double ref = naive_P(m, v);
            EXPECT_NEAR(eval_P(m, v), ref, 1e-12 * std::max(1.0, std::pow(std::abs(v), kappa)));
        }
    }
}

TEST(EvalPhase, Examples) {
    EXPECT_EQ(eval_phase(DispersiveModel::monomial(2, 1.0, 0.25), 0.0, 5.0), 0.0);
    EXPECT_DOUBLE_EQ(eval_phase(DispersiveModel::monomial(2, 1.0, 0.25), 1.0, 2.0), 8.0);
    EXPECT_DOUBLE_EQ(eval_phase(DispersiveModel(3, {1.0, 0.0}, 0.0, 0.5), 1.0, 0.0), 8.0);
}

TEST(EvalQ, Examples) {
    EXPECT_EQ(eval_Q(1, 7.0, -3.0), 1.0);
    EXPECT_EQ(eval_Q(2, 5.0, 9.0), 2.0);
    EXPECT_EQ(eval_Q(3, 2.0, 1.0), 5.0);
    EXPECT_THROW(eval_Q(0, 1.0, 1.0), std::invalid_argument);
}

// ((b + a)^r - (b - a)^r) / 2 = a b^{s} Q_r(a^2, b^2), s = 1 for even r.
TEST(EvalQ, MatchesBinomialDifference) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int r = 1; r <= 7; ++r) {
        for (int i = 0; i < 100; ++i) {
            const double a = u(rng);
            const double b = u(rng);
            const double lhs = 0.5 * (std::pow(b + a, r) - std::pow(b - a, r));
            const double rhs = a * (r % 2 == 0 ? b : 1.0) * eval_Q(r, a * a, b * b);
            EXPECT_NEAR(lhs, rhs, 1e-11 * std::max(1.0, std::pow(6.0, r)));
        }
    }
}

TEST(EvalPhaseFactored, Examples) {
    EXPECT_NEAR(eval_phase_factored(DispersiveModel::monomial(2, 1.0, 0.25), 1.0, 2.0), 8.0, 1e-12);
    std::mt19937_64 rng(3);
    for (int kappa = 2; kappa <= 5; ++kappa) {
        EXPECT_EQ(eval_phase_factored(random_model(rng, kappa), 0.0, 1.7), 0.0);
    }
}

TEST(EvalPhaseFactored, AgreesWithDirectEvaluation) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> xi(-8.0, 8.0);
    for (int kappa = 2; kappa <= 5; ++kappa) {
        for (int i = 0; i < 2000; ++i) {
            const auto m = random_model(rng, kappa);
            const double a = xi(rng);
            const double b = xi(rng);
            const double direct = eval_phase(m, a, b);
            const double factored = eval_phase_factored(m, a, b);
            // Cancellation in the direct form is bounded by the size of the two P values.
            const double scale = m.dispersion_strength() *
                                 (std::abs(naive_P(m, a / m.epsilon() + b)) + std::abs(naive_P(m, b)));
            EXPECT_NEAR(factored, direct, 1e-10 * std::max(scale, 1e-300));
        }
    }
}

TEST(EvalPhase, EvenOrderVanishesOnReflection) {
    const DispersiveModel m(4, {1.0, -0.7}, 1.3, 0.125);
    for (double xi2 : {-3.0, 0.5, 2.0}) {
        const double xi1 = -2.0 * m.epsilon() * xi2;  // xi1 + 2 eps xi2 = 0
        EXPECT_NEAR(eval_phase_factored(m, xi1, xi2), 0.0, 1e-12);
        EXPECT_NEAR(eval_phase(m, xi1, xi2), 0.0, 1e-9);
    }
}

// ---------------------------------------------------------------------------

TEST(PhaseLowerBound, QuadraticMonomialRatioIsOneHalf) {
    // kappa = 2: eps^{k-a} Phi = xi1 eta, denominator |xi1 eta| * 2.
    PhaseSampleSpec s;
    s.xi1Count = 60;
    s.xi2Count = 60;
    for (double c0 : {0.5, 1.0, 4.0}) {
        const auto r = verify_phase_lower_bound(DispersiveModel::monomial(2, 1.0, 1.0 / 64), c0, s);
        EXPECT_NEAR(r.minRatio, 0.5, 1e-12);
        EXPECT_GT(r.scored, 0u);
    }
}

TEST(PhaseLowerBound, FiltersInadmissibleSamples) {
    PhaseSampleSpec s;
    s.xi1Min = -0.001;
    s.xi1Max = 0.001;
    s.xi2Min = -0.001;
    s.xi2Max = 0.001;
    s.xi1Count = 5;
    s.xi2Count = 5;
    const auto m = DispersiveModel::monomial(2, 1.0, 0.25);
    // C0 eps = 1 excludes the whole box.
    EXPECT_THROW(verify_phase_lower_bound(m, 4.0, s), std::invalid_argument);

    s.xi1Min = -2.0;
    s.xi1Max = 2.0;
    const auto r = verify_phase_lower_bound(m, 4.0, s);
    EXPECT_GT(r.filtered, 0u);
    EXPECT_EQ(r.scored + r.filtered + r.degenerate, 25u);
    EXPECT_THROW(verify_phase_lower_bound(m, 0.0, s), std::invalid_argument);
}

TEST(PhaseLowerBound, QuarticWithNegativeLowerCoefficient) {
    // Brute force on the dense grid gives at least 1/2 - 1/C0^2 for d = (1, -1).
    PhaseSampleSpec s;
    const DispersiveModel m(4, {1.0, -1.0}, 1.0, 1.0 / 64);
    const auto r = verify_phase_lower_bound(m, 64.0, s);
    EXPECT_GT(r.minRatio, 0.0);
    EXPECT_GE(r.minRatio, 0.5 - 1.0 / (64.0 * 64.0) - 1e-12);
}

TEST(PhaseLowerBound, SearchReachesFloor) {
    PhaseSampleSpec s;
    s.xi1Count = 100;
    s.xi2Count = 100;
    s.randomCount = 500;
    s.seed = 5;
    for (const auto& m : {DispersiveModel(3, {1.0, 2.0}, 1.0, 1.0 / 16),
                          DispersiveModel(4, {1.0, -3.0}, 1.0, 1.0 / 16),
                          DispersiveModel::monomial(2, 1.0, 1.0 / 16)}) {
        const auto found = search_phase_constant(m, s);
        EXPECT_GE(found.report.minRatio, found.floor);
        EXPECT_GT(found.floor, 0.0);
        EXPECT_GE(found.c0, 1.0);
    }
}

TEST(PhaseLowerBound, SampledPointsAreSeedDeterministic) {
    PhaseSampleSpec s;
    s.xi1Count = 3;
    s.xi2Count = 3;
    s.randomCount = 200;
    s.seed = 99;
    const DispersiveModel m(3, {1.0, -1.5}, 0.5, 0.25);
    const auto a = verify_phase_lower_bound(m, 2.0, s);
    const auto b = verify_phase_lower_bound(m, 2.0, s);
    EXPECT_EQ(a.minRatio, b.minRatio);
    EXPECT_EQ(a.worstPoint.xi1, b.worstPoint.xi1);
}

TEST(GDifference, StaysAboveAPositiveConstant) {
    std::mt19937_64 rng(23);
    for (const auto& m : {DispersiveModel(4, {1.0, -1.0}, 1.0, 1.0 / 32),
                          DispersiveModel(6, {1.0, -2.0, 0.5}, 2.0, 1.0 / 32)}) {
        const double c0 = 64.0;
        std::uniform_real_distribution<double> u(c0 * m.epsilon(), 20.0);
        double smallest = 1e300;
        for (int i = 0; i < 5000; ++i) {
            double x = u(rng), y = u(rng);
            if (x > y) std::swap(x, y);
            if (y - x < 1e-6) continue;
            smallest = std::min(smallest, g_difference_ratio(m, x, y));
        }
        EXPECT_GT(smallest, 0.1);
    }
}

// ---------------------------------------------------------------------------

TEST(Exponents, ErrorExponent) {
    EXPECT_DOUBLE_EQ(expected_error_exponent(DispersiveModel::monomial(2, 1.0, 0.1)), 1.0);
    EXPECT_NEAR(expected_error_exponent(DispersiveModel::monomial(2, 2.0 / 3.0, 0.1)), 4.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(expected_error_exponent(DispersiveModel::monomial(3, 0.0, 0.1)), 1.0);
    EXPECT_DOUBLE_EQ(expected_error_exponent(DispersiveModel::monomial(3, 0.75, 0.1)), 1.5);
}

TEST(Exponents, ErrorExponentIsPiecewiseLinearWithKink) {
    for (int kappa = 2; kappa <= 5; ++kappa) {
        const double kink = kappa / (kappa + 1.0);
        auto beta = [&](double a) { return expected_error_exponent(DispersiveModel::monomial(kappa, a, 0.1)); };
        const double h = 1e-3;
        EXPECT_NEAR(beta(kink - h) - beta(kink - 2 * h), (kappa - 1.0) / kappa * h, 1e-12);
        EXPECT_NEAR(beta(kink + 2 * h) - beta(kink + h), -2.0 / kappa * h, 1e-12);
        EXPECT_NEAR(1.0 + (kappa - 1.0) * kink / kappa, 2.0 - 2.0 * kink / kappa, 1e-14);
    }
}

TEST(Exponents, RegularityExponent) {
    EXPECT_EQ(expected_regularity_exponent(DispersiveModel::monomial(2, 1.0, 0.1), 0),
              (RegularityExponent{0.5, false}));
    EXPECT_EQ(expected_regularity_exponent(DispersiveModel::monomial(2, 1.0, 0.1), 1),
              (RegularityExponent{0.0, true}));
    EXPECT_EQ(expected_regularity_exponent(DispersiveModel::monomial(3, 1.5, 0.1), 1),
              (RegularityExponent{0.0, false}));
    EXPECT_THROW(expected_regularity_exponent(DispersiveModel::monomial(3, 1.5, 0.1), 3),
                 std::invalid_argument);
    EXPECT_THROW(expected_regularity_exponent(DispersiveModel::monomial(3, 1.5, 0.1), -1),
                 std::invalid_argument);
}
