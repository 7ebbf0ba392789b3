#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dispersia/model.hpp"

using namespace dispersia;

namespace {

using Poly = std::vector<double>;  // coefficient of s^j at index j

Poly multiply(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Poly power(const Poly& p, int n) {
    Poly out{1.0};
    for (int i = 0; i < n; ++i) out = multiply(out, p);
    return out;
}

// (lambda/2 + s)^kappa +- (lambda/2 - s)^kappa, s standing for -i d.
Poly expanded_operator(int kappa, MomentSign sign, double lambda) {
    const Poly a = power({lambda / 2.0, 1.0}, kappa);
    const Poly b = power({lambda / 2.0, -1.0}, kappa);
    Poly out(a.size());
    const double pm = sign == MomentSign::Plus ? 1.0 : -1.0;
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + pm * b[j];
    return out;
}

}  // namespace

TEST(ReduceMoment, Examples) {
    const auto a = reduce_moment(2, 1.0, MomentSign::Plus, 1.0);
    EXPECT_EQ(a.alpha, 1.0);
    ASSERT_TRUE(a.droppedConstant.has_value());
    EXPECT_DOUBLE_EQ(*a.droppedConstant, 0.5);
    ASSERT_EQ(a.coeffs.size(), 1u);
    EXPECT_DOUBLE_EQ(a.coeffs.at(2), 2.0);
    EXPECT_EQ(a.signFactor, 1);
    EXPECT_EQ(a.parity, Parity::EvenPowers);

    const auto b = reduce_moment(2, 1.0, MomentSign::Minus, -3.0);
    EXPECT_EQ(b.alpha, 1.0);
    ASSERT_EQ(b.coeffs.size(), 1u);
    EXPECT_DOUBLE_EQ(b.coeffs.at(1), 6.0);
    EXPECT_EQ(b.signFactor, -1);
    EXPECT_EQ(b.parity, Parity::OddPowers);
    EXPECT_FALSE(b.droppedConstant.has_value());

    for (auto s : {MomentSign::Plus, MomentSign::Minus}) {
        EXPECT_EQ(reduce_moment(3, 1.0, s, 1.0).alpha, 2.0);
    }
}

TEST(ReduceMoment, MatchesBruteForceExpansion) {
    for (int kappa = 2; kappa <= 6; ++kappa) {
        for (auto sign : {MomentSign::Plus, MomentSign::Minus}) {
            for (double lambda : {3.0, -3.0, 1.0, -1.0, 0.5, -0.5}) {
                for (double beta : {1.0, 1.5, 4.0}) {
                    const auto r = reduce_moment(kappa, beta, sign, lambda);
                    const auto poly = expanded_operator(kappa, sign, lambda);
                    EXPECT_EQ(r.alpha, kappa - 1.0 / beta);
                    for (int j = 0; j <= kappa; ++j) {
                        const double expected = poly[static_cast<std::size_t>(j)];
                        double got = 0.0;
                        if (j == 0 && r.droppedConstant) got = *r.droppedConstant;
                        if (auto it = r.coeffs.find(j); it != r.coeffs.end()) got = it->second;
                        EXPECT_NEAR(r.signFactor * got, expected, 1e-12 * std::max(1.0, std::abs(expected)))
                            << "kappa=" << kappa << " j=" << j << " lambda=" << lambda;
                    }
                    for (const auto& [j, c] : r.coeffs) {
                        EXPECT_GT(c, 0.0);
                        EXPECT_NE(j, 0);
                        EXPECT_EQ(j % 2, sign == MomentSign::Plus ? 0 : 1);
                    }
                }
            }
        }
    }
}

TEST(ReduceMoment, Errors) {
    EXPECT_THROW(reduce_moment(2, 0.5, MomentSign::Plus, 1.0), std::invalid_argument);
    EXPECT_THROW(reduce_moment(1, 1.0, MomentSign::Plus, 1.0), std::invalid_argument);
    // lambda = 0, "-", even kappa: only odd powers survive and all carry lambda.
    EXPECT_THROW(reduce_moment(2, 1.0, MomentSign::Minus, 0.0), std::domain_error);
    EXPECT_THROW(reduce_moment(4, 1.0, MomentSign::Minus, 0.0), std::domain_error);
    EXPECT_NO_THROW(reduce_moment(3, 1.0, MomentSign::Minus, 0.0));
}

TEST(ReduceMoment, RescalesToUnitLeadingModel) {
    const auto r = reduce_moment(4, 2.0, MomentSign::Plus, -3.0);
    const auto s = to_dispersive_model(r, 0.125);
    EXPECT_EQ(s.model.kappa(), 4);
    EXPECT_EQ(s.model.coeffs()[0], 1.0);
    EXPECT_DOUBLE_EQ(s.zScale, r.coeffs.at(4));
    EXPECT_DOUBLE_EQ(s.potentialScale * s.zScale, 1.0);
    EXPECT_DOUBLE_EQ(s.model.coeffs()[1], r.coeffs.at(2) / r.coeffs.at(4));
    EXPECT_EQ(s.orientation, -r.signFactor);
    EXPECT_EQ(s.model.alpha(), 3.5);

    // Leading power missing: "+" with odd kappa.
    EXPECT_THROW(to_dispersive_model(reduce_moment(3, 1.0, MomentSign::Plus, 1.0), 0.1),
                 std::domain_error);
}
