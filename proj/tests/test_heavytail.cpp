#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "pfloc/errors.hpp"
#include "pfloc/heavytail.hpp"
#include "pfloc/random.hpp"

using namespace pfloc;

TEST(SignedPower, Examples) {
    EXPECT_EQ(signed_power(-2.0, 1.0), -2.0);
    EXPECT_DOUBLE_EQ(signed_power(4.0, 0.5), 2.0);
    EXPECT_NEAR(signed_power(-8.0, 1.0 / 3.0), -2.0, 1e-15);
    EXPECT_EQ(signed_power(0.0, 0.3), 0.0);
}

TEST(SignedPower, OddAndIdentity) {
    RandomStream rng(11);
    for (int i = 0; i < 200; ++i) {
        const double x = (rng.uniform_open() - 0.5) * 40.0;
        const double c = 0.05 + 2.0 * rng.uniform_open();
        EXPECT_EQ(signed_power(-x, c), -signed_power(x, c));
        EXPECT_EQ(signed_power(x, 1.0), x);
    }
}

TEST(SignedPower, RejectsBadArguments) {
    EXPECT_THROW((void)signed_power(1.0, 0.0), DomainError);
    EXPECT_THROW((void)signed_power(1.0, -1.0), DomainError);
    EXPECT_THROW((void)signed_power(std::numeric_limits<double>::infinity(), 1.0), DomainError);
    EXPECT_THROW((void)signed_power(std::nan(""), 1.0), DomainError);
}

TEST(Params, Validation) {
    EXPECT_THROW(StableParams(0.0, 1.0), ParameterError);
    EXPECT_THROW(StableParams(2.1, 1.0), ParameterError);
    EXPECT_THROW(StableParams(1.5, 0.0), ParameterError);
    EXPECT_NO_THROW(StableParams(2.0, 1.0));
    EXPECT_THROW(FlocParams(0.0, 0.5, 2.0), ParameterError);
    EXPECT_THROW(FlocParams(0.9, 0.8, 1.7), ParameterError);
    EXPECT_THROW((void)FlocParams::for_alpha(0.85, 0.85, 1.7), ParameterError);
    EXPECT_NO_THROW((void)FlocParams::for_alpha(0.8, 0.8, 1.7));
    EXPECT_TRUE(std::isinf(FlocParams::unbounded(1.0, 1.0).moment_bound()));
}

TEST(Floc, FlomHandExample) {
    const std::vector<double> x{1.0, -2.0};
    const FlocParams fp(0.8, 0.8, 1.7);
    EXPECT_NEAR(flom_sample(x, fp), (1.0 + std::pow(2.0, 1.6)) / 2.0, 1e-15);
    EXPECT_EQ(flom_sample(std::vector<double>(5, 0.0), fp), 0.0);
}

TEST(Floc, UnitExponentsReduceToMoments) {
    const std::vector<double> x{0.5, -1.5, 2.0, 3.0};
    const std::vector<double> y{1.0, 2.0, -0.5, 0.25};
    const auto fp = FlocParams::unbounded(1.0, 1.0);
    double cross = 0.0, second = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cross += x[i] * y[i];
        second += x[i] * x[i];
    }
    EXPECT_DOUBLE_EQ(floc_pairs(x, y, fp), cross / 4.0);
    EXPECT_DOUBLE_EQ(flom_sample(x, fp), second / 4.0);
}

TEST(Floc, SelfPairEqualsFlomExactly) {
    RandomStream rng(3);
    const auto x = sample_sym_stable(StableParams(1.7, 1.0), 500, rng);
    for (const auto& fp : {FlocParams(0.8, 0.8, 1.7), FlocParams(0.3, 1.1, 1.7), FlocParams(1.0, 0.6, 1.7)}) {
        EXPECT_EQ(floc_pairs(x, x, fp), flom_sample(x, fp));
    }
}

TEST(Floc, ScalingRule) {
    RandomStream rng(4);
    const auto x = sample_sym_stable(StableParams(1.7, 1.0), 300, rng);
    const auto y = sample_sym_stable(StableParams(1.7, 1.0), 300, rng);
    const FlocParams fp(0.7, 0.5, 1.7);
    const double a = -2.5, b = 0.4;
    std::vector<double> ax(x), by(y);
    for (auto& v : ax) v *= a;
    for (auto& v : by) v *= b;
    const double expected = oracle::spow(a, 0.7) * oracle::spow(b, 0.5) * floc_pairs(x, y, fp);
    EXPECT_NEAR(floc_pairs(ax, by, fp), expected, 1e-12 * std::fabs(expected));
}

TEST(Floc, SymmetryDependsOnExponents) {
    const std::vector<double> x{1.0, 3.0, -2.0};
    const std::vector<double> y{2.0, -1.0, 0.5};
    EXPECT_NE(floc_pairs(x, y, FlocParams(0.3, 1.2, 2.0)), floc_pairs(y, x, FlocParams(0.3, 1.2, 2.0)));
    EXPECT_EQ(floc_pairs(x, y, FlocParams(0.8, 0.8, 2.0)), floc_pairs(y, x, FlocParams(0.8, 0.8, 2.0)));
}

TEST(Floc, IndependentSamplesNearZero) {
    RandomStream rng(5);
    const auto x = sample_sym_stable(StableParams(1.7, 1.0), 100000, rng);
    const auto y = sample_sym_stable(StableParams(1.7, 1.0), 100000, rng);
    const FlocParams fp(0.8, 0.8, 1.7);
    EXPECT_LT(std::fabs(floc_pairs(x, y, fp)), 0.05 * flom_sample(x, fp));
}

TEST(Floc, ShapeErrors) {
    const std::vector<double> x{1.0, 2.0}, y{1.0};
    EXPECT_THROW((void)floc_pairs(x, y, FlocParams(0.8, 0.8, 2.0)), ShapeError);
    EXPECT_THROW((void)floc_pairs(std::vector<double>{}, std::vector<double>{}, FlocParams(0.8, 0.8, 2.0)),
                 ShapeError);
}

TEST(Stable, Reproducible) {
    RandomStream a(99), b(99);
    EXPECT_EQ(sample_sym_stable(StableParams(1.3, 1.0), 1000, a),
              sample_sym_stable(StableParams(1.3, 1.0), 1000, b));
}

TEST(Stable, ScaleFamilyUnderSameSeed) {
    RandomStream a(7), b(7);
    const auto one = sample_sym_stable(StableParams(1.7, 1.0), 1000, a);
    const auto two = sample_sym_stable(StableParams(1.7, 2.0), 1000, b);
    for (std::size_t i = 0; i < one.size(); ++i) EXPECT_DOUBLE_EQ(two[i], 2.0 * one[i]);
}

TEST(Stable, GaussianCaseVariance) {
    RandomStream rng(8);
    const auto x = sample_sym_stable(StableParams(2.0, 1.0), 200000, rng);
    double sq = 0.0;
    for (double v : x) sq += v * v;
    EXPECT_NEAR(sq / static_cast<double>(x.size()), 2.0, 0.05);
}

TEST(Stable, CharacteristicFunction) {
    for (double alpha : {0.8, 1.0, 1.7}) {
        RandomStream rng(static_cast<std::uint64_t>(alpha * 100));
        const auto x = sample_sym_stable(StableParams(alpha, 1.0), 100000, rng);
        for (double s : {0.5, 1.0, 2.0}) {
            const auto p = oracle::ecf(x, s);
            EXPECT_LE(std::fabs(p.value - std::exp(-std::pow(s, alpha))), 4.0 * p.se)
                << "alpha " << alpha << " s " << s;
        }
    }
}

TEST(EstimateAlpha, RecoversIndex) {
    for (double alpha : {1.2, 1.7}) {
        RandomStream rng(21);
        const auto x = sample_sym_stable(StableParams(alpha, 3.0), 5000, rng);
        EXPECT_NEAR(estimate_alpha(x), alpha, 0.1);
    }
    RandomStream rng(22);
    EXPECT_GE(estimate_alpha(sample_sym_stable(StableParams(2.0, 1.0), 5000, rng)), 1.9);
}

TEST(EstimateAlpha, ShortSamplesNear19) {
    // Most length-546 samples from S(1.9, 1) land within 0.1 of the truth.
    RandomStream master(23);
    int good = 0;
    for (int r = 0; r < 40; ++r) {
        RandomStream rng = master.substream(r);
        const double a = estimate_alpha(sample_sym_stable(StableParams(1.9, 1.0), 546, rng));
        EXPECT_GT(a, 0.1);
        EXPECT_LE(a, 2.0);
        good += std::fabs(a - 1.9) <= 0.1;
    }
    EXPECT_GE(good, 32);
}

TEST(EstimateAlpha, Errors) {
    EXPECT_THROW((void)estimate_alpha(std::vector<double>(49, 1.0)), InsufficientDataError);
    EXPECT_THROW((void)estimate_alpha(std::vector<double>(100, 3.0)), EstimationError);
}
