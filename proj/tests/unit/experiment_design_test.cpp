#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "rfpe/experiment_design.hpp"
#include "rfpe/phase.hpp"

namespace rfpe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Design, PghRepetitions) {
    Rng rng(1);
    const DesignConfig cfg;
    EXPECT_EQ(pgh({1.0, 0.125}, cfg, rng).repetitions, 10.0);
    EXPECT_EQ(pgh({1.0, 1.0}, cfg, rng).repetitions, 2.0);
    EXPECT_EQ(pgh({1.0, 100.0}, cfg, rng).repetitions, 1.0);
}

TEST(Design, PghRepetitionsNonIncreasingInSigma) {
    Rng rng(2);
    const DesignConfig cfg;
    double last = kInf;
    for (double s = 1e-8; s < 3.0; s *= 1.3) {
        const double m = pgh({0.0, s}, cfg, rng).repetitions;
        EXPECT_LE(m, last);
        last = m;
    }
}

TEST(Design, RealValuedRepetitions) {
    Rng rng(3);
    DesignConfig cfg;
    cfg.integer_repetitions = false;
    EXPECT_DOUBLE_EQ(pgh({1.0, 0.3}, cfg, rng).repetitions, 1.25 / 0.3);
}

TEST(Design, RepetitionGuard) {
    Rng rng(4);
    const DesignConfig cfg;
    EXPECT_EQ(pgh({1.0, 1e-300}, cfg, rng).repetitions, 4611686018427387904.0);
}

TEST(Design, ThetaFollowsModel) {
    // Kolmogorov-Smirnov against N(μ, σ²); the model is narrow so wrapping never triggers.
    Rng rng(5);
    const PhaseModel model{3.0, 0.2};
    std::vector<double> th;
    for (int i = 0; i < 10000; ++i) th.push_back(pgh(model, {}, rng).theta);
    std::sort(th.begin(), th.end());
    const boost::math::normal_distribution<double> ref(model.mu, model.sigma);
    double d = 0.0;
    const double n = static_cast<double>(th.size());
    for (std::size_t i = 0; i < th.size(); ++i) {
        const double f = boost::math::cdf(ref, th[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    EXPECT_LT(d, 1.63 / std::sqrt(n));  // 1% critical value
}

TEST(Design, PseudocodeThetaMatchesRotationAngle) {
    Rng a(6), b(6);
    DesignConfig cfg;
    cfg.theta = ThetaConvention::pseudocode;
    const PhaseModel model{2.0, 0.05};
    const ExperimentSpec e = pgh(model, cfg, a);
    const double x = b.normal(model.mu, model.sigma);
    EXPECT_NEAR(e.repetitions * e.theta, wrap_phase(e.repetitions * x), 1e-12);
    EXPECT_LT(e.theta, kTwoPi / e.repetitions);
}

TEST(Design, DeterministicCap) {
    Rng rng(7);
    const DesignConfig cfg;
    EXPECT_EQ(pgh_t2({1.0, 1e-6}, 100.0, cfg, rng).repetitions, 100.0);
    EXPECT_EQ(pgh_t2({1.0, 1e-6}, 99.5, cfg, rng).repetitions, 100.0);
    EXPECT_EQ(pgh_t2({1.0, 0.125}, 100.0, cfg, rng).repetitions, 10.0);
    DesignConfig tenth = cfg;
    tenth.cap_scale = 0.1;
    EXPECT_EQ(pgh_t2({1.0, 1e-6}, 1000.0, tenth, rng).repetitions, 100.0);
}

TEST(Design, StochasticCapIsExponential) {
    Rng rng(8);
    DesignConfig cfg;
    cfg.cap = CapMode::stochastic;
    cfg.integer_repetitions = false;
    const int n = 10000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double m = pgh_t2({1.0, 1e-6}, 100.0, cfg, rng).repetitions;
        sum += m;
        sq += m * m;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, 100.0, 5.0 * 100.0 / std::sqrt(n));
    EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 100.0, 5.0);  // exponential: sd = mean
}

TEST(Design, InfiniteT2MatchesPgh) {
    for (CapMode mode : {CapMode::deterministic, CapMode::stochastic}) {
        DesignConfig cfg;
        cfg.cap = mode;
        Rng a(9), b(9);
        for (double s : {1e-7, 0.01, 0.5}) {
            const ExperimentSpec x = pgh({1.0, s}, cfg, a);
            const ExperimentSpec y = pgh_t2({1.0, s}, kInf, cfg, b);
            EXPECT_EQ(x.repetitions, y.repetitions);
            EXPECT_EQ(x.theta, y.theta);
        }
    }
}

TEST(Design, ConsistencyTest) {
    const ExperimentSpec e = consistency_test_experiment({2.0, 0.01}, 0.1);
    EXPECT_DOUBLE_EQ(e.repetitions, 10.0);
    EXPECT_EQ(e.theta, 2.0);
    EXPECT_DOUBLE_EQ(consistency_test_experiment({0.3, 0.1}, 0.1).repetitions, 1.0);
    EXPECT_DOUBLE_EQ(consistency_test_experiment({0.3, 0.3}, 0.1).repetitions, 0.1 / 0.3);
    EXPECT_THROW(consistency_test_experiment({0.3, 0.1}, 0.0), std::invalid_argument);
}

TEST(Design, Validation) {
    Rng rng(10);
    DesignConfig cfg;
    EXPECT_THROW(pgh_t2({1.0, 0.1}, 0.0, cfg, rng), std::invalid_argument);
    cfg.cap_scale = 0.0;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
}

}  // namespace
}  // namespace rfpe
