#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "rfpe/phase.hpp"
#include "rfpe/simulator.hpp"

namespace rfpe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SystemState single(double phi, NoiseConfig noise = {}) {
    SystemState s;
    s.eigenphases = {phi};
    s.noise = noise;
    return s;
}

double frequency_of_zero(const SystemState& sys, const ExperimentSpec& exp, Rng& rng, int n) {
    int zeros = 0;
    for (int i = 0; i < n; ++i) zeros += sample_outcome(sys, exp, rng) == Outcome::zero;
    return static_cast<double>(zeros) / n;
}

TEST(Simulator, NoiselessAlignedIsAlwaysZero) {
    Rng rng(1);
    const SystemState sys = single(1.7);
    for (double m : {1.0, 10.0, 12345.0})
        for (int i = 0; i < 1000; ++i) ASSERT_EQ(sample_outcome(sys, {m, 1.7}, rng), Outcome::zero);
}

TEST(Simulator, FullDepolarizationIsAFairCoin) {
    Rng rng(2);
    const SystemState sys = single(0.3, {kInf, 1.0});
    const int n = 100000;
    EXPECT_NEAR(frequency_of_zero(sys, {1.0, 0.3}, rng, n), 0.5, 5.0 * 0.5 / std::sqrt(n));
    EXPECT_NEAR(frequency_of_zero(sys, {7.0, 2.0}, rng, n), 0.5, 5.0 * 0.5 / std::sqrt(n));
}

TEST(Simulator, OutcomeFrequenciesMatchLikelihood) {
    Rng rng(3);
    const int n = 100000;
    for (double gamma : {0.0, 0.3}) {
        for (double phi : {0.4, 2.0}) {
            for (double m : {1.0, 30.0}) {
                const SystemState sys = single(phi, {50.0, gamma});
                const ExperimentSpec exp{m, 1.1};
                const double p =
                    gamma * 0.5 + (1.0 - gamma) * likelihood_decoherent(Outcome::zero, phi, exp, 50.0);
                EXPECT_NEAR(frequency_of_zero(sys, exp, rng, n), p, 3.0 * std::sqrt(p * (1 - p) / n) + 1e-12);
            }
        }
    }
}

TEST(Simulator, NoJumpsWithoutDecoherence) {
    Rng rng(4);
    NoiseConfig noise;
    SystemState sys = make_system(16, 0.0, noise, rng);
    const std::size_t start = sys.current;
    for (int i = 0; i < 1000; ++i) EXPECT_FALSE(depolarize_step(sys, {1e12, 0.0}, rng));
    EXPECT_EQ(sys.current, start);
}

TEST(Simulator, VeryLongExperimentsAlwaysJump) {
    Rng rng(5);
    SystemState sys = make_system(4, 0.0, {10.0, 0.0}, rng);
    for (int i = 0; i < 1000; ++i) EXPECT_TRUE(depolarize_step(sys, {1e6, 0.0}, rng));
}

TEST(Simulator, SurvivalMatchesProductFormula) {
    Rng rng(6);
    const std::vector<double> reps{5.0, 20.0, 1.0, 40.0};
    const double t2 = 200.0;
    double expected = 1.0;
    for (double m : reps) expected *= std::exp(-m / t2);
    const int n = 50000;
    int survived = 0;
    for (int i = 0; i < n; ++i) {
        SystemState sys = make_system(16, 0.0, {t2, 0.0}, rng);
        bool jumped = false;
        for (double m : reps) jumped = depolarize_step(sys, {m, 0.0}, rng) || jumped;
        survived += !jumped;
    }
    EXPECT_NEAR(static_cast<double>(survived) / n, expected, 5.0 * std::sqrt(expected * (1 - expected) / n));
}

TEST(Simulator, MakeSystemShapes) {
    Rng rng(7);
    const SystemState one = make_system(1, 0.0, {}, rng);
    ASSERT_EQ(one.eigenphases.size(), 1u);
    EXPECT_EQ(one.current, 0u);
    const SystemState many = make_system(16, 0.0, {1e4, 0.0}, rng);
    EXPECT_EQ(many.eigenphases.size(), 16u);
    EXPECT_LT(many.current, 16u);
    for (double phi : many.eigenphases) {
        EXPECT_GE(phi, 0.0);
        EXPECT_LT(phi, kTwoPi);
    }
}

TEST(Simulator, GapIsRespected) {
    Rng rng(8);
    for (int t = 0; t < 500; ++t) {
        const SystemState sys = make_system(4, 1.0, {}, rng);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                EXPECT_GE(circular_distance(sys.eigenphases[i], sys.eigenphases[j]), 1.0 - 1e-12);
    }
    EXPECT_THROW(make_system(7, 1.0, {}, rng), std::invalid_argument);
}

TEST(Simulator, SingleEigenphaseIsUniform) {
    Rng rng(9);
    const int n = 40000, bins = 8;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < n; ++i) ++counts[static_cast<int>(make_system(1, 0.0, {}, rng).eigenphases[0] / kTwoPi * bins)];
    const double e = static_cast<double>(n) / bins;
    for (int c : counts) EXPECT_NEAR(c, e, 5.0 * std::sqrt(e));
}

}  // namespace
}  // namespace rfpe
