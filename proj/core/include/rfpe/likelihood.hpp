#pragma once

#include <cstdint>
#include <functional>
#include <limits>

namespace rfpe {

/// Binary measurement result of one phase-estimation experiment.
enum class Outcome : std::uint8_t { zero = 0, one = 1 };

inline Outcome flip(Outcome e) { return e == Outcome::zero ? Outcome::one : Outcome::zero; }

/// Controls of a single experiment: `repetitions` applications of U and a
/// reference (inversion) angle `theta`. The outcome law depends on
/// repetitions * (phi - theta).
struct ExperimentSpec {
    double repetitions = 1.0;
    double theta = 0.0;
};

/// Noise present in the simulated system. `t2` enters the filter's likelihood;
/// `gamma` is deliberately unmodeled and only affects the simulator.
struct NoiseConfig {
    double t2 = std::numeric_limits<double>::infinity();
    double gamma = 0.0;
};

/// Throws std::invalid_argument unless repetitions > 0 and theta is finite.
void validate(const ExperimentSpec& exp);
/// Throws std::invalid_argument unless t2 > 0 and gamma in [0, 1].
void validate(const NoiseConfig& noise);

/// P(e | phi; theta, M) = (1 ± cos(M (phi - theta))) / 2, with phi - theta taken
/// on its branch in [-π, π].
double likelihood_ideal(Outcome e, double phi, const ExperimentSpec& exp);

/// Decohering likelihood: the ideal one mixed with 1/2 with weight exp(-M/T2).
/// Infinite t2 reduces exactly to likelihood_ideal.
double likelihood_decoherent(Outcome e, double phi, const ExperimentSpec& exp, double t2);

/// Outcome-probability callback used by the filter and the grid oracle.
using LikelihoodFn = std::function<double(Outcome, double, const ExperimentSpec&)>;

/// The filter's model likelihood for a known T2 (infinite means ideal).
LikelihoodFn model_likelihood(double t2);

}  // namespace rfpe
