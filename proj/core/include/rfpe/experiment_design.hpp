#pragma once

#include "rfpe/likelihood.hpp"
#include "rfpe/random.hpp"
#include "rfpe/rejection_filter.hpp"

namespace rfpe {

/// How the T2 cap is enforced once 1.25 / σ reaches it.
enum class CapMode {
    deterministic,  ///< M = min(⌈1.25/σ⌉, cap)
    stochastic,     ///< M ~ Exponential(mean = cap)
};

/// How the inversion angle is drawn from the current model.
enum class ThetaConvention {
    prior,      ///< θ ~ N(μ, σ²), wrapped
    pseudocode, ///< draw x ~ N(μ, σ²) and set the rotation angle M·θ = M·x mod 2π
};

struct DesignConfig {
    double scale = 1.25;           ///< M ∝ scale / σ
    bool integer_repetitions = true;
    double max_repetitions = 4611686018427387904.0;  ///< 2^62
    CapMode cap = CapMode::deterministic;
    double cap_scale = 1.0;        ///< cap = cap_scale · T2
    ThetaConvention theta = ThetaConvention::prior;
};

void validate(const DesignConfig& cfg);

/// Particle guess heuristic: M = ⌈1.25/σ⌉, θ drawn from the model.
ExperimentSpec pgh(const PhaseModel& model, const DesignConfig& cfg, Rng& rng);

/// PGH with the evolution time limited by the decoherence time.
ExperimentSpec pgh_t2(const PhaseModel& model, double t2, const DesignConfig& cfg, Rng& rng);

/// The cheap consistency check: θ = μ and M = τ/σ (never rounded).
ExperimentSpec consistency_test_experiment(const PhaseModel& model, double tau);

}  // namespace rfpe
