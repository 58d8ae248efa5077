#pragma once

#include <cstddef>
#include <vector>

#include "rfpe/likelihood.hpp"
#include "rfpe/random.hpp"

namespace rfpe {

/// Ground truth of the simulated device. The inference loop never reads it;
/// it only sees sampled outcomes.
struct SystemState {
    std::vector<double> eigenphases;  ///< each in [0, 2π)
    std::size_t current = 0;          ///< index of the instantaneous eigenstate
    NoiseConfig noise;
    double delta = 0.0;               ///< minimum pairwise circular gap

    double current_phase() const { return eigenphases.at(current); }
};

void validate(const SystemState& sys);

/// Draws n eigenphases uniformly subject to pairwise circular gaps >= delta,
/// and a uniformly random current eigenstate. Throws std::invalid_argument
/// when n·delta >= 2π.
SystemState make_system(std::size_t n_eigenphases, double delta, const NoiseConfig& noise, Rng& rng);

/// Measurement outcome: a fair coin with probability γ, otherwise drawn from
/// the decohering likelihood at the current eigenphase.
Outcome sample_outcome(const SystemState& sys, const ExperimentSpec& exp, Rng& rng);

/// With probability 1 - exp(-M/T2) the state jumps to a uniformly random
/// eigenstate (possibly the same one). Returns whether a jump was drawn.
bool depolarize_step(SystemState& sys, const ExperimentSpec& exp, Rng& rng);

}  // namespace rfpe
