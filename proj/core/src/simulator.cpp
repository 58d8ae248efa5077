#include "rfpe/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfpe/phase.hpp"

namespace rfpe {

void validate(const SystemState& sys) {
    validate(sys.noise);
    if (sys.eigenphases.empty()) throw std::invalid_argument("system needs at least one eigenphase");
    if (sys.current >= sys.eigenphases.size()) throw std::invalid_argument("current eigenstate out of range");
}

SystemState make_system(std::size_t n_eigenphases, double delta, const NoiseConfig& noise, Rng& rng) {
    validate(noise);
    if (n_eigenphases == 0) throw std::invalid_argument("system needs at least one eigenphase");
    if (!(delta >= 0.0)) throw std::invalid_argument("gap must be non-negative");
    const double n = static_cast<double>(n_eigenphases);
    if (n_eigenphases > 1 && !(n * delta < kTwoPi)) throw std::invalid_argument("gap constraint is infeasible");

    // Uniform points on the circle shortened by n·Δ, spread back out by Δ per
    // rank, then rotated: uniform over all gap-respecting configurations.
    const double free_length = n_eigenphases > 1 ? kTwoPi - n * delta : kTwoPi;
    std::vector<double> spacing(n_eigenphases);
    for (double& s : spacing) s = free_length * rng.uniform();
    std::sort(spacing.begin(), spacing.end());
    const double rotation = kTwoPi * rng.uniform();

    SystemState sys;
    sys.noise = noise;
    sys.delta = delta;
    sys.eigenphases.resize(n_eigenphases);
    for (std::size_t i = 0; i < n_eigenphases; ++i)
        sys.eigenphases[i] = wrap_phase(spacing[i] + static_cast<double>(i) * delta + rotation);
    sys.current = rng.index(n_eigenphases);
    return sys;
}

Outcome sample_outcome(const SystemState& sys, const ExperimentSpec& exp, Rng& rng) {
    if (sys.noise.gamma > 0.0 && rng.uniform() < sys.noise.gamma)
        return rng.coin() ? Outcome::zero : Outcome::one;
    const double p0 = likelihood_decoherent(Outcome::zero, sys.current_phase(), exp, sys.noise.t2);
    return rng.uniform() < p0 ? Outcome::zero : Outcome::one;
}

bool depolarize_step(SystemState& sys, const ExperimentSpec& exp, Rng& rng) {
    if (std::isinf(sys.noise.t2)) return false;
    const double survival = std::exp(-exp.repetitions / sys.noise.t2);
    if (rng.uniform() < survival) return false;
    sys.current = rng.index(sys.eigenphases.size());
    return true;
}

}  // namespace rfpe
