#include "rfpe/experiment_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rfpe/phase.hpp"

namespace rfpe {

void validate(const DesignConfig& cfg) {
    if (!(cfg.scale > 0.0)) throw std::invalid_argument("design scale must be positive");
    if (!(cfg.max_repetitions >= 1.0)) throw std::invalid_argument("max_repetitions must be at least 1");
    if (!(cfg.cap_scale > 0.0)) throw std::invalid_argument("cap_scale must be positive");
}

namespace {

double finish_repetitions(double reps, const DesignConfig& cfg) {
    if (cfg.integer_repetitions) reps = std::ceil(reps);
    reps = std::min(reps, cfg.max_repetitions);
    // Exponential draws can be arbitrarily close to zero.
    const double floor = cfg.integer_repetitions ? 1.0 : std::numeric_limits<double>::min();
    return std::max(reps, floor);
}

double draw_theta(const PhaseModel& model, double reps, const DesignConfig& cfg, Rng& rng) {
    const double x = rng.normal(model.mu, model.sigma);
    if (cfg.theta == ThetaConvention::prior) return wrap_phase(x);
    return wrap_phase(reps * x) / reps;
}

}  // namespace

ExperimentSpec pgh(const PhaseModel& model, const DesignConfig& cfg, Rng& rng) {
    return pgh_t2(model, std::numeric_limits<double>::infinity(), cfg, rng);
}

ExperimentSpec pgh_t2(const PhaseModel& model, double t2, const DesignConfig& cfg, Rng& rng) {
    validate(model);
    validate(cfg);
    if (!(t2 > 0.0)) throw std::invalid_argument("t2 must be positive");

    const double raw = cfg.scale / model.sigma;
    const double cap = cfg.cap_scale * t2;
    double reps = raw;
    if (std::isfinite(cap)) {
        if (cfg.cap == CapMode::deterministic) {
            reps = std::min(cfg.integer_repetitions ? std::ceil(raw) : raw, cap);
        } else if (raw >= cap) {
            reps = rng.exponential(cap);
        }
    }
    reps = finish_repetitions(reps, cfg);
    return {reps, draw_theta(model, reps, cfg, rng)};
}

ExperimentSpec consistency_test_experiment(const PhaseModel& model, double tau) {
    validate(model);
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
    return {tau / model.sigma, model.mu};
}

}  // namespace rfpe
