#include "rfpe/reset_restart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfpe/experiment_design.hpp"
#include "rfpe/phase.hpp"

namespace rfpe {

void validate(const ResetState& state) {
    if (!(state.sigma_init > 0.0)) throw std::invalid_argument("sigma_init must be positive");
    if (!(state.sigma_reset > 0.0)) throw std::invalid_argument("sigma_reset must be positive");
    if (!(state.tau > 0.0 && state.tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
    if (state.window < 2) throw std::invalid_argument("slope window must hold at least two records");
}

void EigenvalueRegistry::record(const PhaseModel& model) {
    validate(model);
    const PhaseModel entry{wrap_phase(model.mu), model.sigma};
    for (auto& existing : entries) {
        if (circular_distance(existing.mu, entry.mu) < 0.5 * delta) {
            if (entry.sigma < existing.sigma) existing = entry;
            return;
        }
    }
    entries.push_back(entry);
}

double reset_pass_probability(double tau) {
    if (!(tau >= 0.0)) throw std::invalid_argument("tau must be non-negative");
    return 0.5 * (1.0 + std::exp(-0.5 * tau * tau));
}

double bayes_factor(const PhaseModel& model, const ResetState& reset, double t2) {
    validate(model);
    const double tau = reset.tau;
    if (tau == 0.0) throw std::domain_error("bayes factor is undefined for tau = 0");
    const double ratio = reset.sigma_reset / model.sigma;
    const double decay = 0.5 * tau * tau * ratio * ratio + model.sigma * tau / t2;
    const double numerator =
        1.0 - std::exp(-decay) * std::cos(tau * circular_difference(model.mu, reset.mu_reset) / model.sigma);
    return numerator / -std::expm1(-0.5 * tau * tau);
}

std::optional<double> log_sigma_slope(std::span<const double> sigmas, std::size_t window) {
    const std::size_t n = std::min(window, sigmas.size());
    if (n < 2) return std::nullopt;
    const auto tail = sigmas.last(n);
    const double x_mean = 0.5 * static_cast<double>(n - 1);
    double y_mean = 0.0;
    for (double s : tail) y_mean += std::log(s);
    y_mean /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - x_mean;
        sxy += dx * (std::log(tail[i]) - y_mean);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

RestartDecision restart_decision(std::span<const double> sigma_history, const PhaseModel& model,
                                 ResetState& state, double last_repetitions, double t2, Rng& rng,
                                 const TestExecutor& test_executor) {
    validate(model);
    validate(state);
    RestartDecision out;
    out.sigma = model.sigma;
    out.slope = log_sigma_slope(sigma_history, state.window);

    // Drawn every call so the random stream does not depend on the branch.
    const double u = rng.uniform();
    const bool slope_suspect = out.slope && (state.trigger == SlopeTrigger::rising
                                                 ? *out.slope >= state.gamma_threshold
                                                 : -*out.slope < state.gamma_threshold);
    const bool stalled = slope_suspect && state.cnt < state.slope_test_limit;
    const bool likely_depolarized = u > std::exp(-last_repetitions / t2);

    if (stalled || likely_depolarized) {
        out.tested = true;
        const Outcome result = test_executor(consistency_test_experiment(model, state.tau));
        if (result == Outcome::one) {
            state.cnt = 0;
            state.mu_reset = model.mu;
            state.sigma_reset = state.sigma_init;
            out.sigma = state.sigma_init;
            out.reset = true;
        } else {
            ++state.cnt;
        }
    } else if (state.count_mode == CountMode::every_step) {
        ++state.cnt;
    } else if (state.count_mode == CountMode::consecutive_passes) {
        state.cnt = 0;
    }
    out.cnt = state.cnt;
    return out;
}

PhaseModel snap_to_known(const PhaseModel& model, const EigenvalueRegistry& registry) {
    if (registry.entries.empty() || !(model.sigma < registry.delta)) return model;
    const PhaseModel* best = &registry.entries.front();
    double best_distance = circular_distance(model.mu, best->mu);
    for (const auto& entry : registry.entries) {
        const double d = circular_distance(model.mu, entry.mu);
        if (d < best_distance) {
            best = &entry;
            best_distance = d;
        }
    }
    return *best;
}

}  // namespace rfpe
