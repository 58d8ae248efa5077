#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rfpe/likelihood.hpp"
#include "rfpe/random.hpp"
#include "rfpe/rejection_filter.hpp"

namespace rfpe {

/// What the restart counter cnt counts; it gates slope-triggered tests.
enum class CountMode {
    every_step,          ///< every step since the last reset, tested or not
    passes,              ///< passed tests since the last reset
    consecutive_passes,  ///< passed tests in the current run of suspect steps
};

/// When the slope of log σ marks the model as suspect.
enum class SlopeTrigger {
    rising,   ///< slope >= Γ: σ grows
    stalled,  ///< -slope < Γ: σ shrinks slower than e^{-Γ} per step
};

/// Bookkeeping for failure detection and restarts.
struct ResetState {
    std::size_t cnt = 0;             ///< see CountMode
    double sigma_init = 1.8137993642342178;  ///< π/√3, SD of a uniform phase
    double mu_reset = 0.0;           ///< model mean right after the last reset
    double sigma_reset = 1.8137993642342178;
    double gamma_threshold = 0.1;    ///< slope threshold Γ on d log σ / dN
    double tau = 0.1;                ///< consistency-test strength
    std::size_t window = 10;         ///< trailing records used for the slope
    std::size_t slope_test_limit = 5;  ///< slope-triggered tests only while cnt < limit
    CountMode count_mode = CountMode::consecutive_passes;
    SlopeTrigger trigger = SlopeTrigger::stalled;
};

void validate(const ResetState& state);

/// Previously learned eigenphases and the promised minimum gap Δ between them.
struct EigenvalueRegistry {
    std::vector<PhaseModel> entries;
    double delta = 0.0;

    /// Records a learned eigenphase. An entry closer than Δ/2 to an existing one
    /// replaces it only if it is more certain.
    void record(const PhaseModel& model);
};

/// Probability of outcome 0 for the consistency test under a correct prior:
/// (1 + exp(-τ²/2)) / 2.
double reset_pass_probability(double tau);

/// Likelihood ratio Pr(1 | prior wrong) / Pr(1 | prior correct) for the
/// consistency-test outcome 1. Throws std::domain_error when τ = 0.
double bayes_factor(const PhaseModel& model, const ResetState& reset, double t2);

/// Least-squares slope of log σ against experiment index over the trailing
/// `window` entries; nullopt with fewer than two entries.
std::optional<double> log_sigma_slope(std::span<const double> sigmas, std::size_t window);

/// Runs the consistency experiment and reports its outcome.
using TestExecutor = std::function<Outcome(const ExperimentSpec&)>;

struct RestartDecision {
    double sigma = 0.0;           ///< σ to continue with (σ_init after a reset)
    std::size_t cnt = 0;
    bool tested = false;
    bool reset = false;
    std::optional<double> slope;  ///< the D used for the decision
};

/// Decides whether the current model is suspect, tests it if so, and resets σ
/// on a failed test. Updates `state` (cnt, and μ_reset/σ_reset on reset). The
/// mean is never touched here.
RestartDecision restart_decision(std::span<const double> sigma_history, const PhaseModel& model,
                                 ResetState& state, double last_repetitions, double t2, Rng& rng,
                                 const TestExecutor& test_executor);

/// After a restart: once σ < Δ, adopt the circularly closest known eigenvalue.
PhaseModel snap_to_known(const PhaseModel& model, const EigenvalueRegistry& registry);

}  // namespace rfpe
