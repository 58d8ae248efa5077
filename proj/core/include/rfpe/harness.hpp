#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "rfpe/experiment_design.hpp"
#include "rfpe/likelihood.hpp"
#include "rfpe/rejection_filter.hpp"
#include "rfpe/reset_restart.hpp"

namespace rfpe {

/// Standard deviation of a phase uniform on the circle, π/√3.
inline constexpr double kUniformPhaseSigma = std::numbers::pi / std::numbers::sqrt3;

/// Which model a run reports as its estimate.
enum class ModelSelection {
    latest,                   ///< the current model
    smallest_sigma,           ///< smallest σ seen anywhere in the run
    smallest_sigma_segment,   ///< smallest σ since the last reset
};

/// Everything needed to reproduce one inference run.
struct RunConfig {
    std::size_t experiments = 150;
    UpdateVariant variant = UpdateVariant::incremental;
    FilterConfig filter;
    DesignConfig design;
    NoiseConfig noise;

    bool restarts = false;
    ResetState reset;  ///< thresholds; per-trial counters start from these values
    /// Only consulted when restarts are on; without restarts the latest model is reported.
    ModelSelection selection = ModelSelection::smallest_sigma;

    /// Let the simulated state jump between eigenstates (eigenphase tracking).
    bool tracking = false;
    std::size_t eigenphases = 1;
    double delta = 0.0;
    /// σ below which a finished segment is stored as a known eigenvalue;
    /// 0 selects Δ/2 (or 1e-4 when Δ = 0).
    double record_threshold = 0.0;

    double initial_sigma = kUniformPhaseSigma;
};

void validate(const RunConfig& cfg);

/// One row per experiment.
struct TraceRecord {
    std::size_t index = 0;  ///< experiment number N, starting at 1
    ExperimentSpec spec;
    Outcome outcome = Outcome::zero;
    double mu = 0.0;
    double sigma = 0.0;
    double error = 0.0;           ///< circular distance from μ to the current true eigenphase
    double reported_error = 0.0;  ///< same, for the estimate picked by model selection
    double cumulative_repetitions = 0.0;  ///< total applications of U so far, tests included
    std::size_t true_index = 0;
    bool restarted = false;
    bool tested = false;
    bool skipped = false;
    bool jumped = false;  ///< the true eigenstate changed during this step
};

using Trace = std::vector<TraceRecord>;

/// Design → measure → update → restart check, `cfg.experiments` times.
/// Deterministic in `seed`. The true eigenphase and the filter draw from
/// separate streams, so runs that differ only in filter settings see the same
/// ground truth.
Trace run_trial(const RunConfig& cfg, std::uint64_t seed);

/// Trial i uses seed Rng::derive_seed(master_seed, i). `threads` = 0 picks
/// the hardware concurrency; the result does not depend on it.
std::vector<Trace> run_ensemble(const RunConfig& cfg, std::size_t trials, std::uint64_t master_seed,
                                unsigned threads = 0);

struct ErrorCdf {
    std::size_t checkpoint = 0;  ///< experiment number N
    std::vector<double> thresholds;
    std::vector<double> fraction_below;
};

struct AggregateOptions {
    std::vector<std::size_t> cdf_checkpoints;
    std::vector<double> cdf_thresholds;
};

/// Per-experiment-index summaries over an ensemble; vectors are indexed by N - 1.
struct Metrics {
    std::size_t trials = 0;
    std::vector<double> median_error;
    std::vector<double> mean_error;
    std::vector<double> median_reported_error;
    std::vector<double> mean_reported_error;
    std::vector<double> median_sigma;
    std::vector<double> median_cumulative_repetitions;
    std::vector<ErrorCdf> cdfs;  ///< of the reported error
    std::vector<std::size_t> restarts_per_trial;
    std::vector<std::size_t> tests_per_trial;
    std::vector<std::size_t> skipped_per_trial;
};

Metrics aggregate(std::span<const Trace> traces, const AggregateOptions& options = {});

double median(std::vector<double> values);

/// Experiments from each eigenstate jump until the current model's error
/// first drops below `threshold`, in trace order, at most `max_events` of them.
/// A jump not recovered from before the next jump or the end of its trace
/// yields +inf.
std::vector<double> recovery_times(std::span<const Trace> traces, double threshold,
                                   std::size_t max_events = std::numeric_limits<std::size_t>::max());

struct DecayFitOptions {
    double floor = 1e-12;  ///< the window ends before the series first drops below this
    double ceiling = std::numeric_limits<double>::infinity();  ///< and starts once it is at or below this
    std::size_t min_points = 10;
};

struct DecayFit {
    double lambda = 0.0;     ///< error ≈ A exp(-λ N)
    double intercept = 0.0;  ///< log A
    std::size_t first = 0;   ///< window [first, last) as series indices (N = index + 1)
    std::size_t last = 0;
};

/// Least-squares slope of -log(error) against N over the pre-saturation
/// window. Throws std::domain_error if the window is too short or the series
/// does not decay.
DecayFit fit_decay_exponent(std::span<const double> series, const DecayFitOptions& options = {});

struct PowerLawFit {
    double exponent = 0.0;  ///< error ≈ A N^exponent
    double intercept = 0.0;
};

/// Least-squares slope of log(error) against log(N) over series indices [first, last).
PowerLawFit fit_power_law(std::span<const double> series, std::size_t first, std::size_t last);

}  // namespace rfpe
