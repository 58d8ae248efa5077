#include "rfpe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "rfpe/phase.hpp"
#include "rfpe/simulator.hpp"

namespace rfpe {

void validate(const RunConfig& cfg) {
    validate(cfg.filter);
    validate(cfg.design);
    validate(cfg.noise);
    validate(cfg.reset);
    if (cfg.eigenphases == 0) throw std::invalid_argument("system needs at least one eigenphase");
    if (!(cfg.delta >= 0.0)) throw std::invalid_argument("gap must be non-negative");
    if (!(cfg.record_threshold >= 0.0)) throw std::invalid_argument("record threshold must be non-negative");
    if (!(cfg.initial_sigma > 0.0)) throw std::invalid_argument("initial sigma must be positive");
}

namespace {

double default_record_threshold(const RunConfig& cfg) {
    if (cfg.record_threshold > 0.0) return cfg.record_threshold;
    return cfg.delta > 0.0 ? 0.5 * cfg.delta : 1e-4;
}

}  // namespace

Trace run_trial(const RunConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    Rng system_rng(Rng::derive_seed(seed, 0));
    Rng filter_rng(Rng::derive_seed(seed, 1));

    SystemState sys = make_system(cfg.eigenphases, cfg.delta, cfg.noise, system_rng);
    const LikelihoodFn likelihood = model_likelihood(cfg.noise.t2);
    const double record_threshold = default_record_threshold(cfg);

    PhaseModel model{kTwoPi * filter_rng.uniform(), cfg.initial_sigma};
    ResetState reset = cfg.reset;
    reset.cnt = 0;
    reset.mu_reset = model.mu;
    reset.sigma_reset = model.sigma;

    EigenvalueRegistry registry{{}, cfg.delta};
    std::vector<double> sigma_history;
    sigma_history.reserve(cfg.experiments);

    PhaseModel best_overall = model;  // smallest σ seen in the whole run
    PhaseModel best_segment = model;  // smallest σ since the last reset
    bool after_restart = false;
    bool snapped = false;
    double total_repetitions = 0.0;

    Trace trace;
    trace.reserve(cfg.experiments);

    for (std::size_t n = 1; n <= cfg.experiments; ++n) {
        TraceRecord rec;
        rec.index = n;
        const std::size_t state_before = sys.current;

        rec.spec = pgh_t2(model, cfg.noise.t2, cfg.design, filter_rng);
        rec.outcome = sample_outcome(sys, rec.spec, system_rng);
        total_repetitions += rec.spec.repetitions;
        if (cfg.tracking) depolarize_step(sys, rec.spec, system_rng);

        const UpdateResult upd = update(cfg.variant, model, rec.outcome, rec.spec, cfg.filter, likelihood, filter_rng);
        model = upd.model;
        rec.skipped = upd.skipped();
        sigma_history.push_back(model.sigma);

        if (cfg.restarts) {
            const auto executor = [&](const ExperimentSpec& test) {
                total_repetitions += test.repetitions;
                const Outcome o = sample_outcome(sys, test, system_rng);
                if (cfg.tracking) depolarize_step(sys, test, system_rng);
                return o;
            };
            const RestartDecision decision = restart_decision(sigma_history, model, reset, rec.spec.repetitions,
                                                              cfg.noise.t2, filter_rng, executor);
            rec.tested = decision.tested;
            if (decision.reset) {
                if (best_segment.sigma < record_threshold) registry.record(best_segment);
                model.sigma = decision.sigma;
                rec.restarted = true;
                after_restart = true;
                snapped = false;
                sigma_history.clear();
                sigma_history.push_back(model.sigma);
                best_segment = model;
            }
            if (after_restart && !snapped && model.sigma < registry.delta && !registry.entries.empty()) {
                model = snap_to_known(model, registry);
                snapped = true;
                sigma_history.back() = model.sigma;
            }
        }

        if (model.sigma < best_segment.sigma) best_segment = model;
        if (model.sigma < best_overall.sigma) best_overall = model;

        PhaseModel reported = model;
        if (cfg.restarts && cfg.selection == ModelSelection::smallest_sigma) reported = best_overall;
        if (cfg.restarts && cfg.selection == ModelSelection::smallest_sigma_segment) reported = best_segment;

        rec.mu = model.mu;
        rec.sigma = model.sigma;
        rec.true_index = sys.current;
        rec.jumped = sys.current != state_before;
        rec.error = circular_distance(model.mu, sys.current_phase());
        rec.reported_error = circular_distance(reported.mu, sys.current_phase());
        rec.cumulative_repetitions = total_repetitions;
        trace.push_back(rec);
    }
    return trace;
}

std::vector<Trace> run_ensemble(const RunConfig& cfg, std::size_t trials, std::uint64_t master_seed,
                                unsigned threads) {
    validate(cfg);
    std::vector<Trace> out(trials);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < trials; i = next++) out[i] = run_trial(cfg, Rng::derive_seed(master_seed, i));
    };
    if (threads <= 1) {
        worker();
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();  // joins
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

Metrics aggregate(std::span<const Trace> traces, const AggregateOptions& options) {
    if (traces.empty()) throw std::invalid_argument("aggregate needs at least one trace");
    std::size_t length = traces.front().size();
    for (const auto& t : traces) length = std::min(length, t.size());

    Metrics m;
    m.trials = traces.size();
    std::vector<double> err(traces.size()), rep(traces.size()), sig(traces.size()), reps(traces.size());
    for (std::size_t i = 0; i < length; ++i) {
        double err_sum = 0.0, rep_sum = 0.0;
        for (std::size_t t = 0; t < traces.size(); ++t) {
            const auto& r = traces[t][i];
            err[t] = r.error;
            rep[t] = r.reported_error;
            sig[t] = r.sigma;
            reps[t] = r.cumulative_repetitions;
            err_sum += r.error;
            rep_sum += r.reported_error;
        }
        const double n = static_cast<double>(traces.size());
        m.median_error.push_back(median(err));
        m.mean_error.push_back(err_sum / n);
        m.median_reported_error.push_back(median(rep));
        m.mean_reported_error.push_back(rep_sum / n);
        m.median_sigma.push_back(median(sig));
        m.median_cumulative_repetitions.push_back(median(reps));
    }

    for (std::size_t checkpoint : options.cdf_checkpoints) {
        if (checkpoint == 0 || checkpoint > length) throw std::invalid_argument("CDF checkpoint outside the traces");
        ErrorCdf cdf{checkpoint, options.cdf_thresholds, {}};
        for (double x : options.cdf_thresholds) {
            std::size_t below = 0;
            for (const auto& t : traces) below += t[checkpoint - 1].reported_error < x ? 1 : 0;
            cdf.fraction_below.push_back(static_cast<double>(below) / static_cast<double>(traces.size()));
        }
        m.cdfs.push_back(std::move(cdf));
    }

    for (const auto& t : traces) {
        std::size_t restarts = 0, tests = 0, skipped = 0;
        for (const auto& r : t) {
            restarts += r.restarted;
            tests += r.tested;
            skipped += r.skipped;
        }
        m.restarts_per_trial.push_back(restarts);
        m.tests_per_trial.push_back(tests);
        m.skipped_per_trial.push_back(skipped);
    }
    return m;
}

namespace {

struct LineFit {
    double slope, intercept;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (!(sxx > 0.0)) throw std::domain_error("line fit needs at least two distinct abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace

DecayFit fit_decay_exponent(std::span<const double> series, const DecayFitOptions& options) {
    std::size_t first = 0;
    while (first < series.size() && !(series[first] <= options.ceiling)) ++first;
    std::size_t last = first;
    while (last < series.size() && series[last] >= options.floor) ++last;
    if (last - first < std::max<std::size_t>(options.min_points, 2))
        throw std::domain_error("decay fit window holds too few points");

    std::vector<double> x, y;
    for (std::size_t i = first; i < last; ++i) {
        if (!(series[i] > 0.0)) throw std::domain_error("decay fit needs a positive series");
        x.push_back(static_cast<double>(i + 1));
        y.push_back(-std::log(series[i]));
    }
    const LineFit fit = least_squares(x, y);
    if (!(fit.slope > 0.0)) throw std::domain_error("series does not decay");
    return {fit.slope, -fit.intercept, first, last};
}

PowerLawFit fit_power_law(std::span<const double> series, std::size_t first, std::size_t last) {
    if (last > series.size() || last < first + 2) throw std::invalid_argument("power-law window is invalid");
    std::vector<double> x, y;
    for (std::size_t i = first; i < last; ++i) {
        if (!(series[i] > 0.0)) throw std::domain_error("power-law fit needs a positive series");
        x.push_back(std::log(static_cast<double>(i + 1)));
        y.push_back(std::log(series[i]));
    }
    const LineFit fit = least_squares(x, y);
    return {fit.slope, fit.intercept};
}

std::vector<double> recovery_times(std::span<const Trace> traces, double threshold, std::size_t max_events) {
    std::vector<double> out;
    for (const Trace& trace : traces) {
        for (std::size_t i = 0; i < trace.size() && out.size() < max_events; ++i) {
            if (!trace[i].jumped) continue;
            double steps = std::numeric_limits<double>::infinity();
            for (std::size_t j = i; j < trace.size(); ++j) {
                if (j > i && trace[j].jumped) break;
                if (trace[j].error < threshold) {
                    steps = static_cast<double>(j - i);
                    break;
                }
            }
            out.push_back(steps);
        }
    }
    return out;
}

}  // namespace rfpe
