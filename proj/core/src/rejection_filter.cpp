#include "rfpe/rejection_filter.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rfpe/phase.hpp"

namespace rfpe {

void validate(const PhaseModel& model) {
    if (!std::isfinite(model.mu)) throw std::invalid_argument("model mean must be finite");
    if (!(model.sigma > 0.0) || !std::isfinite(model.sigma))
        throw std::invalid_argument("model sigma must be positive and finite");
}

void validate(const FilterConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("filter needs at least one sample per update");
    if (!(cfg.kappa0 > 0.0 && cfg.kappa0 <= 1.0) || !(cfg.kappa1 > 0.0 && cfg.kappa1 <= 1.0))
        throw std::invalid_argument("kappa must lie in (0, 1]");
    if (cfg.min_accepts < 2) throw std::invalid_argument("min_accepts must be at least 2");
}

void TwoCutMoments::add(double x) {
    const double shifted = wrap_phase(x + std::numbers::pi);
    ++n_;
    const double inv_n = 1.0 / static_cast<double>(n_);

    double d = x - mean_;
    mean_ += d * inv_n;
    m2_ += d * (x - mean_);

    d = shifted - mean_shifted_;
    mean_shifted_ += d * inv_n;
    m2_shifted_ += d * (shifted - mean_shifted_);
}

TwoCutMoments::Result TwoCutMoments::result() const {
    if (n_ < 2) throw std::logic_error("two-cut moments need at least two samples");
    const double denom = static_cast<double>(n_ - 1);
    const double var = m2_ / denom;
    const double var_shifted = m2_shifted_ / denom;
    if (var_shifted < var) {
        return {wrap_phase(mean_shifted_ - std::numbers::pi), std::sqrt(var_shifted), true};
    }
    return {mean_, std::sqrt(var), false};
}

void CircularMoments::add(double x) {
    const double d = x - ref_;
    const double h = std::sin(0.5 * d);
    sum_sin_ += std::sin(d);
    sum_versine_ += 2.0 * h * h;
    ++n_;
}

CircularMoments::Result CircularMoments::result() const {
    if (n_ == 0) throw std::logic_error("circular moments need at least one sample");
    const double n = static_cast<double>(n_);
    const double s = sum_sin_ / n;
    const double h = sum_versine_ / n;
    const double c = 1.0 - h;
    // 1 - ρ² = 1 - c² - s², rearranged to avoid cancelling against 1.
    double v = 2.0 * h - h * h - s * s;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    const double rho = std::sqrt(1.0 - v);
    const double sd = v >= 1.0 ? std::numeric_limits<double>::infinity() : std::sqrt(-std::log1p(-v));
    return {wrap_phase(ref_ + std::atan2(s, c)), sd, rho};
}

namespace {

template <class Accumulate>
std::pair<std::size_t, std::size_t> rejection_loop(const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                                                   std::size_t attempts, double kappa,
                                                   const LikelihoodFn& likelihood, Rng& rng,
                                                   Accumulate&& accumulate) {
    std::size_t accepted = 0;
    std::size_t overflows = 0;
    for (std::size_t i = 0; i < attempts; ++i) {
        const double phi = rng.normal(model.mu, model.sigma);
        const double u = rng.uniform();
        const double p = likelihood(e, wrap_phase(phi), exp);
        if (p > kappa) ++overflows;
        if (p >= kappa * u) {
            accumulate(phi);
            ++accepted;
        }
    }
    return {accepted, overflows};
}

void check_inputs(const PhaseModel& model, const ExperimentSpec& exp, const FilterConfig& cfg) {
    validate(model);
    validate(exp);
    validate(cfg);
}

}  // namespace

UpdateResult update_incremental(const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                                const FilterConfig& cfg, const LikelihoodFn& likelihood, Rng& rng) {
    check_inputs(model, exp, cfg);
    TwoCutMoments moments;
    auto [accepted, overflows] = rejection_loop(model, e, exp, cfg.samples, cfg.kappa(e), likelihood, rng,
                                                [&](double phi) { moments.add(wrap_phase(phi)); });

    UpdateResult out{model, UpdateStatus::updated, accepted, overflows, false};
    if (accepted < cfg.min_accepts) {
        out.status = UpdateStatus::skipped_low_acceptance;
        return out;
    }
    const auto r = moments.result();
    if (!(r.sd > 0.0) || !std::isfinite(r.sd)) {
        out.status = UpdateStatus::skipped_degenerate;
        return out;
    }
    out.model = {wrap_phase(r.mean), r.sd};
    out.shifted_cut = r.shifted;
    return out;
}

UpdateResult update_circular(const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                             const FilterConfig& cfg, const LikelihoodFn& likelihood, Rng& rng) {
    check_inputs(model, exp, cfg);
    CircularMoments moments(model.mu);
    auto [accepted, overflows] = rejection_loop(model, e, exp, cfg.samples, cfg.kappa(e), likelihood, rng,
                                                [&](double phi) { moments.add(phi); });

    UpdateResult out{model, UpdateStatus::updated, accepted, overflows, false};
    if (accepted < cfg.min_accepts) {
        out.status = UpdateStatus::skipped_low_acceptance;
        return out;
    }
    const auto r = moments.result();
    if (r.resultant < kMinResultant || !(r.sd > 0.0) || !std::isfinite(r.sd)) {
        out.status = UpdateStatus::skipped_degenerate;
        return out;
    }
    out.model = {r.mean, r.sd};
    return out;
}

UpdateResult update(UpdateVariant variant, const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                    const FilterConfig& cfg, const LikelihoodFn& likelihood, Rng& rng) {
    return variant == UpdateVariant::incremental ? update_incremental(model, e, exp, cfg, likelihood, rng)
                                                 : update_circular(model, e, exp, cfg, likelihood, rng);
}

AcceptedSamples sample_posterior(const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                                 const LikelihoodFn& likelihood, Rng& rng, std::size_t attempts, double kappa) {
    validate(model);
    validate(exp);
    if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in (0, 1]");
    AcceptedSamples out;
    out.attempts = attempts;
    rejection_loop(model, e, exp, attempts, kappa, likelihood, rng,
                   [&](double phi) { out.values.push_back(phi); });
    return out;
}

std::vector<std::size_t> histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins) {
    if (bins == 0 || !(hi > lo)) throw std::invalid_argument("histogram needs bins > 0 and hi > lo");
    std::vector<std::size_t> counts(bins, 0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        if (v < lo || v >= hi) continue;
        auto k = static_cast<std::size_t>((v - lo) / width);
        if (k >= bins) k = bins - 1;
        ++counts[k];
    }
    return counts;
}

}  // namespace rfpe
