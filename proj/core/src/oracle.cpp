#include "rfpe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfpe/phase.hpp"

namespace rfpe {

namespace {

void normalize(std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    if (!(total > 0.0) || !std::isfinite(total)) throw std::domain_error("grid distribution has no mass");
    for (double& x : w) x /= total;
}

void check_grid(const GridPosterior& p) {
    if (p.nodes.empty() || p.nodes.size() != p.weights.size())
        throw std::invalid_argument("grid nodes and weights must be non-empty and the same size");
}

GridPosterior local_grid(double lo, double hi, std::size_t size) {
    GridPosterior g;
    g.nodes.resize(size);
    const double h = (hi - lo) / static_cast<double>(size);
    for (std::size_t j = 0; j < size; ++j) g.nodes[j] = lo + (static_cast<double>(j) + 0.5) * h;
    g.weights.assign(size, 0.0);
    return g;
}

struct CutStats {
    double mean = 0.0, var = 0.0, m4 = 0.0;
};

CutStats cut_stats(const GridPosterior& p, double shift) {
    CutStats s;
    for (std::size_t j = 0; j < p.nodes.size(); ++j) s.mean += p.weights[j] * wrap_phase(p.nodes[j] + shift);
    for (std::size_t j = 0; j < p.nodes.size(); ++j) {
        const double d = wrap_phase(p.nodes[j] + shift) - s.mean;
        const double d2 = d * d;
        s.var += p.weights[j] * d2;
        s.m4 += p.weights[j] * d2 * d2;
    }
    return s;
}

}  // namespace

GridPosterior uniform_grid(std::size_t size) {
    if (size == 0) throw std::invalid_argument("grid size must be positive");
    GridPosterior g;
    g.nodes.resize(size);
    for (std::size_t j = 0; j < size; ++j) g.nodes[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(size);
    g.weights.assign(size, 1.0 / static_cast<double>(size));
    return g;
}

GridPosterior wrapped_normal_grid(const PhaseModel& model, std::size_t size) {
    validate(model);
    if (model.sigma < 1e-3) return normal_local_grid(model, 10.0, size);
    GridPosterior g = uniform_grid(size);
    const int images = 2 + static_cast<int>(std::ceil(10.0 * model.sigma / kTwoPi));
    const double mu = wrap_phase(model.mu);
    for (std::size_t j = 0; j < size; ++j) {
        double w = 0.0;
        for (int k = -images; k <= images; ++k) {
            const double z = (g.nodes[j] - mu + kTwoPi * k) / model.sigma;
            w += std::exp(-0.5 * z * z);
        }
        g.weights[j] = w;
    }
    normalize(g.weights);
    return g;
}

GridPosterior normal_local_grid(const PhaseModel& model, double half_width, std::size_t size) {
    validate(model);
    if (!(half_width > 0.0) || size == 0) throw std::invalid_argument("local grid needs positive width and size");
    GridPosterior g = local_grid(model.mu - half_width * model.sigma, model.mu + half_width * model.sigma, size);
    for (std::size_t j = 0; j < size; ++j) {
        const double z = (g.nodes[j] - model.mu) / model.sigma;
        g.weights[j] = std::exp(-0.5 * z * z);
    }
    normalize(g.weights);
    return g;
}

double grid_evidence(const GridPosterior& prior, Outcome e, const ExperimentSpec& exp,
                     const LikelihoodFn& likelihood) {
    check_grid(prior);
    double z = 0.0;
    for (std::size_t j = 0; j < prior.nodes.size(); ++j) z += likelihood(e, prior.nodes[j], exp) * prior.weights[j];
    return z;
}

GridPosterior grid_posterior(const GridPosterior& prior, Outcome e, const ExperimentSpec& exp,
                             const LikelihoodFn& likelihood) {
    check_grid(prior);
    GridPosterior post{prior.nodes, std::vector<double>(prior.nodes.size())};
    double total = 0.0;
    for (std::size_t j = 0; j < prior.nodes.size(); ++j) {
        post.weights[j] = likelihood(e, prior.nodes[j], exp) * prior.weights[j];
        total += post.weights[j];
    }
    if (!(total > 0.0)) throw std::domain_error("outcome is impossible under the grid prior");
    for (double& w : post.weights) w /= total;
    return post;
}

GridCircularMoments grid_moments(const GridPosterior& p) {
    check_grid(p);
    double c = 0.0, s = 0.0;
    for (std::size_t j = 0; j < p.nodes.size(); ++j) {
        c += p.weights[j] * std::cos(p.nodes[j]);
        s += p.weights[j] * std::sin(p.nodes[j]);
    }
    const double rho = std::hypot(c, s);
    if (rho < 1e-9) throw std::domain_error("circular mean undefined: resultant length is zero");
    GridCircularMoments m{};
    m.mean = wrap_phase(std::atan2(s, c));
    m.resultant = std::min(rho, 1.0);
    m.sd = std::sqrt(-2.0 * std::log(m.resultant));
    double cos_mean = 0.0, cos_sq = 0.0, sin_sq = 0.0;
    for (std::size_t j = 0; j < p.nodes.size(); ++j) {
        const double d = p.nodes[j] - m.mean;
        const double cd = std::cos(d), sd = std::sin(d);
        cos_mean += p.weights[j] * cd;
        cos_sq += p.weights[j] * cd * cd;
        sin_sq += p.weights[j] * sd * sd;
    }
    m.sin_var = sin_sq;
    m.cos_var = std::max(cos_sq - cos_mean * cos_mean, 0.0);
    return m;
}

GridLinearMoments grid_linear_moments(const GridPosterior& p) {
    check_grid(p);
    GridLinearMoments m{};
    for (std::size_t j = 0; j < p.nodes.size(); ++j) m.mean += p.weights[j] * p.nodes[j];
    double var = 0.0;
    for (std::size_t j = 0; j < p.nodes.size(); ++j) {
        const double d2 = (p.nodes[j] - m.mean) * (p.nodes[j] - m.mean);
        var += p.weights[j] * d2;
        m.fourth_central += p.weights[j] * d2 * d2;
    }
    m.sd = std::sqrt(var);
    return m;
}

GridCutMoments grid_cut_moments(const GridPosterior& p) {
    check_grid(p);
    const CutStats plain = cut_stats(p, 0.0);
    const CutStats shifted = cut_stats(p, std::numbers::pi);
    if (shifted.var < plain.var) {
        return {wrap_phase(shifted.mean - std::numbers::pi), std::sqrt(shifted.var), shifted.m4, true};
    }
    return {plain.mean, std::sqrt(plain.var), plain.m4, false};
}

FlatnessCheck flatness_shift_bound(const GridPosterior& prior, const FlatnessDiagnostic& diag,
                                   std::span<const double> likelihood_values) {
    check_grid(prior);
    if (likelihood_values.size() != prior.nodes.size())
        throw std::invalid_argument("one likelihood value per grid node is required");
    if (!(diag.delta >= 0.0) || !(diag.alpha >= 10.0 * diag.delta) || !(diag.alpha > 0.0))
        throw std::invalid_argument("flatness bound requires alpha >= 10 delta");
    const double slack = 1e-12 * diag.alpha;
    for (double v : likelihood_values) {
        if (v < diag.alpha - diag.delta - slack || v > diag.alpha + diag.delta + slack)
            throw std::invalid_argument("likelihood value outside [alpha - delta, alpha + delta]");
    }

    GridPosterior post{prior.nodes, std::vector<double>(prior.nodes.size())};
    for (std::size_t j = 0; j < prior.nodes.size(); ++j) post.weights[j] = likelihood_values[j] * prior.weights[j];
    normalize(post.weights);

    const auto before = grid_linear_moments(prior);
    const auto after = grid_linear_moments(post);

    FlatnessCheck out{};
    out.shift = std::fabs(after.mean - before.mean);
    out.bound = 2.0 * diag.delta * before.sd / diag.alpha;
    out.satisfied = out.shift <= out.bound * (1.0 + 1e-9) + 1e-15;
    out.prior_variance = before.sd * before.sd;
    out.posterior_variance = after.sd * after.sd;
    out.variance_floor = out.prior_variance * (1.0 - 10.0 * diag.delta / diag.alpha);
    out.variance_satisfied = out.posterior_variance >= out.variance_floor * (1.0 - 1e-9);
    return out;
}

}  // namespace rfpe
