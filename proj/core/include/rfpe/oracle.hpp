#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rfpe/likelihood.hpp"
#include "rfpe/rejection_filter.hpp"

namespace rfpe {

/// Discretized phase distribution: probability masses on a uniform grid.
/// Full-circle grids cover [0, 2π); local grids cover an interval of the real
/// line around a narrow model and are not wrapped.
struct GridPosterior {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr std::size_t kDefaultGridSize = std::size_t{1} << 14;

/// Uniform prior over the full circle.
GridPosterior uniform_grid(std::size_t size = kDefaultGridSize);

/// Wrapped-normal prior. Uses the full circle when σ >= 1e-3, otherwise a
/// local grid on [μ - 10σ, μ + 10σ].
GridPosterior wrapped_normal_grid(const PhaseModel& model, std::size_t size = kDefaultGridSize);

/// Unwrapped normal prior on [μ - half_width·σ, μ + half_width·σ].
GridPosterior normal_local_grid(const PhaseModel& model, double half_width = 10.0,
                                std::size_t size = kDefaultGridSize);

/// Exact Bayes update on the grid. Throws std::domain_error if the outcome has
/// zero probability under the prior.
GridPosterior grid_posterior(const GridPosterior& prior, Outcome e, const ExperimentSpec& exp,
                             const LikelihoodFn& likelihood);

/// Evidence P(e) = Σ P(e | node) w.
double grid_evidence(const GridPosterior& prior, Outcome e, const ExperimentSpec& exp,
                     const LikelihoodFn& likelihood);

struct GridCircularMoments {
    double mean;       ///< arg Σ w e^{i x}, in [0, 2π)
    double sd;         ///< sqrt(-2 ln ρ)
    double resultant;  ///< ρ
    double sin_var;    ///< E[sin²(x - mean)], for standard errors of the mean
    double cos_var;    ///< Var[cos(x - mean)], for standard errors of the SD
};

/// Circular moments. Throws std::domain_error when ρ ≈ 0.
GridCircularMoments grid_moments(const GridPosterior& p);

struct GridLinearMoments {
    double mean;
    double sd;
    double fourth_central;  ///< E[(x - mean)^4]
};

/// Arithmetic moments of the node coordinates as given (no wrapping).
GridLinearMoments grid_linear_moments(const GridPosterior& p);

struct GridCutMoments {
    double mean;  ///< wrapped into [0, 2π)
    double sd;
    double fourth_central;
    bool shifted;
};

/// Exact counterpart of the incremental filter's refit: arithmetic moments on
/// the [0, 2π) cut and on the π-shifted cut, keeping the smaller variance.
GridCutMoments grid_cut_moments(const GridPosterior& p);

struct FlatnessDiagnostic {
    double alpha;  ///< baseline likelihood level
    double delta;  ///< bound on |P(E | x_j) - alpha|
};

struct FlatnessCheck {
    double shift;            ///< |μ1 - μ0| from the exact grid update
    double bound;            ///< 2δσ/α
    bool satisfied;
    double prior_variance;
    double posterior_variance;
    double variance_floor;   ///< σ²(1 - 10δ/α)
    bool variance_satisfied;
};

/// Checks the mean-shift bound for a nearly flat likelihood using arithmetic
/// moments of the node coordinates. Throws std::invalid_argument when α < 10δ,
/// when sizes differ, or when a likelihood value leaves [α - δ, α + δ].
FlatnessCheck flatness_shift_bound(const GridPosterior& prior, const FlatnessDiagnostic& diag,
                                   std::span<const double> likelihood_values);

}  // namespace rfpe
