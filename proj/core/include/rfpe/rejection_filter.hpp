#pragma once

#include <cstddef>
#include <vector>

#include "rfpe/likelihood.hpp"
#include "rfpe/random.hpp"

namespace rfpe {

/// Gaussian model of the eigenphase posterior. This pair is the filter's
/// entire state; `mu` is kept wrapped into [0, 2π).
struct PhaseModel {
    double mu = 0.0;
    double sigma = 1.0;
};

void validate(const PhaseModel& model);

struct FilterConfig {
    std::size_t samples = 200;     ///< draws from the prior per update (m)
    double kappa0 = 1.0;           ///< acceptance scale for outcome 0
    double kappa1 = 1.0;           ///< acceptance scale for outcome 1
    std::size_t min_accepts = 2;   ///< fewer accepted draws skip the update

    double kappa(Outcome e) const { return e == Outcome::zero ? kappa0 : kappa1; }
};

void validate(const FilterConfig& cfg);

enum class UpdateVariant { incremental, circular };

enum class UpdateStatus {
    updated,
    skipped_low_acceptance,  ///< accepted < min_accepts; prior kept
    skipped_degenerate,      ///< accepted draws carry no usable spread; prior kept
};

struct UpdateResult {
    PhaseModel model;
    UpdateStatus status = UpdateStatus::updated;
    std::size_t accepted = 0;
    /// Draws whose likelihood exceeded kappa, i.e. whose acceptance ratio was
    /// clamped to 1. Nonzero means kappa is misconfigured for this likelihood.
    std::size_t ratio_overflows = 0;
    bool shifted_cut = false;  ///< incremental variant chose the x + π cut

    bool skipped() const { return status != UpdateStatus::updated; }
};

/// Running mean/variance of accepted draws on the [0, 2π) cut and on the cut
/// shifted by π (Welford updates, so narrow posteriors keep their precision).
class TwoCutMoments {
  public:
    void add(double x);
    std::size_t count() const { return n_; }
    /// Mean and standard deviation from whichever cut has the smaller sample
    /// variance; ties keep the unshifted cut. Requires count() >= 2.
    struct Result {
        double mean;
        double sd;
        bool shifted;
    };
    Result result() const;

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0;
    double mean_shifted_ = 0.0, m2_shifted_ = 0.0;
};

/// Resultant-vector accumulator for the circular mean and wrapped-normal
/// standard deviation sqrt(-2 ln ρ). Angles are taken relative to a reference
/// so that 1 - ρ² stays accurate for very narrow posteriors.
class CircularMoments {
  public:
    explicit CircularMoments(double reference = 0.0) : ref_(reference) {}
    void add(double x);
    std::size_t count() const { return n_; }
    struct Result {
        double mean;
        double sd;
        double resultant;  ///< ρ in [0, 1]
    };
    /// Requires count() >= 1.
    Result result() const;

  private:
    double ref_;
    std::size_t n_ = 0;
    double sum_sin_ = 0.0;
    double sum_versine_ = 0.0;  // Σ (1 - cos d) = Σ 2 sin²(d / 2)
};

/// Resultant lengths below this are treated as a uniform (degenerate) sample.
inline constexpr double kMinResultant = 1e-6;

/// One rejection-sampling Bayes update using arithmetic moments over two cuts
/// of the circle. Trig-free apart from the likelihood itself.
UpdateResult update_incremental(const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                                const FilterConfig& cfg, const LikelihoodFn& likelihood, Rng& rng);

/// Same rejection loop; refits using circular statistics of the accepted draws.
UpdateResult update_circular(const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                             const FilterConfig& cfg, const LikelihoodFn& likelihood, Rng& rng);

UpdateResult update(UpdateVariant variant, const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                    const FilterConfig& cfg, const LikelihoodFn& likelihood, Rng& rng);

/// Accepted draws of the rejection step, unwrapped (as drawn from the prior).
/// Their density is prior x likelihood up to normalization.
struct AcceptedSamples {
    std::vector<double> values;
    std::size_t attempts = 0;

    double acceptance_rate() const {
        return attempts == 0 ? 0.0 : static_cast<double>(values.size()) / static_cast<double>(attempts);
    }
};

AcceptedSamples sample_posterior(const PhaseModel& model, Outcome e, const ExperimentSpec& exp,
                                 const LikelihoodFn& likelihood, Rng& rng, std::size_t attempts,
                                 double kappa = 1.0);

/// Equal-width histogram over [lo, hi); values outside are dropped.
std::vector<std::size_t> histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins);

}  // namespace rfpe
