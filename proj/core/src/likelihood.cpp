#include "rfpe/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include "rfpe/phase.hpp"

namespace rfpe {

void validate(const ExperimentSpec& exp) {
    if (!(exp.repetitions > 0.0)) throw std::invalid_argument("experiment repetitions must be positive");
    if (!std::isfinite(exp.theta)) throw std::invalid_argument("experiment theta must be finite");
}

void validate(const NoiseConfig& noise) {
    if (!(noise.t2 > 0.0)) throw std::invalid_argument("t2 must be positive");
    if (!(noise.gamma >= 0.0 && noise.gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
}

double likelihood_ideal(Outcome e, double phi, const ExperimentSpec& exp) {
    // Nearest branch of φ - θ: identical for integer M, and keeps real-valued M
    // (the consistency test) a function on the circle.
    const double c = std::cos(exp.repetitions * circular_difference(phi, exp.theta));
    return e == Outcome::zero ? 0.5 * (1.0 + c) : 0.5 * (1.0 - c);
}

double likelihood_decoherent(Outcome e, double phi, const ExperimentSpec& exp, double t2) {
    if (std::isinf(t2)) return likelihood_ideal(e, phi, exp);
    const double visibility = std::exp(-exp.repetitions / t2);
    return visibility * likelihood_ideal(e, phi, exp) + 0.5 * (1.0 - visibility);
}

LikelihoodFn model_likelihood(double t2) {
    if (!(t2 > 0.0)) throw std::invalid_argument("t2 must be positive");
    if (std::isinf(t2)) return likelihood_ideal;
    return [t2](Outcome e, double phi, const ExperimentSpec& exp) {
        return likelihood_decoherent(e, phi, exp, t2);
    };
}

}  // namespace rfpe
