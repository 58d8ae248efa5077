#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rfpe {

/// Seeded random source owned by a single filter, simulator or trial.
///
/// Streams for parallel trials are derived from a master seed with
/// `derive_seed`, so an ensemble is identical whether its trials run serially
/// or on a thread pool.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return unit_(engine_); }

    double normal(double mean, double sd) { return mean + sd * gauss_(engine_); }

    double standard_normal() { return gauss_(engine_); }

    double exponential(double mean);

    /// Uniform index in [0, n). Requires n > 0.
    std::size_t index(std::size_t n);

    bool coin() { return uniform() < 0.5; }

    std::mt19937_64& engine() { return engine_; }

    /// SplitMix64 mix of (master, stream); independent child seeds.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace rfpe
