#include "rfpe/random.hpp"

#include <cmath>
#include <stdexcept>

namespace rfpe {

double Rng::exponential(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("exponential mean must be positive");
    // 1 - u lies in (0, 1], so the log is finite.
    return -mean * std::log1p(-uniform());
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("index range must be non-empty");
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::uint64_t Rng::derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace rfpe
