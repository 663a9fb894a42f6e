#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace risnoma {

/// splitmix64 finalizer; used to derive independent seeds from (seed, tag).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

/// Seeded random source. Every consumer takes one explicitly; there is no
/// global generator.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed, 0)) {}

    std::uint64_t seed() const { return seed_; }

    /// Independent child stream. Does not advance this stream, so the child
    /// for a given tag is the same no matter how much the parent was used.
    RandomStream split(std::uint64_t tag) const { return RandomStream(mix_seed(seed_, tag + 1)); }

    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    double normal() { return normal_(engine_); }

    /// Circularly-symmetric complex Gaussian with unit variance, CN(0, 1).
    std::complex<double> complex_normal();

    bool bernoulli(double p) { return uniform() < p; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace risnoma
