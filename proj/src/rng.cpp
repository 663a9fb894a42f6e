#include "risnoma/rng.hpp"

#include <cmath>

namespace risnoma {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::complex<double> RandomStream::complex_normal() {
    static const double scale = 1.0 / std::sqrt(2.0);
    const double re = normal();
    const double im = normal();
    return {scale * re, scale * im};
}

}  // namespace risnoma
