#ifndef RELAYCAP_RNG_HPP
#define RELAYCAP_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace relaycap::rng {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so trials can be sharded across workers in any
// order and still reproduce bit-identically.
inline constexpr std::uint64_t splitmix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t counter) noexcept {
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ stream);
    return splitmix(h ^ counter);
}

// Uniform on (0, 1]; never returns 0 so log() is safe.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter) noexcept {
    return static_cast<double>((bits(seed, stream, counter) >> 11) + 1) * 0x1.0p-53;
}

// Circularly symmetric complex Gaussian CN(0,1): real/imag parts are
// independent N(0, 1/2). Consumes counters 2*index and 2*index+1.
inline std::complex<double> cnormal(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
    const double u1 = uniform01(seed, stream, 2 * index);
    const double u2 = uniform01(seed, stream, 2 * index + 1);
    const double r = std::sqrt(-std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

// Exp(1).
inline double exponential(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter) noexcept {
    return -std::log(uniform01(seed, stream, counter));
}

// Rayleigh with alpha^2 = 1/2, i.e. the modulus of a CN(0,1) draw.
inline double rayleigh(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t counter) noexcept {
    return std::sqrt(-std::log(uniform01(seed, stream, counter)));
}

}  // namespace relaycap::rng

#endif
