#include "solvdyn/rng.hpp"

#include <cmath>
#include <numbers>

namespace solvdyn {

namespace {

inline std::uint64_t rotl64(std::uint64_t x, unsigned r) {
    return (x << r) | (x >> (64u - r));
}

// rotation schedule for the 2x64 variant
constexpr unsigned kRotations[8] = {16, 42, 12, 31, 16, 32, 24, 21};
constexpr std::uint64_t kParity = 0x1BD11BDAA9FC1A22ull;

} // namespace

std::array<std::uint64_t, 2> Threefry2x64::block(std::array<std::uint64_t, 2> counter,
                                                 std::array<std::uint64_t, 2> key) {
    const std::uint64_t ks[3] = {key[0], key[1], kParity ^ key[0] ^ key[1]};
    std::uint64_t x0 = counter[0] + ks[0];
    std::uint64_t x1 = counter[1] + ks[1];
    for (unsigned round = 0; round < 20; ++round) {
        x0 += x1;
        x1 = rotl64(x1, kRotations[round % 8]);
        x1 ^= x0;
        if ((round + 1) % 4 == 0) {
            const unsigned s = (round + 1) / 4;
            x0 += ks[s % 3];
            x1 += ks[(s + 1) % 3] + static_cast<std::uint64_t>(s);
        }
    }
    return {x0, x1};
}

double uniform_from_bits(std::uint64_t bits) {
    // 53 mantissa bits with the low bit forced on, so the value is an odd
    // multiple of 2^-53: exactly representable and never 0 or 1.
    return static_cast<double>((bits >> 11) | 1u) * 0x1.0p-53;
}

std::array<double, 2> NormalStream::normal_pair(std::uint64_t pair) const {
    const auto words = Threefry2x64::block({pair, 0}, key_);
    const double u1 = uniform_from_bits(words[0]);
    const double u2 = uniform_from_bits(words[1]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

double NormalStream::normal(std::uint64_t index) const {
    const auto pair = normal_pair(index >> 1);
    return pair[index & 1u];
}

} // namespace solvdyn
