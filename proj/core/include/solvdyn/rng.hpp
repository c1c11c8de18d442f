#pragma once

#include <array>
#include <cstdint>

namespace solvdyn {

/// Threefry-2x64, 20 rounds: a counter-based block cipher used as a random
/// generator. Stateless — the value at any (counter, key) is independent of
/// execution order, which is what makes ensemble results independent of the
/// parallel layout.
struct Threefry2x64 {
    static std::array<std::uint64_t, 2> block(std::array<std::uint64_t, 2> counter,
                                              std::array<std::uint64_t, 2> key);
};

/// Uniform double in (0, 1) from a 64-bit word (53-bit mantissa, offset so
/// the endpoints are never hit).
double uniform_from_bits(std::uint64_t bits);

/// Stream of standard normal deviates addressed by index, keyed by
/// (seed, stream id). Pairs of normals come from one Threefry block via
/// Box-Muller, so normal(2j) and normal(2j+1) share a block.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

    /// Standard normal deviate at the given index. Pure in (key, index).
    double normal(std::uint64_t index) const;

    /// Both deviates of pair p = index / 2; cheaper when consuming sequentially.
    std::array<double, 2> normal_pair(std::uint64_t pair) const;

private:
    std::array<std::uint64_t, 2> key_;
};

} // namespace solvdyn
