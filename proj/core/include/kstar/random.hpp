#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace kstar {

// The library's only random engine. Every stochastic routine takes one by
// reference so that a single seed reproduces a whole run.
using Rng = std::mt19937_64;

// Seed used when the caller does not provide one.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

// Mixes a base seed with up to three coordinates (splitmix64 finalizer), so
// that experiment cells get independent streams regardless of run order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

// Uniform index in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Index drawn with probability proportional to weights[i]. Never returns an
// index whose weight is zero while some weight is positive. Returns
// weights.size() when every weight is zero.
std::size_t weighted_index(Rng& rng, std::span<const double> weights);

}  // namespace kstar
