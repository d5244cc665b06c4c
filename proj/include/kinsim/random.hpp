#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kinsim {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for stream `index` of `parent`. Streams with distinct
/// (parent, index) are statistically independent.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

/// Child seed keyed by a purpose label, e.g. derive_seed(run_seed, "traits").
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);

}  // namespace kinsim
