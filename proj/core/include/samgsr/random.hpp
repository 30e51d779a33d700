#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace samgsr {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from a parent seed, a stream tag and an
/// index (splitmix64 finalisation over an FNV-1a hash of the tag). Every
/// random draw in a run descends from the single top-level seed this way.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

/// 64-bit FNV-1a, used for stable fingerprints.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace samgsr
