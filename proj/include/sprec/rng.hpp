#pragma once

#include <cstdint>
#include <random>

namespace sprec {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from (seed, stream) with a splitmix64
/// finalizer. Used for per-row, per-trial and per-block generators so that
/// parallel execution cannot change results.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream));
}

}  // namespace sprec
