#pragma once

#include <cstdint>
#include <random>

namespace bayesrec {

/// splitmix64 finalizer; used to turn (master seed, index) pairs into
/// well-separated engine seeds so that work can be sharded across threads
/// without the result depending on the shard layout.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 1));
}

/// Fresh engine for one unit of work (one draw, one dataset).
inline std::mt19937_64 engine_for(std::uint64_t master, std::uint64_t index) {
    return std::mt19937_64(derive_seed(master, index));
}

}  // namespace bayesrec
