#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace hybridq {

// Independent purpose-tagged streams derived from one master seed, so e.g.
// the non-aggregated routing coins never perturb the workload draws.
enum class Stream : std::uint64_t {
    Workload = 0x9d2c5680aull,
    Routing = 0x61c88647bull,
    Search = 0x1f83d9abcull,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

// 64-bit engine seeded by hashing (master_seed, replication, purpose).
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t replication,
                                   Stream purpose) {
    std::uint64_t s = master_seed;
    std::uint64_t h = detail::splitmix64(s);
    s = h ^ (replication + 0x9e3779b97f4a7c15ull);
    h = detail::splitmix64(s);
    s = h ^ static_cast<std::uint64_t>(purpose);
    return std::mt19937_64(detail::splitmix64(s));
}

// Uniform on [0,1), 53-bit resolution.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1): never returns an endpoint, so log() stays finite.
inline double uniform_open01(std::mt19937_64& eng) {
    return (static_cast<double>(eng() >> 12) + 0.5) * 0x1.0p-52;
}

// Strictly positive exponential variate via inverse CDF.
inline double exponential(std::mt19937_64& eng, double mean) {
    return -mean * std::log(uniform_open01(eng));
}

// Uniform integer in [0, n).
inline std::uint32_t uniform_index(std::mt19937_64& eng, std::uint32_t n) {
    const auto k = static_cast<std::uint32_t>(uniform01(eng) * n);
    return k < n ? k : n - 1;
}

}  // namespace hybridq
