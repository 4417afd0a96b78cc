#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace chaos {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Counter-based stream: output k is mix64(key + (k + 1) * golden), the key
/// derived from (seed, purpose tag, index). Streams with different keys are
/// independent, so work can be split across threads without changing results.
class Stream {
public:
    using result_type = std::uint64_t;

    Stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0)
        : key_(mix64(mix64(seed ^ hash_tag(tag)) + mix64(index + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    double normal() { return normal_(*this); }

    /// Uniform on (0, 1), never 0.
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    double rademacher() { return ((*this)() >> 63) ? 1.0 : -1.0; }

    /// Standard symmetric exponential, density exp(-|t|)/2.
    double symmetric_exponential() { return rademacher() * -std::log(uniform()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::normal_distribution<double> normal_;
};

}  // namespace chaos
