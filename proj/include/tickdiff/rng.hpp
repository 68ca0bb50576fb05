// rng.hpp: portable, versioned random streams.
//
// The standard distributions (std::normal_distribution, std::shuffle,
// std::uniform_int_distribution) are implementation-defined, so draws are
// built here on top of std::mt19937_64, whose output sequence the standard
// fixes bit for bit:
//
//   uniform     (u64 >> 11) * 2^-53, in [0, 1)
//   gaussian    Marsaglia polar method, second variate cached
//   index(n)    masked rejection sampling (unbiased)
//   exponential -log(1 - u)
//
// Sub-seeds: FNV-1a-64 of a stage name mixed into the parent seed through
// splitmix64, so adding a stage leaves every other stage's stream untouched.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace tickdiff {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/marsaglia-polar/v1";

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Seed for a named pipeline stage.
std::uint64_t stage_seed(std::uint64_t global_seed, std::string_view stage) noexcept;

/// Seed for the i-th independent replicate under a stage seed.
std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t index) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    double gaussian();
    double exponential();
    std::uint64_t index(std::uint64_t n);

    /// Fisher-Yates, last element first.
    template <typename T>
    void shuffle(std::span<T> xs)
    {
        for (std::size_t i = xs.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(index(i));
            std::swap(xs[i - 1], xs[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Uniform random permutation of 0..n-1.
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

} // namespace tickdiff
