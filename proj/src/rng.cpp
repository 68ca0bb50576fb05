#include "tickdiff/rng.hpp"

#include <cmath>
#include <numeric>

namespace tickdiff {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t stage_seed(std::uint64_t global_seed, std::string_view stage) noexcept
{
    return splitmix64(global_seed ^ fnv1a64(stage));
}

std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t index) noexcept
{
    return splitmix64(splitmix64(base) + index);
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian()
{
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
}

double Rng::exponential()
{
    return -std::log1p(-uniform());
}

std::uint64_t Rng::index(std::uint64_t n)
{
    if (n <= 1) return 0;
    // Smallest all-ones mask covering n-1; reject draws beyond it.
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t x;
    do {
        x = engine_() & mask;
    } while (x >= n);
    return x;
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(perm));
    return perm;
}

} // namespace tickdiff
