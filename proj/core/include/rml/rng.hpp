#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace rml {

/// Counter-splittable PRNG (xoshiro256** seeded through splitmix64).
///
/// Streams are derived from a (seed, stream) pair, so batch computations can
/// hand stream i to sample i and the result does not depend on how samples
/// are distributed over threads. Distribution helpers are written out
/// explicitly; nothing is delegated to implementation-defined std::
/// distributions, so sequences are reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t x = seed;
        auto mix = [&x]() {
            x += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            return z ^ (z >> 31);
        };
        x ^= 0x5851f42d4c957f2dull * (stream + 1);
        for (auto& si : s_) si = mix();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0x1.0p-60) u1 = uniform();
        const double m = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = m * std::sin(a);
        have_spare_ = true;
        return m * std::cos(a);
    }

    /// Uniform direction on the unit sphere in R^dim.
    std::vector<double> unit_vector(int dim) {
        std::vector<double> v(dim);
        double n2 = 0;
        do {
            n2 = 0;
            for (auto& c : v) {
                c = normal();
                n2 += c * c;
            }
        } while (n2 == 0);
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& c : v) c *= inv;
        return v;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0;
};

} // namespace rml
