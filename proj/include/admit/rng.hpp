#pragma once

#include <cstdint>
#include <random>

namespace admit {

// Seeded generator with portable draws. std::mt19937_64 output is fixed by
// the standard; the std:: distributions are not, so draws are done here.
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64+splitmix64";

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))), engine_(key_) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), bound > 0, rejection sampled.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // Independent child stream; children with distinct ids do not overlap
    // in practice and do not depend on how much the parent has been used.
    Rng split(std::uint64_t id) const { return Rng(key_, id); }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
};

}  // namespace admit
