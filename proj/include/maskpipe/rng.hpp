#pragma once

#include <cstdint>
#include <vector>

namespace maskpipe {

// SplitMix64 (Steele, Lea, Vigna). All seeded behavior in the toolkit runs on
// this generator so that identical seeds give identical artifacts on every
// platform; the exact sequence is frozen by golden tests.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound). bound must be > 0; plain modulo, bias is
    // negligible for the cohort sizes involved and keeps the sequence trivial
    // to re-derive.
    uint64_t next_below(uint64_t bound) { return next() % bound; }

private:
    uint64_t state_;
};

// In-place Fisher-Yates driven by SplitMix64, i from n-1 down to 1,
// j = next() mod (i+1).
template <typename T>
void fisher_yates(std::vector<T>& v, SplitMix64& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(rng.next_below(i));
        using std::swap;
        swap(v[i - 1], v[j]);
    }
}

}  // namespace maskpipe
