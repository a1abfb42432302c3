#pragma once

#include <cstdint>

namespace multicolor {

// Deterministic 64-bit generator (splitmix64). The standard distributions are
// implementation-defined, so anything that must reproduce byte-identical
// output across platforms draws through this instead.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed = 0) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). Rejection keeps it exactly uniform.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    int range(int lo, int hi) { // inclusive
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (next() & 1u) != 0; }

    // Derive an independent stream, e.g. one per clause group.
    static uint64_t mix(uint64_t seed, uint64_t salt) {
        SplitMix64 g(seed ^ (0x632be59bd9b4e019ull * (salt + 1)));
        return g.next();
    }

private:
    uint64_t state_;
};

} // namespace multicolor
