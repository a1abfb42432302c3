#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "multicolor/errors.hpp"
#include "multicolor/rand.hpp"

namespace multicolor {

// Family of subsets of [universe_size] claimed to be d-detecting: subset sums
// determine every function U -> {0..d-1} uniquely.
struct DetectingFamily {
    int universe_size = 0;
    int d = 2;
    std::vector<std::vector<int>> sets;
    bool verified = false; // set only by constructors after verification

    std::vector<uint64_t> masks() const {
        std::vector<uint64_t> out;
        for (const auto& s : sets) {
            uint64_t m = 0;
            for (int x : s) {
                if (x < 0 || x >= universe_size)
                    throw invalid_parameters("detecting family: element out of universe");
                m |= uint64_t{1} << x;
            }
            out.push_back(m);
        }
        return out;
    }
};

namespace detail {

inline uint64_t kernel_vectors(int universe, int d) {
    uint64_t total = 1;
    for (int i = 0; i < universe; ++i) total *= static_cast<uint64_t>(2 * d - 1);
    return total;
}

} // namespace detail

// Kernel check: the family is d-detecting iff no nonzero difference vector
// delta in {-(d-1)..d-1}^U has zero sum on every set. Equivalent to the
// pairwise f,g definition because delta = f - g ranges over exactly these
// vectors, but needs (2d-1)^|U| vectors instead of d^(2|U|) pairs.
inline bool verify_family(const DetectingFamily& fam, uint64_t kernel_cap = 100'000'000) {
    if (fam.universe_size < 1) throw invalid_parameters("verify_family: empty universe");
    if (fam.d < 2) throw invalid_parameters("verify_family: need d >= 2");
    if (fam.universe_size > 32 ||
        detail::kernel_vectors(fam.universe_size, fam.d) > kernel_cap)
        throw capacity_error("verify_family: kernel enumeration exceeds cap");

    int u = fam.universe_size;
    int d = fam.d;
    int span = 2 * d - 1;
    auto masks = fam.masks();
    int m = static_cast<int>(masks.size());

    std::vector<std::vector<int>> member_sets(u);
    for (int s = 0; s < m; ++s)
        for (int x = 0; x < u; ++x)
            if (masks[s] >> x & 1) member_sets[x].push_back(s);

    // Odometer over all difference vectors, with incremental set sums.
    std::vector<int> digit(u, 0); // delta[x] = digit[x] - (d-1)
    std::vector<long long> dot(m, 0);
    int nonzero_digits = u; // start at delta = all -(d-1), nonzero since d >= 2
    int nonzero_dots = 0;
    for (int s = 0; s < m; ++s) {
        dot[s] = -static_cast<long long>(d - 1) * __builtin_popcountll(masks[s]);
        if (dot[s] != 0) ++nonzero_dots;
    }

    auto bump_digit = [&](int x, int delta_change) {
        int old = digit[x] - (d - 1);
        int now = old + delta_change;
        if (old != 0 && now == 0) --nonzero_digits;
        if (old == 0 && now != 0) ++nonzero_digits;
        digit[x] += delta_change;
        for (int s : member_sets[x]) {
            if (dot[s] != 0) --nonzero_dots;
            dot[s] += delta_change;
            if (dot[s] != 0) ++nonzero_dots;
        }
    };

    uint64_t total = detail::kernel_vectors(u, d);
    for (uint64_t step = 0;; ++step) {
        if (nonzero_digits > 0 && nonzero_dots == 0) return false;
        if (step + 1 == total) break;
        int x = 0;
        while (digit[x] == span - 1) {
            bump_digit(x, -(span - 1));
            ++x;
        }
        bump_digit(x, +1);
    }
    return true;
}

// Derandomized halving: scan candidate sets in bitmask order and keep any set
// that distinguishes at least half of the still-undistinguished difference
// classes. A random set distinguishes each class with probability >= 1/2, so
// a keeper always exists and at most ceil(2 n log2 d) + 1 rounds are needed.
inline DetectingFamily greedy_family(int universe_size, int d,
                                     uint64_t kernel_cap = 100'000'000) {
    if (universe_size < 1) throw invalid_parameters("greedy_family: empty universe");
    if (d < 2) throw invalid_parameters("greedy_family: need d >= 2");
    if (universe_size > 32 || detail::kernel_vectors(universe_size, d) > kernel_cap ||
        detail::kernel_vectors(universe_size, d) >= (uint64_t{1} << 32))
        throw capacity_error("greedy_family: kernel enumeration exceeds cap");

    int u = universe_size;
    int span = 2 * d - 1;
    uint64_t total = detail::kernel_vectors(u, d);

    auto decode_dot = [&](uint64_t code, uint64_t mask) -> long long {
        long long s = 0;
        for (int x = 0; x < u; ++x) {
            int dig = static_cast<int>(code % span) - (d - 1);
            code /= span;
            if (mask >> x & 1) s += dig;
        }
        return s;
    };

    uint64_t zero_code = 0;
    {
        uint64_t p = 1;
        for (int x = 0; x < u; ++x) {
            zero_code += static_cast<uint64_t>(d - 1) * p;
            p *= span;
        }
    }
    std::vector<uint32_t> remaining; // codes fit: the kernel cap is below 2^32
    remaining.reserve(total - 1);
    for (uint64_t code = 0; code < total; ++code)
        if (code != zero_code) remaining.push_back(static_cast<uint32_t>(code));

    std::vector<uint64_t> kept;
    while (!remaining.empty()) {
        bool found = false;
        for (uint64_t mask = 1; mask < (uint64_t{1} << u); ++mask) {
            uint64_t cnt = 0;
            for (uint32_t code : remaining)
                if (decode_dot(code, mask) != 0) ++cnt;
            if (2 * cnt >= remaining.size()) {
                kept.push_back(mask);
                std::vector<uint32_t> rest;
                for (uint32_t code : remaining)
                    if (decode_dot(code, mask) == 0) rest.push_back(code);
                remaining = std::move(rest);
                found = true;
                break;
            }
        }
        if (!found)
            throw error("greedy_family: no halving set found"); // cannot happen
    }

    DetectingFamily fam;
    fam.universe_size = u;
    fam.d = d;
    for (uint64_t mask : kept) {
        std::vector<int> s;
        for (int x = 0; x < u; ++x)
            if (mask >> x & 1) s.push_back(x);
        fam.sets.push_back(std::move(s));
    }
    fam.verified = verify_family(fam, kernel_cap);
    return fam;
}

// Randomized construction with mandatory verification: draw target_size
// uniform nonempty subsets from the seeded generator and keep the first
// attempt that verifies; fall back to the greedy construction, then to
// singletons. The result is always verified.
inline DetectingFamily build_family(int universe_size, int d, uint64_t seed, int target_size,
                                    int attempt_limit = 64,
                                    uint64_t kernel_cap = 100'000'000) {
    if (universe_size < 1) throw invalid_parameters("build_family: empty universe");
    if (d < 2) throw invalid_parameters("build_family: need d >= 2");
    if (target_size < 1) throw invalid_parameters("build_family: need target_size >= 1");
    if (universe_size > 32)
        throw capacity_error("build_family: universe above 32 elements");

    SplitMix64 rng(seed);
    uint64_t full = (universe_size == 64) ? ~uint64_t{0}
                                          : (uint64_t{1} << universe_size) - 1;
    for (int attempt = 0; attempt < attempt_limit; ++attempt) {
        DetectingFamily fam;
        fam.universe_size = universe_size;
        fam.d = d;
        for (int i = 0; i < target_size; ++i) {
            uint64_t mask = 0;
            while (mask == 0) mask = rng.next() & full;
            std::vector<int> s;
            for (int x = 0; x < universe_size; ++x)
                if (mask >> x & 1) s.push_back(x);
            fam.sets.push_back(std::move(s));
        }
        try {
            if (verify_family(fam, kernel_cap)) {
                fam.verified = true;
                return fam;
            }
        } catch (const capacity_error&) {
            break; // verification impossible at this size: fall back
        }
    }

    try {
        return greedy_family(universe_size, d, kernel_cap);
    } catch (const capacity_error&) {
        // Singletons detect trivially (each value read off directly).
        DetectingFamily fam;
        fam.universe_size = universe_size;
        fam.d = d;
        for (int x = 0; x < universe_size; ++x) fam.sets.push_back({x});
        fam.verified = true;
        return fam;
    }
}

// ---- text format: "universe d count", then one sorted set per line ----

inline std::string family_to_text(const DetectingFamily& fam) {
    std::ostringstream out;
    out << fam.universe_size << ' ' << fam.d << ' ' << fam.sets.size() << '\n';
    for (const auto& s : fam.sets) {
        for (size_t i = 0; i < s.size(); ++i) {
            if (i) out << ' ';
            out << s[i];
        }
        out << '\n';
    }
    return out.str();
}

inline DetectingFamily family_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("detecting family: empty input", 1);
    std::istringstream header(line);
    DetectingFamily fam;
    int count = 0;
    if (!(header >> fam.universe_size >> fam.d >> count))
        throw parse_error("detecting family: malformed header", 1);
    for (int i = 0; i < count; ++i) {
        if (!std::getline(in, line))
            throw parse_error("detecting family: missing set line", i + 2);
        std::istringstream ls(line);
        std::vector<int> s;
        int x;
        while (ls >> x) s.push_back(x);
        std::sort(s.begin(), s.end());
        fam.sets.push_back(std::move(s));
    }
    return fam;
}

} // namespace multicolor
