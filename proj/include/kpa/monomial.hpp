#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace kpa {

/// Exponent vector; index position follows the declared generator order.
using Mono = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Mono& m) {
    return std::accumulate(m.begin(), m.end(), std::uint64_t{0});
}

/// Graded lexicographic order: higher total degree wins, ties broken
/// lexicographically with earlier generators weighing more.
inline bool deglex_less(const Mono& a, const Mono& b) {
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db) return da < db;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

/// Descending comparator, so that map iteration starts at the leading term.
struct DegLexGreater {
    bool operator()(const Mono& a, const Mono& b) const { return deglex_less(b, a); }
};

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline bool mono_divides(const Mono& a, const Mono& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Mono mono_div(const Mono& b, const Mono& a) {
    Mono r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - a[i];
    return r;
}

}  // namespace kpa
