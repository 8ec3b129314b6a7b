#pragma once

#include <string>
#include <vector>

#include "kpa/kpa.hpp"

namespace kpa::test {

inline std::vector<Poly> poly_vars(std::size_t n) {
    std::vector<Poly> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Poly::variable(n, i));
    return v;
}

inline Poly pc(std::size_t n, long value) { return Poly::constant(n, Scalar(value)); }

inline RingElem re(const RingTagPtr& tag, const RatFunc& f) { return RingElem(tag, {f}); }

inline RingElem re(const RingTagPtr& tag, const Poly& p) { return RingElem(tag, {RatFunc(p)}); }

inline RingElem rc(const RingTagPtr& tag, long value) {
    return RingElem::constant(tag, Scalar(value));
}

inline RingElem rv(const RingTagPtr& tag, std::size_t i) {
    return RingElem::generator(tag, i);
}

/// Scalar-entry square matrix over a ring.
inline Matrix<RingElem> scalar_matrix(const RingTagPtr& tag,
                                      const std::vector<std::vector<long>>& rows) {
    const std::size_t n = rows.size();
    Matrix<RingElem> m(n, rows[0].size(), RingElem::zero(tag));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = RingElem::constant(tag, Scalar(rows[i][j]));
    return m;
}

inline Matrix<RingElem> identity_matrix(const RingTagPtr& tag, std::size_t n) {
    Matrix<RingElem> m(n, n, RingElem::zero(tag));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = RingElem::one(tag);
    return m;
}

}  // namespace kpa::test
