#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "kpa/matrix.hpp"
#include "kpa/ring.hpp"

namespace kpa {

/// Canonical text form. Terms print in descending graded-lex order with
/// reduced fractional coefficients, e.g. `3/2*x^2*y - 1`. Product-ring
/// elements print as `(e1, e2)`. parse/print round-trips are exact.

inline std::string to_string(const Poly& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Scalar mag = abs(c);
        if (first) {
            if (sign_of(c) < 0) os << "-";
            first = false;
        } else {
            os << (sign_of(c) < 0 ? " - " : " + ");
        }
        std::ostringstream mono;
        bool any_var = false;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (any_var) mono << "*";
            mono << names[i];
            if (m[i] > 1) mono << "^" << m[i];
            any_var = true;
        }
        if (!any_var) {
            os << scalar_to_string(mag);
        } else if (mag == Scalar(1)) {
            os << mono.str();
        } else {
            os << scalar_to_string(mag) << "*" << mono.str();
        }
    }
    return os.str();
}

namespace detail {

// A quotient side can go unparenthesized only if the whole string binds at
// least as tightly as `/`: a bare number, a bare name, or name^k.
inline bool quotient_side_is_atomic(const Poly& p) {
    if (p.term_count() != 1) return p.is_zero();
    const auto& [m, c] = p.leading();
    std::size_t vars_used = 0;
    for (auto e : m)
        if (e > 0) ++vars_used;
    if (vars_used == 0) return sign_of(c) > 0;
    return vars_used == 1 && c == Scalar(1);
}

}  // namespace detail

inline std::string to_string(const RatFunc& f, const std::vector<std::string>& names) {
    if (f.is_polynomial()) return to_string(f.num(), names);
    std::ostringstream os;
    // A single-term numerator is safe unparenthesized: `*` and `/` associate
    // left, and a leading `-` distributes over the quotient.
    if (f.num().term_count() <= 1)
        os << to_string(f.num(), names);
    else
        os << "(" << to_string(f.num(), names) << ")";
    os << "/";
    if (detail::quotient_side_is_atomic(f.den()))
        os << to_string(f.den(), names);
    else
        os << "(" << to_string(f.den(), names) << ")";
    return os.str();
}

inline std::string to_string(const RingElem& e) {
    const RingTag& tag = *e.ring();
    if (e.is_plain()) return to_string(e.value(), tag.components[0]);
    std::ostringstream os;
    os << "(";
    for (std::size_t c = 0; c < tag.component_count(); ++c) {
        if (c) os << ", ";
        os << to_string(e.component(c), tag.components[c]);
    }
    os << ")";
    return os.str();
}

inline std::string to_string(const Matrix<RingElem>& m) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) os << ", ";
        os << "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ", ";
            os << to_string(m(i, j));
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace kpa
