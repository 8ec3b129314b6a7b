#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace kpa {

/// Arbitrary-precision integer and exact rational coefficients.
/// cpp_rational keeps gcd(num, den) = 1 and den > 0 as internal invariants,
/// which is exactly the canonical form required of coefficients.
using Int = boost::multiprecision::cpp_int;
using Scalar = boost::multiprecision::cpp_rational;

inline Int scalar_num(const Scalar& s) { return boost::multiprecision::numerator(s); }
inline Int scalar_den(const Scalar& s) { return boost::multiprecision::denominator(s); }

inline int sign_of(const Scalar& s) { return s.sign(); }

/// gcd on rationals: gcd(a/b, c/d) = gcd(a,c)/lcm(b,d), the largest rational
/// dividing both with integer quotients. Used for polynomial content.
inline Scalar scalar_content_gcd(const Scalar& a, const Scalar& b) {
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    if (a.is_zero()) return abs(b);
    if (b.is_zero()) return abs(a);
    Int num = gcd(scalar_num(a), scalar_num(b));
    Int den = lcm(scalar_den(a), scalar_den(b));
    return Scalar(num, den);
}

inline std::optional<Int> int_sqrt_exact(const Int& n) {
    if (n < 0) return std::nullopt;
    Int r = boost::multiprecision::sqrt(n);
    if (r * r != n) return std::nullopt;
    return r;
}

/// Positive square root in Q, if one exists.
inline std::optional<Scalar> scalar_sqrt_exact(const Scalar& s) {
    if (s.sign() < 0) return std::nullopt;
    auto rn = int_sqrt_exact(scalar_num(s));
    if (!rn) return std::nullopt;
    auto rd = int_sqrt_exact(scalar_den(s));
    if (!rd) return std::nullopt;
    return Scalar(*rn, *rd);
}

inline std::string scalar_to_string(const Scalar& s) { return s.str(); }

}  // namespace kpa
