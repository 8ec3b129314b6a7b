#pragma once

#include <map>
#include <optional>
#include <vector>

#include "kpa/poly.hpp"

namespace kpa {

namespace detail {

/// View of a polynomial as univariate in variable v; coefficients are
/// polynomials in the remaining variables (exponent of v zeroed out).
using UniView = std::map<std::uint32_t, Poly>;

inline UniView to_univar(const Poly& p, std::size_t v) {
    UniView u;
    for (const auto& [m, c] : p.terms()) {
        Mono rest = m;
        std::uint32_t e = rest[v];
        rest[v] = 0;
        auto [it, inserted] = u.try_emplace(e, Poly::zero(p.nvars()));
        it->second.add_term(rest, c);
    }
    return u;
}

inline Poly from_univar(const UniView& u, std::size_t v, std::size_t nvars) {
    Poly p(nvars);
    for (const auto& [e, coef] : u) {
        Mono shift(nvars, 0);
        shift[v] = e;
        p += coef * Poly::term(nvars, shift, Scalar(1));
    }
    return p;
}

inline std::uint32_t udeg(const UniView& u) { return u.empty() ? 0 : u.rbegin()->first; }

inline const Poly& ulc(const UniView& u) {
    static const Poly kZero;
    return u.empty() ? kZero : u.rbegin()->second;
}

inline UniView umul_poly(const UniView& a, const Poly& c) {
    UniView r;
    for (const auto& [e, coef] : a) {
        Poly p = coef * c;
        if (!p.is_zero()) r.emplace(e, std::move(p));
    }
    return r;
}

inline UniView ushift_mul(const UniView& a, std::uint32_t k, const Poly& c) {
    UniView r;
    for (const auto& [e, coef] : a) {
        Poly p = coef * c;
        if (!p.is_zero()) r.emplace(e + k, std::move(p));
    }
    return r;
}

inline UniView usub(const UniView& a, const UniView& b) {
    UniView r = a;
    for (const auto& [e, coef] : b) {
        auto [it, inserted] = r.try_emplace(e, Poly::zero(coef.nvars()));
        it->second -= coef;
        if (it->second.is_zero()) r.erase(e);
    }
    return r;
}

/// Pseudo-remainder of A by B in the main variable: lc(B)^(deg A - deg B + 1) * A mod B.
inline UniView prem(UniView a, const UniView& b) {
    const std::uint32_t db = udeg(b);
    const Poly& lcb = ulc(b);
    std::int64_t e = static_cast<std::int64_t>(udeg(a)) - db + 1;
    while (!a.empty() && udeg(a) >= db) {
        const std::uint32_t k = udeg(a) - db;
        const Poly lca = ulc(a);
        a = usub(umul_poly(a, lcb), ushift_mul(b, k, lca));
        --e;
    }
    for (; e > 0; --e) a = umul_poly(a, lcb);
    return a;
}

}  // namespace detail

Poly poly_gcd(const Poly& a, const Poly& b);

namespace detail {

/// gcd of the coefficient polynomials of a univariate view.
inline Poly ucontent(const UniView& u, std::size_t nvars) {
    Poly g = Poly::zero(nvars);
    for (const auto& [e, coef] : u) {
        g = poly_gcd(g, coef);
        if (g == Poly::one(nvars)) break;
    }
    return g;
}

inline UniView udivexact_poly(const UniView& u, const Poly& d) {
    UniView r;
    for (const auto& [e, coef] : u) {
        auto q = divexact(coef, d);
        if (!q) throw std::logic_error("inexact division in gcd kernel");
        if (!q->is_zero()) r.emplace(e, std::move(*q));
    }
    return r;
}

}  // namespace detail

/// Primitive multivariate gcd over Q via the subresultant pseudo-remainder
/// sequence. The result has coprime integer coefficients and positive leading
/// coefficient; constants collapse to 1 (units of the coefficient field).
inline Poly poly_gcd(const Poly& a, const Poly& b) {
    assert(a.nvars() == b.nvars());
    const std::size_t n = a.nvars();
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    if (a.is_constant() || b.is_constant()) return Poly::one(n);

    // Main variable: the highest-index variable occurring in both inputs.
    std::optional<std::size_t> main;
    for (std::size_t v = n; v-- > 0;) {
        if (a.degree_in(v) > 0 && b.degree_in(v) > 0) {
            main = v;
            break;
        }
    }
    if (!main) return Poly::one(n);
    const std::size_t v = *main;

    detail::UniView ua = detail::to_univar(a.primitive_part(), v);
    detail::UniView ub = detail::to_univar(b.primitive_part(), v);
    if (detail::udeg(ua) < detail::udeg(ub)) std::swap(ua, ub);

    const Poly cont_a = detail::ucontent(ua, n);
    const Poly cont_b = detail::ucontent(ub, n);
    const Poly cont_gcd = poly_gcd(cont_a, cont_b);
    detail::UniView f = detail::udivexact_poly(ua, cont_a);
    detail::UniView g = detail::udivexact_poly(ub, cont_b);

    Poly gg = Poly::one(n);
    Poly hh = Poly::one(n);
    while (true) {
        const std::uint32_t delta = detail::udeg(f) - detail::udeg(g);
        detail::UniView r = detail::prem(f, g);
        if (r.empty()) {
            Poly pp = detail::from_univar(g, v, n);
            pp = *divexact(pp, detail::ucontent(g, n));
            return (cont_gcd * pp).primitive_part();
        }
        if (detail::udeg(r) == 0) return cont_gcd.primitive_part();
        f = std::move(g);
        Poly divisor = gg * hh.pow(delta);
        g = detail::udivexact_poly(r, divisor);
        gg = detail::ulc(f);
        if (delta > 0) {
            auto q = divexact(gg.pow(delta), hh.pow(delta - 1));
            if (!q) throw std::logic_error("inexact h update in gcd kernel");
            hh = std::move(*q);
        }
    }
}

/// Exact square root of a polynomial, if one exists; the root returned has a
/// positive leading coefficient.
inline std::optional<Poly> poly_sqrt(const Poly& p) {
    const std::size_t n = p.nvars();
    if (p.is_zero()) return Poly::zero(n);
    if (p.is_constant()) {
        auto r = scalar_sqrt_exact(p.constant_value());
        if (!r) return std::nullopt;
        return Poly::constant(n, *r);
    }
    std::size_t v = 0;
    for (std::size_t i = n; i-- > 0;) {
        if (p.degree_in(i) > 0) {
            v = i;
            break;
        }
    }
    detail::UniView u = detail::to_univar(p, v);
    const std::uint32_t d = detail::udeg(u);
    if (d % 2 != 0) return std::nullopt;
    const std::uint32_t half = d / 2;

    auto rd = poly_sqrt(detail::ulc(u));
    if (!rd) return std::nullopt;
    const Poly twice_lead = *rd * Scalar(2);

    std::map<std::uint32_t, Poly> root;
    root.emplace(half, *rd);
    auto coeff_of = [&](const detail::UniView& view, std::uint32_t e) {
        auto it = view.find(e);
        return it == view.end() ? Poly::zero(n) : it->second;
    };
    for (std::uint32_t j = half; j-- > 0;) {
        Poly s = coeff_of(u, half + j);
        for (std::uint32_t i = j + 1; i < half; ++i) {
            const std::uint32_t k = half + j - i;
            if (k <= half && k > j) {
                auto it = root.find(i);
                auto kt = root.find(k);
                if (it != root.end() && kt != root.end()) s -= it->second * kt->second;
            }
        }
        auto q = divexact(s, twice_lead);
        if (!q) return std::nullopt;
        if (!q->is_zero()) root.emplace(j, std::move(*q));
    }
    Poly candidate = detail::from_univar(root, v, n);
    if (sign_of(candidate.leading_coeff()) < 0) candidate = -candidate;
    if (candidate * candidate == p) return candidate;
    return std::nullopt;
}

}  // namespace kpa
