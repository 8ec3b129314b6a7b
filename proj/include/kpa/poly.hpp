#pragma once

#include <cassert>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "kpa/monomial.hpp"
#include "kpa/scalar.hpp"

namespace kpa {

/// Sparse multivariate polynomial over Q with a fixed number of variables.
/// Terms are kept in descending graded-lex order; zero coefficients are never
/// stored, so structural equality of the term maps is semantic equality.
class Poly {
public:
    using TermMap = std::map<Mono, Scalar, DegLexGreater>;

    Poly() : nvars_(0) {}
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}

    static Poly zero(std::size_t nvars) { return Poly(nvars); }

    static Poly constant(std::size_t nvars, Scalar c) {
        Poly p(nvars);
        if (!c.is_zero()) p.terms_.emplace(Mono(nvars, 0), std::move(c));
        return p;
    }

    static Poly one(std::size_t nvars) { return constant(nvars, Scalar(1)); }

    static Poly variable(std::size_t nvars, std::size_t i) {
        assert(i < nvars);
        Poly p(nvars);
        Mono m(nvars, 0);
        m[i] = 1;
        p.terms_.emplace(std::move(m), Scalar(1));
        return p;
    }

    static Poly term(std::size_t nvars, Mono m, Scalar c) {
        assert(m.size() == nvars);
        Poly p(nvars);
        if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    /// Constant term value (also the full value for constant polynomials).
    Scalar constant_value() const {
        if (terms_.empty()) return Scalar(0);
        auto it = terms_.find(Mono(nvars_, 0));
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    std::uint64_t degree() const {
        return terms_.empty() ? 0 : total_degree(terms_.begin()->first);
    }

    std::uint32_t degree_in(std::size_t i) const {
        std::uint32_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[i]);
        return d;
    }

    /// Leading term in graded-lex order.
    const std::pair<const Mono, Scalar>& leading() const {
        assert(!terms_.empty());
        return *terms_.begin();
    }

    Scalar leading_coeff() const { return terms_.empty() ? Scalar(0) : terms_.begin()->second; }

    void add_term(const Mono& m, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        assert(a.nvars_ == b.nvars_);
        Poly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) {
        assert(a.nvars_ == b.nvars_);
        Poly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }

    Poly operator-() const {
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        assert(a.nvars_ == b.nvars_);
        Poly r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }

    friend Poly operator*(const Poly& a, const Scalar& s) {
        Poly r(a.nvars_);
        if (s.is_zero()) return r;
        for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, c * s);
        return r;
    }

    friend Poly operator*(const Scalar& s, const Poly& a) { return a * s; }

    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    Poly pow(std::uint32_t e) const {
        Poly r = one(nvars_);
        Poly base = *this;
        while (e > 0) {
            if (e & 1u) r *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    /// Formal partial derivative with respect to variable i.
    Poly derivative(std::size_t i) const {
        assert(i < nvars_);
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m[i] == 0) continue;
            Mono dm = m;
            dm[i] -= 1;
            r.terms_.emplace(std::move(dm), c * Scalar(m[i]));
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Positive rational c with (*this)/c integer-primitive. Zero for the zero polynomial.
    Scalar content() const {
        Scalar g(0);
        for (const auto& [m, c] : terms_) {
            g = scalar_content_gcd(g, c);
            if (g == Scalar(1)) break;
        }
        return g;
    }

    /// this = content * sign(lc) * primitive_part(); primitive part has coprime
    /// integer coefficients and positive leading coefficient.
    Poly primitive_part() const {
        if (is_zero()) return *this;
        Scalar c = content();
        if (sign_of(leading_coeff()) < 0) c = -c;
        Poly r(nvars_);
        for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef / c);
        return r;
    }

    /// Evaluate in any commutative ring R by substituting images for the
    /// variables. `one` supplies the multiplicative unit (a window indicator
    /// for non-unital substitution into product rings).
    template <class R>
    R evaluate(const std::vector<R>& images, const R& one) const {
        assert(images.size() == nvars_);
        R acc = zero_like(one);
        for (const auto& [m, c] : terms_) {
            R t = one * c;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (std::uint32_t k = 0; k < m[i]; ++k) t = t * images[i];
            acc = acc + t;
        }
        return acc;
    }

private:
    std::size_t nvars_;
    TermMap terms_;
};

inline Poly zero_like(const Poly& p) { return Poly::zero(p.nvars()); }

/// Exact division; nullopt when b does not divide a.
inline std::optional<Poly> divexact(const Poly& a, const Poly& b) {
    assert(a.nvars() == b.nvars());
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly q(a.nvars());
    Poly r = a;
    const auto& [mb, cb] = b.leading();
    while (!r.is_zero()) {
        const auto& [mr, cr] = r.leading();
        if (!mono_divides(mb, mr)) return std::nullopt;
        Poly t = Poly::term(a.nvars(), mono_div(mr, mb), cr / cb);
        q += t;
        r -= t * b;
    }
    return q;
}

}  // namespace kpa
