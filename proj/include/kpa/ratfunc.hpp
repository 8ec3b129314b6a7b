#pragma once

#include <stdexcept>
#include <utility>

#include "kpa/gcd.hpp"
#include "kpa/poly.hpp"

namespace kpa {

/// Reduced rational function over Q. Canonical form: gcd(num, den) = 1 and
/// den is integer-primitive with positive leading coefficient (so den = 1 for
/// polynomials). Structural equality is semantic equality.
class RatFunc {
public:
    RatFunc() : num_(0), den_(Poly::one(0)) {}

    explicit RatFunc(Poly num) : num_(std::move(num)), den_(Poly::one(num_.nvars())) {}

    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static RatFunc zero(std::size_t nvars) { return RatFunc(Poly::zero(nvars)); }
    static RatFunc one(std::size_t nvars) { return RatFunc(Poly::one(nvars)); }
    static RatFunc constant(std::size_t nvars, const Scalar& c) {
        return RatFunc(Poly::constant(nvars, c));
    }
    static RatFunc variable(std::size_t nvars, std::size_t i) {
        return RatFunc(Poly::variable(nvars, i));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    std::size_t nvars() const { return num_.nvars(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_ == Poly::one(num_.nvars()); }

    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Scalar constant_value() const { return num_.constant_value() / den_.constant_value(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }

    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }

    RatFunc operator-() const {
        RatFunc r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        // Cross-cancel before multiplying to keep intermediate sizes down.
        Poly g1 = poly_gcd(a.num_, b.den_);
        Poly g2 = poly_gcd(b.num_, a.den_);
        Poly an = g1.is_zero() ? a.num_ : *divexact(a.num_, g1);
        Poly bd = g1.is_zero() ? b.den_ : *divexact(b.den_, g1);
        Poly bn = g2.is_zero() ? b.num_ : *divexact(b.num_, g2);
        Poly ad = g2.is_zero() ? a.den_ : *divexact(a.den_, g2);
        return RatFunc(an * bn, ad * bd);
    }

    friend RatFunc operator*(const RatFunc& a, const Scalar& s) {
        RatFunc r;
        r.num_ = a.num_ * s;
        r.den_ = a.den_;
        if (r.num_.is_zero()) r.den_ = Poly::one(a.nvars());
        return r;
    }

    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("division by zero rational function");
        return a * b.reciprocal();
    }

    RatFunc reciprocal() const {
        if (is_zero()) throw std::domain_error("reciprocal of zero");
        RatFunc r;
        r.num_ = den_;
        r.den_ = num_;
        r.normalize_unit();
        return r;
    }

    RatFunc& operator+=(const RatFunc& b) { return *this = *this + b; }
    RatFunc& operator-=(const RatFunc& b) { return *this = *this - b; }
    RatFunc& operator*=(const RatFunc& b) { return *this = *this * b; }

    /// Quotient rule: (den * num' - num * den') / den^2.
    RatFunc derivative(std::size_t i) const {
        if (is_polynomial()) return RatFunc(num_.derivative(i));
        return RatFunc(den_ * num_.derivative(i) - num_ * den_.derivative(i), den_ * den_);
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

private:
    void reduce() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = Poly::one(num_.nvars());
            return;
        }
        Poly g = poly_gcd(num_, den_);
        if (!(g == Poly::one(num_.nvars()))) {
            num_ = *divexact(num_, g);
            den_ = *divexact(den_, g);
        }
        normalize_unit();
    }

    // Scale so den is integer-primitive with positive leading coefficient.
    void normalize_unit() {
        Scalar c = den_.content();
        if (sign_of(den_.leading_coeff()) < 0) c = -c;
        if (c != Scalar(1)) {
            den_ = den_ * (Scalar(1) / c);
            num_ = num_ * (Scalar(1) / c);
        }
    }

    Poly num_;
    Poly den_;
};

inline RatFunc pow(const RatFunc& a, std::uint32_t e) {
    RatFunc r = RatFunc::one(a.nvars());
    RatFunc base = a;
    while (e > 0) {
        if (e & 1u) r *= base;
        if ((e >>= 1)) base *= base;
    }
    return r;
}

}  // namespace kpa
