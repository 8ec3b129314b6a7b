#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kpa/ratfunc.hpp"

namespace kpa {

/// Names the generators of a (finite product of) rational function field(s).
/// One generator-name list per component; a plain ring has one component.
/// Generators carry a global index: the concatenation of the component lists.
struct RingTag {
    std::vector<std::vector<std::string>> components;

    std::size_t component_count() const { return components.size(); }

    std::size_t total_generators() const {
        std::size_t n = 0;
        for (const auto& c : components) n += c.size();
        return n;
    }

    /// Maps a global generator index to (component, local index).
    std::pair<std::size_t, std::size_t> locate(std::size_t global) const {
        for (std::size_t c = 0; c < components.size(); ++c) {
            if (global < components[c].size()) return {c, global};
            global -= components[c].size();
        }
        throw std::out_of_range("generator index out of range");
    }

    const std::string& generator_name(std::size_t global) const {
        auto [c, i] = locate(global);
        return components[c][i];
    }

    friend bool operator==(const RingTag& a, const RingTag& b) {
        return a.components == b.components;
    }
};

using RingTagPtr = std::shared_ptr<const RingTag>;

inline RingTagPtr make_ring(std::vector<std::string> generators) {
    return std::make_shared<RingTag>(RingTag{{std::move(generators)}});
}

inline RingTagPtr make_product_ring(std::vector<std::vector<std::string>> components) {
    return std::make_shared<RingTag>(RingTag{std::move(components)});
}

inline bool same_ring(const RingTagPtr& a, const RingTagPtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Exact element of the ring named by its tag: one reduced rational function
/// per component. All arithmetic is componentwise and total except division,
/// which requires every component of the divisor to be nonzero.
class RingElem {
public:
    RingElem() = default;

    RingElem(RingTagPtr tag, std::vector<RatFunc> components)
        : tag_(std::move(tag)), comps_(std::move(components)) {
        check_shape();
    }

    static RingElem zero(const RingTagPtr& tag) { return uniform(tag, Scalar(0)); }
    static RingElem one(const RingTagPtr& tag) { return uniform(tag, Scalar(1)); }

    static RingElem constant(const RingTagPtr& tag, const Scalar& c) { return uniform(tag, c); }

    /// The element that is the generator with the given global index:
    /// the variable in its own component, zero in the others.
    static RingElem generator(const RingTagPtr& tag, std::size_t global) {
        auto [gc, gi] = tag->locate(global);
        std::vector<RatFunc> comps;
        comps.reserve(tag->component_count());
        for (std::size_t c = 0; c < tag->component_count(); ++c) {
            const std::size_t n = tag->components[c].size();
            comps.push_back(c == gc ? RatFunc::variable(n, gi) : RatFunc::zero(n));
        }
        return RingElem(tag, std::move(comps));
    }

    /// Indicator of one component: 1 there, 0 elsewhere. These are the unit
    /// idempotents of a product ring.
    static RingElem component_unit(const RingTagPtr& tag, std::size_t c) {
        std::vector<RatFunc> comps;
        for (std::size_t k = 0; k < tag->component_count(); ++k) {
            const std::size_t n = tag->components[k].size();
            comps.push_back(k == c ? RatFunc::one(n) : RatFunc::zero(n));
        }
        return RingElem(tag, std::move(comps));
    }

    const RingTagPtr& ring() const { return tag_; }
    const std::vector<RatFunc>& components() const { return comps_; }
    const RatFunc& component(std::size_t c) const { return comps_.at(c); }
    bool is_plain() const { return comps_.size() == 1; }
    const RatFunc& value() const { return comps_.at(0); }

    bool is_zero() const {
        for (const auto& c : comps_)
            if (!c.is_zero()) return false;
        return true;
    }

    bool has_zero_component() const {
        for (const auto& c : comps_)
            if (c.is_zero()) return true;
        return false;
    }

    bool is_polynomial() const {
        for (const auto& c : comps_)
            if (!c.is_polynomial()) return false;
        return true;
    }

    friend RingElem operator+(const RingElem& a, const RingElem& b) {
        return a.zip(b, [](const RatFunc& x, const RatFunc& y) { return x + y; });
    }
    friend RingElem operator-(const RingElem& a, const RingElem& b) {
        return a.zip(b, [](const RatFunc& x, const RatFunc& y) { return x - y; });
    }
    friend RingElem operator*(const RingElem& a, const RingElem& b) {
        return a.zip(b, [](const RatFunc& x, const RatFunc& y) { return x * y; });
    }

    friend RingElem operator/(const RingElem& a, const RingElem& b) {
        if (b.has_zero_component())
            throw std::domain_error("division by an element with a zero component");
        return a.zip(b, [](const RatFunc& x, const RatFunc& y) { return x / y; });
    }

    RingElem operator-() const {
        RingElem r = *this;
        for (auto& c : r.comps_) c = -c;
        return r;
    }

    friend RingElem operator*(const RingElem& a, const Scalar& s) {
        RingElem r = a;
        for (auto& c : r.comps_) c = c * s;
        return r;
    }
    friend RingElem operator*(const Scalar& s, const RingElem& a) { return a * s; }

    RingElem& operator+=(const RingElem& b) { return *this = *this + b; }
    RingElem& operator-=(const RingElem& b) { return *this = *this - b; }
    RingElem& operator*=(const RingElem& b) { return *this = *this * b; }

    friend bool operator==(const RingElem& a, const RingElem& b) {
        return same_ring(a.tag_, b.tag_) && a.comps_ == b.comps_;
    }
    friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }

    /// Formal partial derivative with respect to the global generator index.
    /// In a product ring the derivative acts inside the generator's component
    /// and yields zero in the others.
    RingElem derivative(std::size_t global) const {
        auto [gc, gi] = tag_->locate(global);
        std::vector<RatFunc> comps;
        comps.reserve(comps_.size());
        for (std::size_t c = 0; c < comps_.size(); ++c) {
            comps.push_back(c == gc ? comps_[c].derivative(gi)
                                    : RatFunc::zero(comps_[c].nvars()));
        }
        return RingElem(tag_, std::move(comps));
    }

private:
    static RingElem uniform(const RingTagPtr& tag, const Scalar& c) {
        std::vector<RatFunc> comps;
        comps.reserve(tag->component_count());
        for (const auto& names : tag->components)
            comps.push_back(RatFunc::constant(names.size(), c));
        return RingElem(tag, std::move(comps));
    }

    template <class F>
    RingElem zip(const RingElem& b, F&& f) const {
        if (!same_ring(tag_, b.tag_)) throw std::invalid_argument("ring tag mismatch");
        std::vector<RatFunc> comps;
        comps.reserve(comps_.size());
        for (std::size_t c = 0; c < comps_.size(); ++c) comps.push_back(f(comps_[c], b.comps_[c]));
        return RingElem(tag_, std::move(comps));
    }

    void check_shape() const {
        if (!tag_) throw std::invalid_argument("ring element without a ring tag");
        if (comps_.size() != tag_->component_count())
            throw std::invalid_argument("component count does not match ring tag");
        for (std::size_t c = 0; c < comps_.size(); ++c)
            if (comps_[c].nvars() != tag_->components[c].size())
                throw std::invalid_argument("component variable count does not match ring tag");
    }

    RingTagPtr tag_;
    std::vector<RatFunc> comps_;
};

inline RingElem zero_like(const RingElem& e) { return RingElem::zero(e.ring()); }

/// Builds a plain ring element from a raw numerator/denominator pair,
/// reducing to canonical form. Throws on a zero denominator.
inline RingElem normalize(const RingTagPtr& tag, Poly num, Poly den) {
    if (tag->component_count() != 1)
        throw std::invalid_argument("normalize expects a plain ring");
    return RingElem(tag, {RatFunc(std::move(num), std::move(den))});
}

/// Substitution phi determined by one image per source generator (global
/// order) plus one unit idempotent per source component: phi restricted to
/// component c maps into the window cut out by unit_images[c]. A unital
/// substitution passes the all-ones idempotent (the default for plain rings).
///
/// Rational components evaluate as phi(num)/phi(den) with the division taken
/// inside the window; a zero denominator inside the window is an error.
inline RingElem substitute(const RingElem& a, const std::vector<RingElem>& images,
                           const std::vector<RingElem>& unit_images) {
    const RingTag& src = *a.ring();
    if (images.size() != src.total_generators())
        throw std::invalid_argument("image count does not match generator count");
    if (unit_images.size() != src.component_count())
        throw std::invalid_argument("one unit image per source component required");
    const RingTagPtr target = images.empty() ? unit_images.at(0).ring() : images[0].ring();
    for (const auto& img : images)
        if (!same_ring(img.ring(), target)) throw std::invalid_argument("images in mixed rings");

    RingElem acc = RingElem::zero(target);
    std::size_t offset = 0;
    for (std::size_t c = 0; c < src.component_count(); ++c) {
        const std::size_t n = src.components[c].size();
        const RingElem& unit = unit_images[c];
        std::vector<RingElem> local(images.begin() + offset, images.begin() + offset + n);
        offset += n;

        const RatFunc& part = a.component(c);
        if (part.is_zero()) continue;
        RingElem num = part.num().evaluate(local, unit);
        if (part.is_polynomial()) {
            acc += num;
            continue;
        }
        RingElem den = part.den().evaluate(local, unit);
        // Divide inside the window, keep zero outside it.
        std::vector<RatFunc> comps;
        for (std::size_t t = 0; t < target->component_count(); ++t) {
            if (unit.component(t).is_zero()) {
                comps.push_back(RatFunc::zero(target->components[t].size()));
                continue;
            }
            if (den.component(t).is_zero())
                throw std::domain_error("substitution produced a zero denominator");
            comps.push_back(num.component(t) / den.component(t));
        }
        acc += RingElem(target, std::move(comps));
    }
    return acc;
}

/// Unital substitution: one image per generator, images in one target ring.
inline RingElem substitute(const RingElem& a, const std::vector<RingElem>& images) {
    if (images.empty()) throw std::invalid_argument("no images given");
    const RingTagPtr& target = images[0].ring();
    std::vector<RingElem> units(a.ring()->component_count(), RingElem::one(target));
    if (a.ring()->component_count() > 1) {
        // A unital map out of a product ring must send the component
        // idempotents somewhere; default them componentwise when the shapes
        // agree, which covers identity-style maps.
        if (target->component_count() != a.ring()->component_count())
            throw std::invalid_argument(
                "substitution from a product ring needs explicit unit images");
        for (std::size_t c = 0; c < units.size(); ++c)
            units[c] = RingElem::component_unit(target, c);
    }
    return substitute(a, images, units);
}

}  // namespace kpa
