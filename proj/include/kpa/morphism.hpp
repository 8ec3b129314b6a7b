#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "kpa/kahler.hpp"

namespace kpa {

/// Map between two triples, given by the images of the source generators.
/// The derivation-module map psi is never stored: it is induced as
/// psi(a_i {b^i, .}) = phi(a_i) {phi(b^i), .}' and enters the checks through
/// brackets against phi-images.
///
/// unit_images carry the image of each source component's unit, which lets a
/// single representation cover both unital maps and factor embeddings into a
/// product ring (where phi(1) is a proper idempotent).
class Hom {
public:
    Hom(std::shared_ptr<const KPAlgebra> source, std::shared_ptr<const KPAlgebra> target,
        std::vector<RingElem> images,
        std::optional<std::vector<RingElem>> inverse_images = std::nullopt,
        std::optional<std::vector<RingElem>> unit_images = std::nullopt)
        : source_(std::move(source)),
          target_(std::move(target)),
          images_(std::move(images)),
          inverse_images_(std::move(inverse_images)) {
        if (source_->presented())
            throw UnsupportedError("homs out of a presented triple are not supported");
        const RingTag& src = *source_->ring();
        if (images_.size() != src.total_generators())
            throw InputError("one image per source generator required");
        for (const auto& img : images_)
            if (!same_ring(img.ring(), target_->ring()))
                throw InputError("image outside the target ring");
        if (unit_images) {
            units_ = std::move(*unit_images);
            if (units_.size() != src.component_count())
                throw InputError("one unit image per source component required");
        } else {
            if (src.component_count() == 1) {
                units_.push_back(RingElem::one(target_->ring()));
            } else if (src.component_count() == target_->ring()->component_count()) {
                for (std::size_t c = 0; c < src.component_count(); ++c)
                    units_.push_back(RingElem::component_unit(target_->ring(), c));
            } else {
                throw InputError("a hom out of a product ring needs explicit unit images");
            }
        }
        if (inverse_images_) validate_inverse();
    }

    const KPAlgebra& source() const { return *source_; }
    const KPAlgebra& target() const { return *target_; }
    std::shared_ptr<const KPAlgebra> source_ptr() const { return source_; }
    std::shared_ptr<const KPAlgebra> target_ptr() const { return target_; }
    const std::vector<RingElem>& images() const { return images_; }
    const std::vector<RingElem>& unit_images() const { return units_; }
    const std::optional<std::vector<RingElem>>& inverse_images() const { return inverse_images_; }

    /// phi on an arbitrary source element, by substitution.
    RingElem apply(const RingElem& a) const { return substitute(a, images_, units_); }

    /// phi applied entrywise.
    Matrix<RingElem> apply(const Matrix<RingElem>& m) const {
        return m.map([this](const RingElem& e) { return apply(e); });
    }

    bool images_polynomial() const {
        for (const auto& img : images_)
            if (!img.is_polynomial()) return false;
        return true;
    }

private:
    void validate_inverse() {
        if (target_->presented())
            throw UnsupportedError("inverses into a presented triple are not supported");
        const RingTag& dst = *target_->ring();
        if (inverse_images_->size() != dst.total_generators())
            throw InputError("one inverse image per target generator required");
        for (const auto& img : *inverse_images_)
            if (!same_ring(img.ring(), source_->ring()))
                throw InputError("inverse image outside the source ring");
        // Both round-trips must fix the generators.
        std::vector<RingElem> inv_units;
        const std::size_t tc = dst.component_count();
        const std::size_t sc = source_->ring()->component_count();
        if (tc == 1) {
            inv_units.push_back(RingElem::one(source_->ring()));
        } else if (tc == sc) {
            for (std::size_t c = 0; c < tc; ++c)
                inv_units.push_back(RingElem::component_unit(source_->ring(), c));
        } else {
            throw InputError("inverse of a hom between product rings of different shape");
        }
        for (std::size_t i = 0; i < images_.size(); ++i) {
            RingElem back = substitute(images_[i], *inverse_images_, inv_units);
            if (!(back == RingElem::generator(source_->ring(), i)))
                throw CheckError("inverse images do not invert the map on generators",
                                 Verdict::failure({i + 1}, to_string(back),
                                                  "phi^-1(phi(x)) differs from x"));
        }
        for (std::size_t a = 0; a < inverse_images_->size(); ++a) {
            RingElem fwd = substitute((*inverse_images_)[a], images_, units_);
            if (!(fwd == RingElem::generator(target_->ring(), a)))
                throw CheckError("inverse images do not invert the map on generators",
                                 Verdict::failure({a + 1}, to_string(fwd),
                                                  "phi(phi^-1(y)) differs from y"));
        }
    }

    std::shared_ptr<const KPAlgebra> source_;
    std::shared_ptr<const KPAlgebra> target_;
    std::vector<RingElem> images_;
    std::optional<std::vector<RingElem>> inverse_images_;
    std::vector<RingElem> units_;
};

/// {phi(x^i), phi(x^j)}' = phi({x^i, x^j}) on all generator pairs; this is
/// the whole Poisson-hom condition by bilinearity and the Leibniz rule.
inline Verdict check_poisson_hom(const Hom& h) {
    const Matrix<RingElem>& p = h.source().p_matrix();
    const std::size_t m = p.rows();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            RingElem lhs = h.target().bracket(h.images()[i], h.images()[j]);
            RingElem rhs = h.apply(p(i, j));
            RingElem residual = lhs - rhs;
            if (!residual.is_zero())
                return Verdict::failure({i + 1, j + 1}, to_string(residual));
        }
    return Verdict::ok();
}

/// A^i_alpha = d phi(x^i) / d y^alpha. Defined only when every image is a
/// polynomial (that is condition (4) in this representation).
inline Matrix<RingElem> jacobian(const Hom& h) {
    if (h.target().presented())
        throw UnsupportedError("jacobian needs a generator-presented target");
    for (std::size_t i = 0; i < h.images().size(); ++i)
        if (!h.images()[i].is_polynomial()) {
            Verdict v;
            v.status = Status::fail;
            v.witness = Witness{{i + 1}, to_string(h.images()[i])};
            v.notes.push_back("image of a generator is not polynomial (condition (4) fails)");
            throw CheckError("non-polynomial generator image", std::move(v));
        }
    const std::size_t m = h.images().size();
    const std::size_t mp = h.target().ring()->total_generators();
    Matrix<RingElem> a(m, mp, RingElem::zero(h.target().ring()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t al = 0; al < mp; ++al) a(i, al) = h.images()[i].derivative(al);
    return a;
}

/// Condition-by-condition report for the four morphism conditions.
struct MorphismReport {
    Verdict poisson_hom;
    Verdict condition3;  // phi(g(gamma_i, gamma_j)) = g'(psi gamma_i, psi gamma_j)
    Verdict condition4;  // every generator image polynomial
    std::vector<std::string> notes;

    bool passed() const {
        return poisson_hom.passed() && condition3.passed() && condition4.passed();
    }

    Verdict overall() const {
        if (!poisson_hom.passed()) return poisson_hom;
        if (!condition4.passed()) return condition4;
        if (!condition3.passed()) return condition3;
        Verdict v = Verdict::ok();
        v.notes = notes;
        return v;
    }
};

/// B^i_alpha = {phi(x^i), Y^alpha}' against the target's distinguished
/// elements; psi(gamma_i) evaluated where the target metric can see it.
inline Matrix<RingElem> psi_values(const Hom& h) {
    const std::size_t m = h.images().size();
    const std::size_t mp = h.target().size();
    Matrix<RingElem> b(m, mp, RingElem::zero(h.target().ring()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t al = 0; al < mp; ++al)
            b(i, al) = h.target().bracket(h.images()[i], h.target().elements()[al]);
    return b;
}

/// Checks the morphism conditions. (1) and (2) hold identically for the
/// induced psi and are recorded, not re-verified; (4) is polynomiality of the
/// images; (3) is checked on the basis derivations gamma_i = {x^i, .} as
///   phi(P^{ik} g_{kl} P^{jl}) = B^i g' B^j,
/// which settles the quantified condition by bilinearity over phi.
inline MorphismReport check_kp_morphism(const Hom& h) {
    MorphismReport rep;
    rep.notes.push_back(
        "conditions (1) and (2) hold by construction for the induced derivation map");
    if (h.target().presented())
        rep.notes.push_back(
            "target is a presented triple; condition (4) checked as polynomiality in the "
            "ambient ring");
    rep.poisson_hom = check_poisson_hom(h);
    if (!rep.poisson_hom.passed()) {
        rep.poisson_hom.notes.push_back("not a Poisson algebra homomorphism on generators");
        return rep;
    }
    for (std::size_t i = 0; i < h.images().size(); ++i)
        if (!h.images()[i].is_polynomial()) {
            rep.condition4 = Verdict::failure(
                {i + 1}, to_string(h.images()[i]),
                "image of a generator is not polynomial (condition (4) fails)");
            return rep;
        }

    const Matrix<RingElem>& p = h.source().p_matrix();
    const Matrix<RingElem>& g = h.source().metric().matrix();
    Matrix<RingElem> lhs = h.apply(p * g * p.transpose());
    Matrix<RingElem> b = psi_values(h);
    Matrix<RingElem> rhs = b * h.target().metric().matrix() * b.transpose();
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j) {
            RingElem residual = lhs(i, j) - rhs(i, j);
            if (!residual.is_zero()) {
                rep.condition3 = Verdict::failure({i + 1, j + 1}, to_string(residual),
                                                  "metric condition (3) fails on gamma basis");
                return rep;
            }
        }
    return rep;
}

/// Isomorphism criterion in index form: with M = A^T phi(g) A - g',
///   sum_{alpha,beta} P'^{gamma alpha} M_{alpha beta} P'^{delta beta} = 0
/// for all gamma, delta. Requires a certified two-sided inverse and
/// polynomial images both ways.
inline Verdict check_iso(const Hom& h, Matrix<RingElem>* induced_metric_out = nullptr) {
    if (!h.inverse_images()) throw InputError("isomorphism check requires inverse images");
    Verdict ph = check_poisson_hom(h);
    if (!ph.passed()) {
        ph.notes.push_back("not a Poisson algebra homomorphism on generators");
        return ph;
    }
    for (const auto& img : *h.inverse_images())
        if (!img.is_polynomial()) {
            Verdict v;
            v.status = Status::fail;
            v.notes.push_back("inverse image not polynomial: phi(A_fin) = A'_fin fails");
            return v;
        }
    for (std::size_t i = 0; i < h.images().size(); ++i)
        if (!h.images()[i].is_polynomial())
            return Verdict::failure({i + 1}, to_string(h.images()[i]),
                                    "image not polynomial: phi(A_fin) = A'_fin fails");
    Matrix<RingElem> a = jacobian(h);
    Matrix<RingElem> phi_g = h.apply(h.source().metric().matrix());
    Matrix<RingElem> induced = a.transpose() * phi_g * a;
    if (induced_metric_out) *induced_metric_out = induced;
    Matrix<RingElem> m = induced - h.target().metric().matrix();
    const Matrix<RingElem>& pp = h.target().p_matrix();
    Matrix<RingElem> crit = pp * m * pp.transpose();
    for (std::size_t i = 0; i < crit.rows(); ++i)
        for (std::size_t j = 0; j < crit.cols(); ++j)
            if (!crit(i, j).is_zero())
                return Verdict::failure({i + 1, j + 1}, to_string(crit(i, j)),
                                        "isomorphism criterion fails");
    return Verdict::ok();
}

/// (phi' o phi)(x^i) = substitute phi(x^i) through phi'; inverses compose in
/// the opposite order when both factors carry them.
inline Hom compose(const Hom& outer, const Hom& inner) {
    if (!same_ring(inner.target().ring(), outer.source().ring()))
        throw InputError("ring mismatch in composition");
    std::vector<RingElem> images;
    images.reserve(inner.images().size());
    for (const auto& img : inner.images()) images.push_back(outer.apply(img));
    std::vector<RingElem> units;
    for (const auto& u : inner.unit_images()) units.push_back(outer.apply(u));
    std::optional<std::vector<RingElem>> inverse;
    if (inner.inverse_images() && outer.inverse_images()) {
        std::vector<RingElem> inv;
        for (const auto& img : *outer.inverse_images())
            inv.push_back(substitute(img, *inner.inverse_images()));
        inverse = std::move(inv);
    }
    return Hom(inner.source_ptr(), outer.target_ptr(), std::move(images), std::move(inverse),
               std::move(units));
}

inline Hom identity_hom(std::shared_ptr<const KPAlgebra> k) {
    const std::size_t m = k->ring()->total_generators();
    std::vector<RingElem> images, inverses;
    for (std::size_t i = 0; i < m; ++i) {
        images.push_back(RingElem::generator(k->ring(), i));
        inverses.push_back(RingElem::generator(k->ring(), i));
    }
    auto target = k;
    return Hom(std::move(k), std::move(target), std::move(images), std::move(inverses));
}

/// (phi(eta) - eta') P'^{alpha beta} = 0 for all alpha, beta. In a domain
/// with P' nonzero this forces phi(eta) = eta' exactly; a zero P' passes
/// vacuously and is flagged.
inline Verdict eta_transport_check(const Hom& h) {
    if (!h.source().eta() || !h.target().eta())
        throw InputError("eta transport requires eta on both sides");
    RingElem diff = h.apply(*h.source().eta()) - *h.target().eta();
    const Matrix<RingElem>& pp = h.target().p_matrix();
    bool all_zero = true;
    for (std::size_t i = 0; i < pp.rows(); ++i)
        for (std::size_t j = 0; j < pp.cols(); ++j) {
            if (!pp(i, j).is_zero()) all_zero = false;
            RingElem r = diff * pp(i, j);
            if (!r.is_zero())
                return Verdict::failure({i + 1, j + 1}, to_string(r),
                                        "(phi(eta) - eta') P' does not vanish");
        }
    Verdict v = Verdict::ok();
    if (all_zero)
        v.notes.push_back("target structure matrix is zero; transport is vacuous");
    else if (!diff.is_zero())
        v.notes.push_back("phi(eta) differs from eta' but the difference annihilates P'");
    return v;
}

/// Image triple of a hom whose target generators all have certified
/// preimages: (phi(A), g~, {phi(x^1),...,phi(x^m)}) with
///   g~ = (E B) g' (E B)^T,  E = phi(eta g P g),  B^m_J = {phi(x^m), y^J}'.
inline KPAlgebra image_subalgebra(const Hom& h, const std::vector<RingElem>& preimages) {
    if (h.target().presented())
        throw UnsupportedError("image subalgebra needs a generator-presented target");
    if (!h.source().eta()) throw InputError("image subalgebra requires eta on the source");
    const RingTag& dst = *h.target().ring();
    if (preimages.size() != dst.total_generators())
        throw InputError("one preimage per target generator required");
    for (std::size_t j = 0; j < preimages.size(); ++j) {
        if (!same_ring(preimages[j].ring(), h.source().ring()))
            throw InputError("preimage outside the source ring");
        RingElem img = h.apply(preimages[j]);
        if (!(img == RingElem::generator(h.target().ring(), j)))
            throw CheckError("preimage verification failed",
                             Verdict::failure({j + 1}, to_string(img),
                                              "phi(preimage) is not the target generator"));
    }
    MorphismReport rep = check_kp_morphism(h);
    if (!rep.passed())
        throw CheckError("image subalgebra requires a morphism of triples", rep.overall());

    const Matrix<RingElem>& p = h.source().p_matrix();
    const Matrix<RingElem>& g = h.source().metric().matrix();
    const RingElem& eta = *h.source().eta();
    Matrix<RingElem> lowered = (g * p * g).map([&](const RingElem& e) { return eta * e; });
    Matrix<RingElem> e_mat = h.apply(lowered);

    const std::size_t m = h.images().size();
    const std::size_t mp = dst.total_generators();
    Matrix<RingElem> b(m, mp, RingElem::zero(h.target().ring()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < mp; ++j)
            b(i, j) = h.target().bracket(h.images()[i],
                                         RingElem::generator(h.target().ring(), j));
    Matrix<RingElem> eb = e_mat * b;
    Matrix<RingElem> metric = eb * h.target().metric().matrix() * eb.transpose();

    KPAlgebra out(h.target().structure(), Metric::make(std::move(metric)), h.images());
    SolveEtaResult s = solve_eta(out);
    if (s.status != EtaStatus::not_proportional) out.set_eta(*s.eta);
    return out;
}

}  // namespace kpa
