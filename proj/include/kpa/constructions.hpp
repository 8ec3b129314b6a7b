#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "kpa/morphism.hpp"

namespace kpa {

namespace detail {

/// Zero-extends an element of one factor into the product ring of the sum,
/// placing its components in slots [offset, offset + count).
inline RingElem lift(const RingElem& e, const RingTagPtr& sum_tag, std::size_t offset) {
    std::vector<RatFunc> comps;
    comps.reserve(sum_tag->component_count());
    for (std::size_t c = 0; c < sum_tag->component_count(); ++c) {
        const std::size_t n = sum_tag->components[c].size();
        if (c >= offset && c < offset + e.ring()->component_count())
            comps.push_back(e.component(c - offset));
        else
            comps.push_back(RatFunc::zero(n));
    }
    return RingElem(sum_tag, std::move(comps));
}

}  // namespace detail

struct DirectSum {
    KPAlgebra sum;
    std::size_t left_generators;
    std::size_t left_components;
};

/// K + K': a triple on the product ring with block-diagonal structure matrix
/// (cross brackets vanish), block-diagonal metric, and eta = (eta, eta').
/// Both factors must be verified; the output is verified at construction.
inline DirectSum direct_sum(const KPAlgebra& left, const KPAlgebra& right) {
    if (left.presented() || right.presented())
        throw UnsupportedError("direct sum of presented triples is not supported");
    if (!left.eta() || !right.eta())
        throw InputError("direct sum requires verified factors with eta");

    std::vector<std::vector<std::string>> comps = left.ring()->components;
    comps.insert(comps.end(), right.ring()->components.begin(), right.ring()->components.end());
    RingTagPtr tag = make_product_ring(std::move(comps));
    const std::size_t lc = left.ring()->component_count();
    const std::size_t m = left.size();
    const std::size_t mp = right.size();

    auto lift_l = [&](const RingElem& e) { return detail::lift(e, tag, 0); };
    auto lift_r = [&](const RingElem& e) { return detail::lift(e, tag, lc); };

    Matrix<RingElem> p(m + mp, m + mp, RingElem::zero(tag));
    Matrix<RingElem> g(m + mp, m + mp, RingElem::zero(tag));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            p(i, j) = lift_l(left.p_matrix()(i, j));
            g(i, j) = lift_l(left.metric().matrix()(i, j));
        }
    for (std::size_t i = 0; i < mp; ++i)
        for (std::size_t j = 0; j < mp; ++j) {
            p(m + i, m + j) = lift_r(right.p_matrix()(i, j));
            g(m + i, m + j) = lift_r(right.metric().matrix()(i, j));
        }
    RingElem eta = lift_l(*left.eta()) + lift_r(*right.eta());

    PoissonStructure structure = PoissonStructure::make(tag, std::move(p));
    KPAlgebra sum(std::move(structure), Metric::make(std::move(g)), std::nullopt,
                  std::move(eta));
    VerifyResult v = verify_kp(sum);
    if (!v.verdict.passed())
        throw CheckError("direct sum failed verification", v.verdict);
    return DirectSum{std::move(sum), m, lc};
}

enum class Side { left, right };

/// Reconstructs the named factor of a sum from its block data.
inline KPAlgebra sum_factor(const DirectSum& ds, Side side) {
    const KPAlgebra& s = ds.sum;
    const std::size_t m = ds.left_generators;
    const std::size_t mp = s.size() - m;
    const std::size_t lc = ds.left_components;
    const std::size_t off_gen = side == Side::left ? 0 : m;
    const std::size_t cnt = side == Side::left ? m : mp;
    const std::size_t off_comp = side == Side::left ? 0 : lc;
    const std::size_t cnt_comp = s.ring()->component_count() - lc;

    std::vector<std::vector<std::string>> comps;
    for (std::size_t c = 0; c < (side == Side::left ? lc : cnt_comp); ++c)
        comps.push_back(s.ring()->components[off_comp + c]);
    RingTagPtr tag = make_product_ring(std::move(comps));

    auto slice = [&](const RingElem& e) {
        std::vector<RatFunc> out;
        for (std::size_t c = 0; c < tag->component_count(); ++c)
            out.push_back(e.component(off_comp + c));
        return RingElem(tag, std::move(out));
    };
    Matrix<RingElem> p(cnt, cnt, RingElem::zero(tag));
    Matrix<RingElem> g(cnt, cnt, RingElem::zero(tag));
    for (std::size_t i = 0; i < cnt; ++i)
        for (std::size_t j = 0; j < cnt; ++j) {
            p(i, j) = slice(s.p_matrix()(off_gen + i, off_gen + j));
            g(i, j) = slice(s.metric().matrix()(off_gen + i, off_gen + j));
        }
    RingElem eta = slice(*s.eta());
    return KPAlgebra(PoissonStructure::make(tag, std::move(p)), Metric::make(std::move(g)),
                     std::nullopt, std::move(eta));
}

/// The embedding c -> (c, 0) (resp. (0, c)) of a factor into the sum, with
/// unit idempotents marking the factor's window.
inline Hom embed_factor(const DirectSum& ds, Side side) {
    auto factor = std::make_shared<const KPAlgebra>(sum_factor(ds, side));
    auto sum = std::make_shared<const KPAlgebra>(ds.sum);
    const std::size_t off_gen = side == Side::left ? 0 : ds.left_generators;
    const std::size_t off_comp = side == Side::left ? 0 : ds.left_components;

    std::vector<RingElem> images;
    for (std::size_t i = 0; i < factor->size(); ++i)
        images.push_back(RingElem::generator(sum->ring(), off_gen + i));
    std::vector<RingElem> units;
    for (std::size_t c = 0; c < factor->ring()->component_count(); ++c)
        units.push_back(RingElem::component_unit(sum->ring(), off_comp + c));
    return Hom(std::move(factor), std::move(sum), std::move(images), std::nullopt,
               std::move(units));
}

/// Square root of a plain ring element in the same field, when one exists.
/// The representative returned has a numerator with positive leading
/// coefficient. Total: returns nullopt instead of failing.
inline std::optional<RingElem> sqrt_ratfunc(const RingElem& f) {
    if (!f.is_plain()) throw InputError("square root expects a single-component element");
    const RatFunc& r = f.value();
    if (r.is_zero()) return RingElem::zero(f.ring());
    Poly num_prim = r.num().primitive_part();
    Scalar content = r.num().leading_coeff() / num_prim.leading_coeff();
    auto scalar_root = scalar_sqrt_exact(content);
    if (!scalar_root) return std::nullopt;
    auto num_root = poly_sqrt(num_prim);
    if (!num_root) return std::nullopt;
    auto den_root = poly_sqrt(r.den());
    if (!den_root) return std::nullopt;
    return RingElem(f.ring(), {RatFunc(*num_root * *scalar_root, *den_root)});
}

struct TensorSpec {
    std::shared_ptr<const KPAlgebra> left;
    std::shared_ptr<const KPAlgebra> right;
    RingElem rho_left;
    RingElem rho_right;
};

/// K x K': realized on the single rational function field over the disjoint
/// union of the generators (cross brackets vanish), with metric blocks
/// rho*g and rho'*g' and eta = 1. Requires rho^2 = eta and rho'^2 = eta'.
/// Right-hand generator names are suffixed when they collide with left ones.
inline KPAlgebra tensor_product(const TensorSpec& spec) {
    const KPAlgebra& l = *spec.left;
    const KPAlgebra& r = *spec.right;
    if (l.ring()->component_count() != 1 || r.ring()->component_count() != 1)
        throw UnsupportedError("tensor product of product-ring factors is not supported");
    if (l.presented() || r.presented())
        throw UnsupportedError("tensor product of presented triples is not supported");
    if (!l.eta() || !r.eta()) throw InputError("tensor product requires eta on both factors");
    if (!(spec.rho_left * spec.rho_left == *l.eta()))
        throw CheckError("rho^2 = eta fails on the left factor",
                         Verdict::failure({}, to_string(spec.rho_left * spec.rho_left)));
    if (!(spec.rho_right * spec.rho_right == *r.eta()))
        throw CheckError("rho^2 = eta fails on the right factor",
                         Verdict::failure({}, to_string(spec.rho_right * spec.rho_right)));

    std::vector<std::string> names = l.ring()->components[0];
    for (std::string n : r.ring()->components[0]) {
        std::string candidate = n;
        int suffix = 1;
        auto taken = [&](const std::string& s) {
            for (const auto& t : names)
                if (t == s) return true;
            return false;
        };
        while (taken(candidate)) candidate = n + "_" + std::to_string(++suffix);
        names.push_back(std::move(candidate));
    }
    RingTagPtr tag = make_ring(std::move(names));
    const std::size_t m = l.size();
    const std::size_t mp = r.size();
    const std::size_t nl = l.ring()->components[0].size();

    // Re-index a factor element into the union ring.
    auto reindex = [&](const RingElem& e, std::size_t var_offset) {
        const std::size_t nv = tag->components[0].size();
        auto lift_poly = [&](const Poly& p) {
            Poly out(nv);
            for (const auto& [mono, c] : p.terms()) {
                Mono shifted(nv, 0);
                for (std::size_t i = 0; i < mono.size(); ++i) shifted[var_offset + i] = mono[i];
                out.add_term(shifted, c);
            }
            return out;
        };
        return RingElem(tag, {RatFunc(lift_poly(e.value().num()), lift_poly(e.value().den()))});
    };
    auto lift_l = [&](const RingElem& e) { return reindex(e, 0); };
    auto lift_r = [&](const RingElem& e) { return reindex(e, nl); };

    Matrix<RingElem> p(m + mp, m + mp, RingElem::zero(tag));
    Matrix<RingElem> g(m + mp, m + mp, RingElem::zero(tag));
    RingElem rho_l = lift_l(spec.rho_left);
    RingElem rho_r = lift_r(spec.rho_right);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            p(i, j) = lift_l(l.p_matrix()(i, j));
            g(i, j) = rho_l * lift_l(l.metric().matrix()(i, j));
        }
    for (std::size_t i = 0; i < mp; ++i)
        for (std::size_t j = 0; j < mp; ++j) {
            p(m + i, m + j) = lift_r(r.p_matrix()(i, j));
            g(m + i, m + j) = rho_r * lift_r(r.metric().matrix()(i, j));
        }
    KPAlgebra out(PoissonStructure::make(tag, std::move(p)), Metric::make(std::move(g)),
                  std::nullopt, RingElem::one(tag));
    VerifyResult v = verify_kp(out);
    if (!v.verdict.passed())
        throw CheckError("tensor product failed verification", v.verdict);
    return out;
}

/// Subalgebra test. The inclusion is given by an injective map from sub
/// generator indices to super generator indices; it must preserve the
/// structure matrix (that makes the sub a Poisson subalgebra), and the
/// metric condition is then checked on the basis derivations:
///   iota(P g P^T)^{ij} = (B g' B^T)^{ij},  B^i_K = {iota(x^i), z^K}'.
inline Verdict check_subalgebra(const KPAlgebra& sub, const KPAlgebra& super,
                                const std::vector<std::size_t>& inclusion) {
    if (sub.presented() || super.presented())
        throw UnsupportedError("subalgebra check expects generator-presented triples");
    const std::size_t m = sub.size();
    if (inclusion.size() != m) throw InputError("one super index per sub generator required");
    std::vector<bool> seen(super.size(), false);
    for (std::size_t idx : inclusion) {
        if (idx >= super.size()) throw InputError("inclusion index out of range");
        if (seen[idx]) throw InputError("inclusion map is not injective");
        seen[idx] = true;
    }

    // Window for each sub component: the super components its generators hit.
    const RingTag& sub_tag = *sub.ring();
    std::vector<RingElem> images;
    images.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        images.push_back(RingElem::generator(super.ring(), inclusion[i]));
    std::vector<RingElem> units;
    {
        std::size_t offset = 0;
        for (std::size_t c = 0; c < sub_tag.component_count(); ++c) {
            std::optional<std::size_t> super_comp;
            for (std::size_t i = 0; i < sub_tag.components[c].size(); ++i) {
                auto [sc, si] = super.ring()->locate(inclusion[offset + i]);
                if (super_comp && *super_comp != sc)
                    throw InputError(
                        "inclusion scatters one sub component over several super components");
                super_comp = sc;
            }
            offset += sub_tag.components[c].size();
            units.push_back(super_comp
                                ? RingElem::component_unit(super.ring(), *super_comp)
                                : RingElem::one(super.ring()));
        }
    }
    auto iota = [&](const RingElem& e) { return substitute(e, images, units); };

    // Precondition: brackets restrict correctly.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            RingElem expected = super.p_matrix()(inclusion[i], inclusion[j]);
            RingElem got = iota(sub.p_matrix()(i, j));
            if (!(got == expected)) {
                Verdict v = Verdict::failure({i + 1, j + 1}, to_string(got - expected),
                                             "inclusion is not bracket-preserving");
                return v;
            }
        }

    const Matrix<RingElem>& p = sub.p_matrix();
    const Matrix<RingElem>& g = sub.metric().matrix();
    Matrix<RingElem> lhs = (p * g * p.transpose()).map(iota);
    const std::size_t sm = super.size();
    Matrix<RingElem> b(m, sm, RingElem::zero(super.ring()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t kk = 0; kk < sm; ++kk)
            b(i, kk) = super.bracket(images[i], RingElem::generator(super.ring(), kk));
    Matrix<RingElem> rhs = b * super.metric().matrix() * b.transpose();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            RingElem residual = lhs(i, j) - rhs(i, j);
            if (!residual.is_zero())
                return Verdict::failure({i + 1, j + 1}, to_string(residual),
                                        "metric condition fails on the derivation basis");
        }
    return Verdict::ok();
}

}  // namespace kpa
