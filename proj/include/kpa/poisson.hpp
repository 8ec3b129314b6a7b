#pragma once

#include <utility>

#include "kpa/io.hpp"
#include "kpa/matrix.hpp"
#include "kpa/ring.hpp"
#include "kpa/verdicts.hpp"

namespace kpa {

/// Antisymmetry of a raw structure matrix: entries (i,j) and (j,i) must sum
/// to zero and the diagonal must vanish. Fails with the first offending pair
/// and the residual in canonical form.
inline Verdict check_antisymmetry(const Matrix<RingElem>& p) {
    if (!p.is_square()) throw InputError("structure matrix must be square");
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = i; j < p.cols(); ++j) {
            RingElem r = p(i, j) + p(j, i);
            if (!r.is_zero()) return Verdict::failure({i + 1, j + 1}, to_string(r));
        }
    }
    return Verdict::ok();
}

/// Jacobi identity via the Jacobiator
///   J^{ijk} = sum_l (P^{il} d_l P^{jk} + P^{jl} d_l P^{ki} + P^{kl} d_l P^{ij}),
/// which must vanish for all i < j < k. Antisymmetry is assumed checked.
inline Verdict check_jacobi(const Matrix<RingElem>& p) {
    const std::size_t m = p.rows();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (std::size_t k = j + 1; k < m; ++k) {
                RingElem jac = zero_like(p(i, j));
                for (std::size_t l = 0; l < m; ++l) {
                    jac += p(i, l) * p(j, k).derivative(l);
                    jac += p(j, l) * p(k, i).derivative(l);
                    jac += p(k, l) * p(i, j).derivative(l);
                }
                if (!jac.is_zero())
                    return Verdict::failure({i + 1, j + 1, k + 1}, to_string(jac));
            }
        }
    }
    return Verdict::ok();
}

/// Poisson structure on a finitely generated ring: the matrix of generator
/// brackets P^{ij} = {x^i, x^j}, which determines the whole bracket through
/// the Leibniz rule. Construction validates antisymmetry always and the
/// Jacobi identity unless explicitly assumed; an assumed structure carries
/// that mark into every downstream report.
class PoissonStructure {
public:
    static PoissonStructure make(RingTagPtr tag, Matrix<RingElem> p, bool assume_jacobi = false) {
        if (p.rows() != tag->total_generators() || !p.is_square())
            throw InputError("structure matrix size does not match generator count");
        if (Verdict v = check_antisymmetry(p); !v.passed())
            throw CheckError("structure matrix is not antisymmetric", std::move(v));
        if (!assume_jacobi) {
            if (Verdict v = check_jacobi(p); !v.passed())
                throw CheckError("Jacobi identity fails", std::move(v));
        }
        return PoissonStructure(std::move(tag), std::move(p), assume_jacobi);
    }

    const RingTagPtr& ring() const { return tag_; }
    const Matrix<RingElem>& matrix() const { return p_; }
    std::size_t generator_count() const { return p_.rows(); }
    bool jacobi_assumed() const { return jacobi_assumed_; }

    /// {a, b} = sum_{i,j} d_i(a) P^{ij} d_j(b).
    RingElem bracket(const RingElem& a, const RingElem& b) const {
        if (!same_ring(a.ring(), tag_) || !same_ring(b.ring(), tag_))
            throw std::invalid_argument("bracket arguments live in a different ring");
        const std::size_t m = generator_count();
        std::vector<RingElem> da, db;
        da.reserve(m);
        db.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            da.push_back(a.derivative(i));
            db.push_back(b.derivative(i));
        }
        RingElem acc = RingElem::zero(tag_);
        for (std::size_t i = 0; i < m; ++i) {
            if (da[i].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) {
                if (p_(i, j).is_zero() || db[j].is_zero()) continue;
                acc += da[i] * p_(i, j) * db[j];
            }
        }
        return acc;
    }

    RingElem generator_element(std::size_t i) const { return RingElem::generator(tag_, i); }

private:
    PoissonStructure(RingTagPtr tag, Matrix<RingElem> p, bool assumed)
        : tag_(std::move(tag)), p_(std::move(p)), jacobi_assumed_(assumed) {}

    RingTagPtr tag_;
    Matrix<RingElem> p_;
    bool jacobi_assumed_;
};

}  // namespace kpa
