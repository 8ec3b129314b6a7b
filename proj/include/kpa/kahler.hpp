#pragma once

#include <optional>
#include <sstream>
#include <utility>

#include "kpa/poisson.hpp"

namespace kpa {

/// Symmetric matrix of ring elements, the metric data of a triple.
class Metric {
public:
    static Metric make(Matrix<RingElem> g) {
        if (!g.is_square()) throw InputError("metric matrix must be square");
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = i + 1; j < g.cols(); ++j)
                if (!(g(i, j) == g(j, i)))
                    throw CheckError("metric is not symmetric",
                                     Verdict::failure({i + 1, j + 1},
                                                      to_string(g(i, j) - g(j, i))));
        return Metric(std::move(g));
    }

    const Matrix<RingElem>& matrix() const { return g_; }
    std::size_t size() const { return g_.rows(); }

private:
    explicit Metric(Matrix<RingElem> g) : g_(std::move(g)) {}
    Matrix<RingElem> g_;
};

/// The triple (A, g, {x^1,...,x^m}) with an optional eta. The distinguished
/// elements default to the ring generators; a presented triple may distinguish
/// arbitrary elements (repetitions allowed), in which case the structure
/// matrix consists of their pairwise brackets.
class KPAlgebra {
public:
    KPAlgebra(PoissonStructure structure, Metric metric,
              std::optional<std::vector<RingElem>> elements = std::nullopt,
              std::optional<RingElem> eta = std::nullopt)
        : structure_(std::move(structure)),
          metric_(std::move(metric)),
          eta_(std::move(eta)),
          p_(0, 0, RingElem()) {
        if (elements) {
            elements_ = std::move(*elements);
            presented_ = false;
            if (elements_.size() != structure_.generator_count()) {
                presented_ = true;
            } else {
                for (std::size_t i = 0; i < elements_.size(); ++i)
                    if (!(elements_[i] == structure_.generator_element(i))) {
                        presented_ = true;
                        break;
                    }
            }
        } else {
            const std::size_t m = structure_.generator_count();
            elements_.reserve(m);
            for (std::size_t i = 0; i < m; ++i)
                elements_.push_back(structure_.generator_element(i));
        }
        const std::size_t k = elements_.size();
        if (metric_.size() != k)
            throw InputError("metric dimension does not match the distinguished elements");
        for (const auto& e : elements_)
            if (!same_ring(e.ring(), structure_.ring()))
                throw InputError("distinguished element outside the base ring");
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (!same_ring(metric_.matrix()(i, j).ring(), structure_.ring()))
                    throw InputError("metric entry outside the base ring");
        if (eta_ && !same_ring(eta_->ring(), structure_.ring()))
            throw InputError("eta outside the base ring");
        p_ = compute_p();
    }

    const PoissonStructure& structure() const { return structure_; }
    const Metric& metric() const { return metric_; }
    const std::vector<RingElem>& elements() const { return elements_; }
    const std::optional<RingElem>& eta() const { return eta_; }
    const RingTagPtr& ring() const { return structure_.ring(); }
    std::size_t size() const { return elements_.size(); }
    bool presented() const { return presented_; }

    /// P^{ij} = {x^i, x^j} over the distinguished elements.
    const Matrix<RingElem>& p_matrix() const { return p_; }

    void set_eta(RingElem eta) { eta_ = std::move(eta); }

    RingElem bracket(const RingElem& a, const RingElem& b) const {
        return structure_.bracket(a, b);
    }

private:
    Matrix<RingElem> compute_p() const {
        if (!presented_) return structure_.matrix();
        const std::size_t k = elements_.size();
        Matrix<RingElem> p(k, k, RingElem::zero(structure_.ring()));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                p(i, j) = structure_.bracket(elements_[i], elements_[j]);
                p(j, i) = -p(i, j);
            }
        return p;
    }

    PoissonStructure structure_;
    Metric metric_;
    std::vector<RingElem> elements_;
    std::optional<RingElem> eta_;
    bool presented_ = false;
    Matrix<RingElem> p_;
};

/// Q = P g P g P, the composite whose proportionality to -P is the defining
/// condition of the triple.
inline Matrix<RingElem> compose_Q(const Matrix<RingElem>& p, const Matrix<RingElem>& g) {
    if (!p.is_square() || !g.is_square() || p.rows() != g.rows())
        throw InputError("dimension mismatch between structure matrix and metric");
    Matrix<RingElem> pg = p * g;
    return pg * pg * p;
}

inline Matrix<RingElem> compose_Q(const KPAlgebra& k) {
    return compose_Q(k.p_matrix(), k.metric().matrix());
}

enum class EtaStatus { found, degenerate, not_proportional };

struct SolveEtaResult {
    EtaStatus status = EtaStatus::found;
    std::optional<RingElem> eta;
    std::optional<Witness> witness;
    std::vector<std::string> notes;
};

/// Solves eta * Q = -P entrywise: eta := -P^{ij}/Q^{ij} at the first nonzero
/// entry of P in row-major scan order, then every entry is verified. A zero
/// structure matrix is reported degenerate with eta := 1 by convention.
///
/// In a product ring the condition splits componentwise, so each component is
/// solved independently and the results are assembled; components that are
/// individually degenerate contribute 1 and a note.
inline SolveEtaResult solve_eta(const Matrix<RingElem>& p, const Matrix<RingElem>& g) {
    Matrix<RingElem> q = compose_Q(p, g);
    const std::size_t m = p.rows();
    if (m == 0) throw InputError("empty structure matrix");
    const RingTagPtr tag = p(0, 0).ring();
    const std::size_t ncomp = tag->component_count();

    SolveEtaResult out;
    std::vector<RatFunc> eta_comps;
    bool any_found = false;
    for (std::size_t c = 0; c < ncomp; ++c) {
        const std::size_t nv = tag->components[c].size();
        const auto& names = tag->components[c];
        std::optional<std::pair<std::size_t, std::size_t>> pivot;
        for (std::size_t i = 0; i < m && !pivot; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (!p(i, j).component(c).is_zero()) {
                    pivot = {i, j};
                    break;
                }
        if (!pivot) {
            eta_comps.push_back(RatFunc::one(nv));
            if (ncomp == 1) {
                out.status = EtaStatus::degenerate;
                out.notes.push_back("structure matrix is zero; condition is vacuous, eta := 1");
            } else {
                std::ostringstream os;
                os << "component " << (c + 1)
                   << " has zero structure; degenerate, eta component := 1";
                out.notes.push_back(os.str());
            }
            continue;
        }
        auto [pi, pj] = *pivot;
        const RatFunc& pv = p(pi, pj).component(c);
        const RatFunc& qv = q(pi, pj).component(c);
        if (qv.is_zero()) {
            out.status = EtaStatus::not_proportional;
            out.witness = Witness{{pi + 1, pj + 1}, to_string(pv, names)};
            out.notes.push_back("Q vanishes at a nonzero structure entry; no eta can exist");
            return out;
        }
        RatFunc eta_c = -(pv / qv);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                RatFunc residual = eta_c * q(i, j).component(c) + p(i, j).component(c);
                if (!residual.is_zero()) {
                    out.status = EtaStatus::not_proportional;
                    out.witness = Witness{{i + 1, j + 1}, to_string(residual, names)};
                    return out;
                }
            }
        eta_comps.push_back(eta_c);
        any_found = true;
    }
    if (!any_found && ncomp > 1) out.status = EtaStatus::degenerate;
    out.eta = RingElem(tag, std::move(eta_comps));
    return out;
}

inline SolveEtaResult solve_eta(const KPAlgebra& k) {
    return solve_eta(k.p_matrix(), k.metric().matrix());
}

struct VerifyResult {
    Verdict verdict;
    std::optional<Matrix<RingElem>> residual;  // eta*Q + P when the check fails
};

/// Decides eta * Q + P = 0 entrywise. Matrix-level equality settles the full
/// condition on all pairs of elements because brackets extend from the
/// generators by the Leibniz rule.
inline VerifyResult verify_kp(const KPAlgebra& k) {
    if (!k.eta()) throw InputError("verify requires eta to be present");
    Matrix<RingElem> q = compose_Q(k);
    const RingElem& eta = *k.eta();
    Matrix<RingElem> residual = q.map([&](const RingElem& e) { return eta * e; }) + k.p_matrix();
    for (std::size_t i = 0; i < residual.rows(); ++i)
        for (std::size_t j = 0; j < residual.cols(); ++j)
            if (!residual(i, j).is_zero()) {
                VerifyResult r;
                r.verdict = Verdict::failure({i + 1, j + 1}, to_string(residual(i, j)));
                r.residual = residual;
                return r;
            }
    VerifyResult r;
    r.verdict = Verdict::ok();
    if (k.structure().jacobi_assumed())
        r.verdict.notes.push_back("Jacobi identity was assumed, not checked");
    return r;
}

/// Constructs a verified triple: solves for eta when absent, verifies when
/// present, and throws with the failing verdict otherwise.
inline KPAlgebra make_verified(KPAlgebra k) {
    if (!k.eta()) {
        SolveEtaResult s = solve_eta(k);
        if (s.status == EtaStatus::not_proportional) {
            Verdict v;
            v.status = Status::unsupported;
            v.witness = s.witness;
            v.notes = s.notes;
            throw CheckError("no eta exists for this triple", std::move(v));
        }
        k.set_eta(*s.eta);
        return k;
    }
    VerifyResult r = verify_kp(k);
    if (!r.verdict.passed()) throw CheckError("declared eta fails verification", r.verdict);
    return k;
}

struct KpTensors {
    Matrix<RingElem> d_upper;  // D^{ij} = eta (P g P^T)^{ij}, symmetric
    Matrix<RingElem> d_mixed;  // D^i_j = D^{ik} g_{kj}
    Matrix<RingElem> p_mixed;  // P^i_j = P^{ik} g_{kj}
};

inline KpTensors kp_tensors(const KPAlgebra& k) {
    if (!k.eta()) throw InputError("tensors require eta to be present");
    const Matrix<RingElem>& p = k.p_matrix();
    const Matrix<RingElem>& g = k.metric().matrix();
    const RingElem& eta = *k.eta();
    Matrix<RingElem> d_upper =
        (p * g * p.transpose()).map([&](const RingElem& e) { return eta * e; });
    return KpTensors{d_upper, d_upper * g, p * g};
}

/// Inner derivation in the generator basis: alpha = sum_i a_i {x^i, .}.
struct Derivation {
    std::vector<RingElem> coefficients;
};

/// alpha(x^i) = sum_k a_k P^{ki}.
inline RingElem derivation_value(const KPAlgebra& k, const Derivation& alpha, std::size_t i) {
    const Matrix<RingElem>& p = k.p_matrix();
    if (alpha.coefficients.size() != k.size())
        throw InputError("derivation coefficient count does not match generator count");
    RingElem acc = RingElem::zero(k.ring());
    for (std::size_t kk = 0; kk < alpha.coefficients.size(); ++kk)
        acc += alpha.coefficients[kk] * p(kk, i);
    return acc;
}

/// g(alpha, beta) = alpha(x^i) g_{ij} beta(x^j).
inline RingElem metric_on_derivations(const KPAlgebra& k, const Derivation& alpha,
                                      const Derivation& beta) {
    const std::size_t m = k.size();
    const Matrix<RingElem>& g = k.metric().matrix();
    std::vector<RingElem> av, bv;
    av.reserve(m);
    bv.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        av.push_back(derivation_value(k, alpha, i));
        bv.push_back(derivation_value(k, beta, i));
    }
    RingElem acc = RingElem::zero(k.ring());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) acc += av[i] * g(i, j) * bv[j];
    return acc;
}

}  // namespace kpa
