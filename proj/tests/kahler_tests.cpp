#include <catch2/catch_amalgamated.hpp>

#include "kpa/io.hpp"
#include "kpa/kahler.hpp"
#include "support/builders.hpp"
#include "support/gen.hpp"

using namespace kpa;
using namespace kpa::test;

namespace {

/// ({x,y} = p, g, eta optional) on the free two-generator ring.
KPAlgebra two_gen(const RingElem& p, Matrix<RingElem> g,
                  std::optional<RingElem> eta = std::nullopt) {
    const RingTagPtr& tag = p.ring();
    Matrix<RingElem> pm(2, 2, RingElem::zero(tag));
    pm(0, 1) = p;
    pm(1, 0) = -p;
    return KPAlgebra(PoissonStructure::make(tag, std::move(pm)), Metric::make(std::move(g)),
                     std::nullopt, std::move(eta));
}

KPAlgebra trivial_pair() {
    RingTagPtr tag = make_ring({"x", "y"});
    return two_gen(RingElem::one(tag), identity_matrix(tag, 2), RingElem::one(tag));
}

}  // namespace

TEST_CASE("compose_Q on the trivial pair gives -P") {
    RingTagPtr tag = make_ring({"x", "y"});
    KPAlgebra k = trivial_pair();
    Matrix<RingElem> q = compose_Q(k);
    CHECK(q == -k.p_matrix());
    CHECK(to_string(q) == "[[0, -1], [1, 0]]");
}

TEST_CASE("compose_Q of a zero structure is zero") {
    RingTagPtr tag = make_ring({"x", "y"});
    Matrix<RingElem> zero(2, 2, RingElem::zero(tag));
    Matrix<RingElem> q = compose_Q(zero, identity_matrix(tag, 2));
    CHECK(q == zero);
}

TEST_CASE("redundant-generator composite identity, fully symbolic") {
    // Three distinguished generators where the first and third coincide:
    // P' has the pattern [[0, l, 0], [-l, 0, -l], [0, l, 0]] and with the
    // metric pattern h = [[a/4, b/2, a/4], [b/2, c, b/2], [a/4, b/2, a/4]]
    // the composite collapses to P' h P' h P' = -l^2 (a c - b^2) P' for
    // arbitrary values of l, a, b, c.
    RingTagPtr tag = make_ring({"l", "a", "b", "c"});
    RingElem l = rv(tag, 0), a = rv(tag, 1), b = rv(tag, 2), c = rv(tag, 3);
    RingElem half = RingElem::constant(tag, Scalar(1) / 2);
    RingElem quarter = RingElem::constant(tag, Scalar(1) / 4);

    Matrix<RingElem> p(3, 3, RingElem::zero(tag));
    p(0, 1) = l;
    p(1, 0) = -l;
    p(1, 2) = -l;
    p(2, 1) = l;
    Matrix<RingElem> h(3, 3, RingElem::zero(tag));
    h(0, 0) = quarter * a;
    h(0, 1) = half * b;
    h(0, 2) = quarter * a;
    h(1, 0) = half * b;
    h(1, 1) = c;
    h(1, 2) = half * b;
    h(2, 0) = quarter * a;
    h(2, 1) = half * b;
    h(2, 2) = quarter * a;

    Matrix<RingElem> q = compose_Q(p, h);
    RingElem factor = -(l * l * (a * c - b * b));
    CHECK(q == factor * p);
}

TEST_CASE("solve_eta") {
    RingTagPtr tag = make_ring({"x", "y"});
    RingElem x = rv(tag, 0);

    SECTION("trivial pair forces eta = 1") {
        SolveEtaResult s = solve_eta(trivial_pair());
        REQUIRE(s.status == EtaStatus::found);
        CHECK(*s.eta == RingElem::one(tag));
        CHECK(to_string(*s.eta) == "1");
    }

    SECTION("{x,y} = x with the unit metric gives 1/x^2") {
        KPAlgebra k = two_gen(x, identity_matrix(tag, 2));
        SolveEtaResult s = solve_eta(k);
        REQUIRE(s.status == EtaStatus::found);

        // Oracle 1: the closed two-generator formula (p^2 det g)^{-1}.
        RingElem closed = RingElem::one(tag) / (x * x);
        CHECK(*s.eta == closed);
        CHECK(to_string(*s.eta) == "1/x^2");

        // Oracle 2: direct matrix expansion. P g P g P with g = I is P^3,
        // and P^2 = -x^2 I, so Q = -x^2 P and eta = -P^{12}/Q^{12} = 1/x^2.
        Matrix<RingElem> q = compose_Q(k);
        CHECK(q == (-(x * x)) * k.p_matrix());
        CHECK(*s.eta == -(k.p_matrix()(0, 1) / q(0, 1)));
    }

    SECTION("generic two-generator closed form") {
        Rng rng(801);
        for (int iter = 0; iter < 10; ++iter) {
            KPAlgebra k = random_two_gen_kp(rng);
            RingElem expected = *k.eta();  // generator stores the closed form
            KPAlgebra stripped(k.structure(), k.metric());
            SolveEtaResult s = solve_eta(stripped);
            REQUIRE(s.status == EtaStatus::found);
            CHECK(*s.eta == expected);
        }
    }

    SECTION("degenerate structure") {
        Matrix<RingElem> zero(2, 2, RingElem::zero(tag));
        KPAlgebra k(PoissonStructure::make(tag, zero), Metric::make(identity_matrix(tag, 2)));
        SolveEtaResult s = solve_eta(k);
        CHECK(s.status == EtaStatus::degenerate);
        CHECK(*s.eta == RingElem::one(tag));
        CHECK(!s.notes.empty());
    }

    SECTION("two decoupled blocks with different etas are not proportional") {
        RingTagPtr t4 = make_ring({"x1", "x2", "x3", "x4"});
        RingElem x3 = rv(t4, 2);
        Matrix<RingElem> p(4, 4, RingElem::zero(t4));
        p(0, 1) = RingElem::one(t4);
        p(1, 0) = -p(0, 1);
        p(2, 3) = x3;
        p(3, 2) = -x3;
        KPAlgebra k(PoissonStructure::make(t4, std::move(p)),
                    Metric::make(identity_matrix(t4, 4)));
        SolveEtaResult s = solve_eta(k);
        REQUIRE(s.status == EtaStatus::not_proportional);
        REQUIRE(s.witness.has_value());
        // Blockwise the closed form gives eta 1 on the first block and
        // 1/x3^2 on the second; the scan pins eta = 1 and the first failing
        // entry is in the second block.
        CHECK(s.witness->indices == std::vector<std::size_t>{3, 4});
    }
}

TEST_CASE("verify_kp") {
    RingTagPtr tag = make_ring({"x", "y"});

    SECTION("trivial pair verifies") {
        CHECK(verify_kp(trivial_pair()).verdict.passed());
    }
    SECTION("wrong eta fails with residual -P") {
        KPAlgebra k = two_gen(RingElem::one(tag), identity_matrix(tag, 2),
                              RingElem::constant(tag, Scalar(2)));
        VerifyResult r = verify_kp(k);
        REQUIRE(!r.verdict.passed());
        REQUIRE(r.residual.has_value());
        CHECK(*r.residual == -k.p_matrix());
    }
    SECTION("missing eta is an input error") {
        KPAlgebra k = two_gen(RingElem::one(tag), identity_matrix(tag, 2));
        CHECK_THROWS_AS(verify_kp(k), InputError);
    }
    SECTION("solve then verify always passes") {
        Rng rng(55);
        for (int iter = 0; iter < 15; ++iter) {
            KPAlgebra k = random_two_gen_kp(rng);
            KPAlgebra stripped(k.structure(), k.metric());
            SolveEtaResult s = solve_eta(stripped);
            REQUIRE(s.status == EtaStatus::found);
            stripped.set_eta(*s.eta);
            CHECK(verify_kp(stripped).verdict.passed());
        }
    }
    SECTION("uniqueness: perturbing eta breaks verification when P is nonzero") {
        Rng rng(56);
        for (int iter = 0; iter < 10; ++iter) {
            KPAlgebra k = random_verified_kp(rng);
            bool p_zero = true;
            for (std::size_t i = 0; i < k.size() && p_zero; ++i)
                for (std::size_t j = 0; j < k.size(); ++j)
                    if (!k.p_matrix()(i, j).is_zero()) {
                        p_zero = false;
                        break;
                    }
            KPAlgebra perturbed(k.structure(), k.metric(), std::nullopt,
                                *k.eta() + RingElem::one(k.ring()));
            CHECK(verify_kp(perturbed).verdict.passed() == p_zero);
        }
    }
}

TEST_CASE("solve_eta on a presented triple with a repeated generator") {
    // Base ring {x,y} with {x,y} = p; distinguished elements (x, y, x) and
    // the induced metric pattern from a numeric g.
    RingTagPtr tag = make_ring({"x", "y"});
    RingElem x = rv(tag, 0), y = rv(tag, 1);
    RingElem p = x * x + y;  // any bracket works; keep it nonlinear
    Matrix<RingElem> pm(2, 2, RingElem::zero(tag));
    pm(0, 1) = p;
    pm(1, 0) = -p;
    PoissonStructure base = PoissonStructure::make(tag, std::move(pm));

    const Scalar g11(2), g12(1), g22(3);
    Matrix<RingElem> h(3, 3, RingElem::zero(tag));
    h(0, 0) = RingElem::constant(tag, Scalar(g11 / 4));
    h(0, 1) = RingElem::constant(tag, Scalar(g12 / 2));
    h(0, 2) = h(0, 0);
    h(1, 0) = h(0, 1);
    h(1, 1) = RingElem::constant(tag, g22);
    h(1, 2) = h(0, 1);
    h(2, 0) = h(0, 0);
    h(2, 1) = h(0, 1);
    h(2, 2) = h(0, 0);

    KPAlgebra presented(base, Metric::make(std::move(h)),
                        std::vector<RingElem>{x, y, x});
    CHECK(presented.presented());
    CHECK(presented.p_matrix()(0, 1) == p);
    CHECK(presented.p_matrix()(0, 2).is_zero());
    CHECK(presented.p_matrix()(1, 2) == -p);

    SolveEtaResult s = solve_eta(presented);
    REQUIRE(s.status == EtaStatus::found);
    Scalar det = g11 * g22 - g12 * g12;
    RingElem closed = RingElem::one(tag) / (p * p * RingElem::constant(tag, det));
    CHECK(*s.eta == closed);
}

TEST_CASE("kp tensors") {
    RingTagPtr tag = make_ring({"x", "y"});

    SECTION("trivial pair: D upper is the identity") {
        KpTensors t = kp_tensors(trivial_pair());
        // Independent contraction: D^{ij} = sum_k P^{ik} P^{jk} with eta = 1.
        KPAlgebra k = trivial_pair();
        Matrix<RingElem> expect(2, 2, RingElem::zero(tag));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t kk = 0; kk < 2; ++kk)
                    expect(i, j) += k.p_matrix()(i, kk) * k.p_matrix()(j, kk);
        CHECK(t.d_upper == expect);
        CHECK(t.d_upper == identity_matrix(tag, 2));
    }
    SECTION("zero structure: all tensors vanish") {
        Matrix<RingElem> zero(2, 2, RingElem::zero(tag));
        KPAlgebra k(PoissonStructure::make(tag, zero), Metric::make(identity_matrix(tag, 2)),
                    std::nullopt, RingElem::one(tag));
        KpTensors t = kp_tensors(k);
        CHECK(t.d_upper == zero);
        CHECK(t.d_mixed == zero);
        CHECK(t.p_mixed == zero);
    }
    SECTION("D upper is symmetric on random verified instances") {
        Rng rng(77);
        for (int iter = 0; iter < 10; ++iter) {
            KPAlgebra k = random_verified_kp(rng);
            CHECK(is_symmetric(kp_tensors(k).d_upper));
        }
    }
}

TEST_CASE("identities linking the D and P tensors") {
    Rng rng(909);
    int cases = 0;
    while (cases < 110) {
        KPAlgebra k = random_verified_kp(rng);
        const std::size_t m = k.size();
        const Matrix<RingElem>& g = k.metric().matrix();
        const RingElem& eta = *k.eta();
        KpTensors t = kp_tensors(k);
        RingElem a = random_element(rng, k.ring(), 2, 2);

        // P^i(a) = {x^i, a}; the lowered forms contract with the metric.
        std::vector<RingElem> pvec, dvec;
        for (std::size_t i = 0; i < m; ++i)
            pvec.push_back(k.bracket(k.elements()[i], a));
        for (std::size_t i = 0; i < m; ++i) {
            RingElem acc = RingElem::zero(k.ring());
            for (std::size_t kk = 0; kk < m; ++kk)
                for (std::size_t l = 0; l < m; ++l)
                    acc += pvec[kk] * g(kk, l) * k.p_matrix()(l, i);
            dvec.push_back(eta * acc);
        }
        auto lower = [&](const std::vector<RingElem>& v, std::size_t j) {
            RingElem acc = RingElem::zero(k.ring());
            for (std::size_t kk = 0; kk < m; ++kk) acc += g(j, kk) * v[kk];
            return acc;
        };
        for (std::size_t i = 0; i < m; ++i) {
            RingElem lhs1 = RingElem::zero(k.ring());
            RingElem lhs2 = RingElem::zero(k.ring());
            for (std::size_t j = 0; j < m; ++j) {
                lhs1 += t.d_upper(i, j) * lower(pvec, j);
                lhs2 += k.p_matrix()(i, j) * lower(dvec, j);
            }
            CHECK(lhs1 == pvec[i]);
            CHECK(lhs2 == pvec[i]);
        }
        ++cases;
    }
}

TEST_CASE("projector identity for the mixed tensor") {
    Rng rng(910);
    int cases = 0;
    while (cases < 100) {
        KPAlgebra k = random_verified_kp(rng);
        KpTensors t = kp_tensors(k);
        CHECK(t.d_mixed * t.d_upper == t.d_upper);
        ++cases;
    }
}

TEST_CASE("metric on inner derivations") {
    KPAlgebra k = trivial_pair();
    RingTagPtr tag = k.ring();
    Derivation alpha{{RingElem::one(tag), RingElem::zero(tag)}};  // {x, .}
    Derivation beta{{RingElem::zero(tag), RingElem::one(tag)}};   // {y, .}

    // alpha(x) = 0, alpha(y) = 1, beta(x) = -1, beta(y) = 0.
    CHECK(metric_on_derivations(k, alpha, beta).is_zero());
    CHECK(metric_on_derivations(k, alpha, alpha) == RingElem::one(tag));

    Rng rng(123);
    for (int iter = 0; iter < 25; ++iter) {
        KPAlgebra kk = random_verified_kp(rng);
        std::vector<RingElem> ac, bc;
        for (std::size_t i = 0; i < kk.size(); ++i) {
            ac.push_back(random_element(rng, kk.ring(), 1, 2));
            bc.push_back(random_element(rng, kk.ring(), 1, 2));
        }
        Derivation a{ac}, b{bc};
        CHECK(metric_on_derivations(kk, a, b) == metric_on_derivations(kk, b, a));
    }
}

TEST_CASE("make_verified") {
    RingTagPtr tag = make_ring({"x", "y"});
    RingElem x = rv(tag, 0);

    KPAlgebra solved = make_verified(two_gen(x, identity_matrix(tag, 2)));
    CHECK(*solved.eta() == RingElem::one(tag) / (x * x));

    CHECK_THROWS_AS(make_verified(two_gen(RingElem::one(tag), identity_matrix(tag, 2),
                                          RingElem::constant(tag, Scalar(2)))),
                    CheckError);
}
