#include <catch2/catch_amalgamated.hpp>

#include "kpa/poisson.hpp"
#include "support/builders.hpp"
#include "support/gen.hpp"

using namespace kpa;
using namespace kpa::test;

namespace {

PoissonStructure canonical_pair(const RingElem& bracket_xy) {
    const RingTagPtr& tag = bracket_xy.ring();
    Matrix<RingElem> p(2, 2, RingElem::zero(tag));
    p(0, 1) = bracket_xy;
    p(1, 0) = -bracket_xy;
    return PoissonStructure::make(tag, std::move(p));
}

PoissonStructure rotational_structure(const RingTagPtr& tag) {
    RingElem x = rv(tag, 0), y = rv(tag, 1), z = rv(tag, 2);
    Matrix<RingElem> p(3, 3, RingElem::zero(tag));
    p(0, 1) = z;
    p(1, 0) = -z;
    p(1, 2) = x;
    p(2, 1) = -x;
    p(2, 0) = y;
    p(0, 2) = -y;
    return PoissonStructure::make(tag, std::move(p));
}

/// Independent Jacobi oracle: evaluates {a,{b,c}} + {b,{c,a}} + {c,{a,b}}
/// through the bracket itself rather than the Jacobiator formula.
RingElem jacobiator_by_brackets(const PoissonStructure& s, const RingElem& a, const RingElem& b,
                                const RingElem& c) {
    return s.bracket(a, s.bracket(b, c)) + s.bracket(b, s.bracket(c, a)) +
           s.bracket(c, s.bracket(a, b));
}

}  // namespace

TEST_CASE("bracket follows the Leibniz expansion") {
    RingTagPtr tag = make_ring({"x", "y"});
    PoissonStructure s = canonical_pair(RingElem::one(tag));
    RingElem x = rv(tag, 0), y = rv(tag, 1);

    CHECK(s.bracket(x * x, y) == Scalar(2) * x);
    CHECK(s.bracket(x, y) == RingElem::one(tag));
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        RingElem a = random_element(rng, tag);
        CHECK(s.bracket(a, a).is_zero());
    }
}

TEST_CASE("declared entries come back out of the bracket") {
    RingTagPtr tag = make_ring({"x", "y"});
    RingElem x = rv(tag, 0), y = rv(tag, 1);
    PoissonStructure s = canonical_pair(x);

    CHECK(s.bracket(y, x) == -x);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(s.bracket(s.generator_element(i), s.generator_element(j)) == s.matrix()(i, j));
}

TEST_CASE("antisymmetry verdicts") {
    RingTagPtr tag = make_ring({"x", "y"});

    SECTION("pass") {
        CHECK(check_antisymmetry(scalar_matrix(tag, {{0, 1}, {-1, 0}})).passed());
    }
    SECTION("fail carries the first offending pair and residual") {
        Verdict v = check_antisymmetry(scalar_matrix(tag, {{0, 1}, {1, 0}}));
        REQUIRE(!v.passed());
        CHECK(v.witness->indices == std::vector<std::size_t>{1, 2});
        CHECK(v.witness->residual == "2");
    }
    SECTION("nonzero diagonal fails") {
        RingTagPtr t1 = make_ring({"x"});
        Matrix<RingElem> m(1, 1, rv(t1, 0));
        Verdict v = check_antisymmetry(m);
        REQUIRE(!v.passed());
        CHECK(v.witness->indices == std::vector<std::size_t>{1, 1});
    }
}

TEST_CASE("jacobi verdicts") {
    SECTION("rotational structure passes") {
        RingTagPtr tag = make_ring({"x", "y", "z"});
        PoissonStructure s = rotational_structure(tag);
        CHECK(check_jacobi(s.matrix()).passed());
        // Cross-check with the bracket-level oracle on the generators.
        CHECK(jacobiator_by_brackets(s, rv(tag, 0), rv(tag, 1), rv(tag, 2)).is_zero());
    }
    SECTION("constant matrices always pass") {
        RingTagPtr tag = make_ring({"x", "y", "z"});
        Matrix<RingElem> m = scalar_matrix(tag, {{0, 2, -1}, {-2, 0, 3}, {1, -3, 0}});
        CHECK(check_jacobi(m).passed());
    }
    SECTION("failing structure reports the nonzero jacobiator") {
        // {x,y} = x, {y,z} = y, {z,x} = z. The bracket-level expansion gives
        // {x,{y,z}} + {y,{z,x}} + {z,{x,y}} = {x,y} + {y,z} + {z,x} = x + y + z.
        RingTagPtr tag = make_ring({"x", "y", "z"});
        RingElem x = rv(tag, 0), y = rv(tag, 1), z = rv(tag, 2);
        Matrix<RingElem> m(3, 3, RingElem::zero(tag));
        m(0, 1) = x;
        m(1, 0) = -x;
        m(1, 2) = y;
        m(2, 1) = -y;
        m(2, 0) = z;
        m(0, 2) = -z;
        Verdict v = check_jacobi(m);
        REQUIRE(!v.passed());
        CHECK(v.witness->indices == std::vector<std::size_t>{1, 2, 3});
        CHECK(v.witness->residual == "x + y + z");
        CHECK_THROWS_AS(PoissonStructure::make(tag, m), CheckError);
        CHECK(PoissonStructure::make(tag, m, /*assume_jacobi=*/true).jacobi_assumed());
    }
}

TEST_CASE("bracket laws on random elements") {
    RingTagPtr tag3 = make_ring({"x", "y", "z"});
    PoissonStructure rot = rotational_structure(tag3);
    RingTagPtr tag2 = make_ring({"x", "y"});
    PoissonStructure pair = canonical_pair(rv(tag2, 0));

    Rng rng(4242);
    int cases = 0;
    while (cases < 110) {
        const bool use_rot = cases % 2 == 0;
        const PoissonStructure& s = use_rot ? rot : pair;
        const RingTagPtr& tag = use_rot ? tag3 : tag2;
        RingElem a = random_element(rng, tag, 2, 2);
        RingElem b = random_element(rng, tag, 2, 2);
        RingElem c = random_element(rng, tag, 2, 2);
        CHECK(s.bracket(a, b) == -s.bracket(b, a));
        CHECK(s.bracket(a, b * c) == b * s.bracket(a, c) + s.bracket(a, b) * c);
        CHECK(jacobiator_by_brackets(s, a, b, c).is_zero());
        ++cases;
    }
}

TEST_CASE("product structures bracket componentwise") {
    RingTagPtr tag = make_product_ring({{"x", "y"}, {"u", "v"}});
    Matrix<RingElem> p(4, 4, RingElem::zero(tag));
    RingElem exy = RingElem::component_unit(tag, 0);  // {x,y} = (1, 0)
    RingElem euv = rv(tag, 2);                        // {u,v} = (0, u)
    p(0, 1) = exy;
    p(1, 0) = -exy;
    p(2, 3) = euv;
    p(3, 2) = -euv;
    PoissonStructure s = PoissonStructure::make(tag, std::move(p));

    RingElem x = rv(tag, 0), u = rv(tag, 2), v = rv(tag, 3);
    CHECK(s.bracket(x, u).is_zero());
    CHECK(s.bracket(u, v) == euv);
    CHECK(check_jacobi(s.matrix()).passed());
}
