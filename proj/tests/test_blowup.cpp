#include "feasres/blowup.hpp"
#include "feasres/normalize.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace feasres;

namespace {

MPoly P(const std::string& s) { return mpoly_from_string(s); }

Germ G(const std::string& eq, long long r = 1,
       std::array<long long, 4> a = {0, 0, 0, 0}) {
    return Germ{P(eq), CyclicAction(r, a), false};
}

Weight W(long long r0, std::array<long long, 4> b) { return Weight{r0, b}; }

}  // namespace

TEST_CASE("blowup of a split ordinary double point resolves in one step") {
    Germ g = G("x*y + z^2 + u^2");
    Blowup bl = weighted_blowup(g, W(1, {1, 1, 1, 1}));
    CHECK(bl.multiplicity == Rat(2));
    CHECK(bl.discrepancy == Rat(1));
    CHECK(bl.minimal);
    CHECK(bl.exceptional == Irreducibility::Yes);
    REQUIRE(bl.charts.size() == 4);
    CHECK(bl.charts[0].germ.phi == P("y + z^2 + u^2"));
    CHECK(bl.charts[0].germ.action.r == 1);
    CHECK(bl.charts[3].germ.phi == P("x*y + z^2 + 1"));
    CHECK(locate_singularities(bl).empty());
}

TEST_CASE("cA chain drops the u exponent by two per blowup") {
    Germ g = G("x*y + z^2 + u^4");
    Blowup bl = weighted_blowup(g, W(1, {1, 1, 1, 1}));
    CHECK(bl.discrepancy == Rat(1));
    auto sing = locate_singularities(bl);
    REQUIRE(sing.size() == 1);
    CHECK(sing[0].chart == 3);
    CHECK(sing[0].origin);
    CHECK(sing[0].germ.phi == P("x*y + z^2 + u^2"));
}

TEST_CASE("a non-minimal weight is reported, not rejected") {
    Blowup bl = weighted_blowup(G("x*y + z^2 + u^2"), W(1, {1, 1, 1, 2}));
    CHECK(bl.discrepancy == Rat(2));
    CHECK(!bl.minimal);
}

TEST_CASE("quotient point blowup has discrepancy 1/r and terminal charts") {
    Germ q{MPoly(), CyclicAction(5, {2, 3, 1, 0}), true};
    Blowup bl = weighted_blowup(q, W(5, {2, 3, 1, 0}));
    CHECK(bl.discrepancy == Rat(1, 5));
    CHECK(bl.minimal);
    CHECK(bl.exceptional == Irreducibility::Yes);
    REQUIRE(bl.charts.size() == 3);
    CHECK(bl.charts[0].germ.action.r == 2);
    CHECK(bl.charts[1].germ.action.r == 3);
    CHECK(bl.charts[2].germ.action.r == 1);
    for (auto& ch : bl.charts) {
        if (ch.germ.action.r == 1) continue;
        auto f = terminal_quotient_form(ch.germ.action.r,
                                        {ch.germ.action.a[0], ch.germ.action.a[1],
                                         ch.germ.action.a[2]});
        CHECK(f.has_value());
    }
    auto sing = locate_singularities(bl);
    REQUIRE(sing.size() == 2);
    CHECK(sing[0].germ.action.r == 2);
    CHECK(sing[1].germ.action.r == 3);

    CHECK_THROWS_AS(weighted_blowup(q, W(5, {1, 1, 1, 0})), HypothesisViolated);
}

TEST_CASE("cA with tau = 3 leaves a single index two quotient") {
    Germ g = G("x*y + z^3 + u^3");
    Blowup bl = weighted_blowup(g, W(1, {1, 2, 1, 1}));
    CHECK(bl.discrepancy == Rat(1));
    CHECK(bl.exceptional == Irreducibility::Yes);
    auto sing = locate_singularities(bl);
    REQUIRE(sing.size() == 1);
    CHECK(sing[0].chart == 1);
    CHECK(sing[0].origin);
    CHECK(sing[0].germ.action.r == 2);
    Analysis a = analyze(sing[0].germ);
    CHECK(a.reduced);
    CHECK(a.cls == SingularityClass::TerminalQuotient);
    CHECK(a.inv.get("r") == 2);
}

TEST_CASE("repeated factors of the leading form leave singular points on E") {
    // f_4 = z^2 (z - u)^2; the two double factors leave two cA points of
    // tau = 2, one at a chart origin and one at a point with u = 1
    Germ g = G("x*y + z^4 - 2*z^3*u + z^2*u^2 + u^6");
    Blowup bl = weighted_blowup(g, W(1, {1, 3, 1, 1}));
    CHECK(bl.discrepancy == Rat(1));
    auto sing = locate_singularities(bl);
    REQUIRE(sing.size() == 3);

    CHECK(sing[0].chart == 1);
    CHECK(sing[0].origin);
    Analysis a1 = analyze(sing[0].germ);
    CHECK(a1.cls == SingularityClass::TerminalQuotient);
    CHECK(a1.inv.get("r") == 3);

    CHECK(sing[1].chart == 2);
    CHECK(!sing[1].origin);
    CHECK(sing[1].point == std::array<Rat, 4>{Rat(0), Rat(0), Rat(0), Rat(1)});
    Analysis a2 = analyze(sing[1].germ);
    CHECK(a2.cls == SingularityClass::cA);
    CHECK(a2.inv.get("tau") == 2);

    CHECK(sing[2].chart == 3);
    CHECK(sing[2].origin);
    Analysis a3 = analyze(sing[2].germ);
    CHECK(a3.cls == SingularityClass::cA);
    CHECK(a3.inv.get("tau") == 2);
}

TEST_CASE("irrational singular points on a chart are a hard failure") {
    // f_4 = (z^2 - 2 u^2)^2: the double factor sits at z = sqrt(2)
    Germ g = G("x*y + z^4 - 4*z^2*u^2 + 4*u^4 + u^9");
    Blowup bl = weighted_blowup(g, W(1, {1, 3, 1, 1}));
    CHECK(bl.discrepancy == Rat(1));
    CHECK_THROWS_AS(locate_singularities(bl), IrrationalCenter);
}

TEST_CASE("exceptional divisor reducibility is detected") {
    // leading form x y: two planes
    Blowup bl = weighted_blowup(G("x*y + z^4 + u^4"), W(1, {1, 1, 1, 1}));
    CHECK(bl.exceptional == Irreducibility::No);
    // leading form x^2 + z^2 + u^2: irreducible rank three quadric
    Blowup b2 = weighted_blowup(G("x^2 + y^3 + z^2 + u^2"), W(1, {1, 1, 1, 1}));
    CHECK(b2.exceptional == Irreducibility::Yes);
    // leading form x^2 + z^2: splits over C
    Blowup b3 = weighted_blowup(G("x^2 + y^3 + z^2 + u^4"), W(1, {1, 2, 1, 1}));
    CHECK(b3.exceptional == Irreducibility::No);
}

TEST_CASE("weights outside the lattice or imprimitive weights are rejected") {
    Germ g = G("x*y + z^6 + u^3", 3, {1, 2, 1, 0});
    // valid Kawakita weight for kappa = 2: (1/3)(1, 5, 1, 3)
    Blowup bl = weighted_blowup(g, W(3, {1, 5, 1, 3}));
    CHECK(bl.discrepancy == Rat(1, 3));
    CHECK(bl.minimal);
    // not congruent to a multiple of the residues
    CHECK_THROWS_AS(weighted_blowup(g, W(3, {1, 1, 1, 3})), HypothesisViolated);
    // integer multiple of a lattice vector
    CHECK_THROWS_AS(weighted_blowup(G("x*y + z^2 + u^2"), W(1, {2, 2, 2, 2})),
                    HypothesisViolated);
}

TEST_CASE("quotient residues of blowup charts are faithful and consistent") {
    Germ g = G("x*y + z^3 + u^7");
    Blowup bl = weighted_blowup(g, W(1, {1, 2, 1, 1}));
    auto& ch = bl.charts[1];
    CHECK(ch.germ.action.r == 2);
    // the descended equation must be semi-invariant for the chart action
    CHECK(semi_invariant_weight(ch.germ.phi, ch.germ.action).has_value());
}
