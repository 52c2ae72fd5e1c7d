#include "feasres/resolver.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace feasres;

namespace {

MPoly P(const std::string& s) { return mpoly_from_string(s); }

Germ G(const std::string& eq, long long r = 1,
       std::array<long long, 4> a = {0, 0, 0, 0}) {
    return Germ{P(eq), CyclicAction(r, a), false};
}

Germ Q(long long r, std::array<long long, 4> a) {
    return Germ{MPoly(), CyclicAction(r, a), true};
}

CaseDecision pick(const Germ& g) { return select_case(analyze(g)); }

// resolve + audit; any audit issue fails the test with its message
Resolution certified(const Germ& g) {
    Resolution r = resolve(g);
    for (auto& is : audit(r))
        FAIL_CHECK("audit: node " << is.node << " child " << is.child << ": "
                                  << is.what);
    return r;
}

std::vector<std::string> labels(const Resolution& r) {
    std::vector<std::string> out;
    for (auto& n : r.nodes)
        if (!n.leaf) out.push_back(n.decision.label);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// quotient points

TEST_CASE("economic resolution of a terminal quotient point uses r - 1 blowups") {
    Resolution r5 = certified(Q(5, {2, 3, 1, 0}));
    CHECK(r5.blowup_count() == 4);
    CHECK(r5.nodes[0].decision.label == "quotient");
    CHECK(r5.nodes[0].decision.v == Weight{5, {2, 3, 1, 0}});

    Resolution r7 = certified(Q(7, {3, 4, 1, 0}));
    CHECK(r7.blowup_count() == 6);
}

TEST_CASE("depth cap aborts before the first blowup when set to zero") {
    CHECK_THROWS_AS(resolve(Q(5, {2, 3, 1, 0}), 0), DepthExceeded);
}

// ---------------------------------------------------------------------------
// cA and cA/r

TEST_CASE("ordinary double point resolves in one blowup") {
    Resolution r = certified(G("x*y + z^2 + u^2"));
    CHECK(r.blowup_count() == 1);
    CHECK(r.nodes.size() == 1);
    CHECK(r.nodes[0].decision.label == "cA");
    CHECK(r.nodes[0].decision.v == Weight{1, {1, 1, 1, 1}});
}

TEST_CASE("cA chain length is half the u exponent") {
    for (int b = 2; b <= 8; ++b) {
        Resolution r = certified(G("x*y + z^2 + u^" + std::to_string(b)));
        CHECK(r.blowup_count() == b / 2);
    }
}

TEST_CASE("tau = 3 cA point resolves through an index two quotient") {
    Resolution r = certified(G("x*y + z^3 + u^3"));
    CHECK(r.nodes[0].decision.v == Weight{1, {1, 2, 1, 1}});
    CHECK(labels(r) == std::vector<std::string>{"cA", "quotient"});
}

TEST_CASE("cA/r picks the lattice weight from kappa") {
    Germ g = G("x*y + z^6 + u^3", 3, {1, 2, 1, 0});
    CaseDecision d = pick(g);
    CHECK(d.label == "cA/r");
    CHECK(d.v == Weight{3, {1, 5, 1, 3}});
    Resolution r = certified(g);
    CHECK(r.blowup_count() >= 2);
}

// ---------------------------------------------------------------------------
// cD points

TEST_CASE("multiplicity three cD with a squarefree cubic") {
    Germ g = G("x^2 + y^2*z + z^3 + z*u^2 + u^3");
    CaseDecision d = pick(g);
    CHECK(d.label == "cD mu3 1-1");
    CHECK(d.v == Weight{1, {2, 1, 1, 1}});
    certified(g);
}

TEST_CASE("triple line on the u axis takes the cube weight directly") {
    // f_3 = u^3: the triple factor already sits on the axis, no shear
    Germ g = G("x^2 + y^2*z + u^3 + z^4");
    Analysis a = analyze(g);
    CaseDecision d = select_case(a);
    CHECK(d.label == "cD mu3 1-2");
    CHECK(d.v == Weight{1, {2, 1, 1, 1}});
    CHECK(d.pre.apply(a.germ) == d.prepared);
    CHECK(coefficient_part(d.prepared.phi, 0, 0).graded_part(3) == P("u^3"));
    certified(g);
}

TEST_CASE("lambda y u^2 with an absorbable cubic jumps to multiplicity four") {
    Germ g = G("x^2 + y^2*z + y*u^2 + z*u^2 - z^3 + u^6");
    Analysis a = analyze(g);
    CaseDecision d = select_case(a);
    CHECK(d.label == "cD mu3 2-3");
    CHECK(d.v == Weight{1, {2, 2, 1, 1}});
    // y -> y - z kills the cubic tail exactly
    CHECK(d.pre.apply(a.germ) == d.prepared);
    CHECK(coefficient_part(d.prepared.phi, 0, 0).graded_part(3).is_zero());
    Blowup bl = weighted_blowup(d.prepared, d.v);
    CHECK(bl.multiplicity == Rat(4));
    CHECK(bl.minimal);
}

TEST_CASE("lambda y u^2 with a non-absorbable cubic stays at multiplicity three") {
    Germ g = G("x^2 + y^2*z + y*u^2 + z^3");
    CaseDecision d = pick(g);
    CHECK(d.label == "cD mu3 2-2");
    CHECK(d.v == Weight{1, {2, 1, 1, 1}});
    certified(g);
}

TEST_CASE("cD main cases choose the staircase weight from mu") {
    CaseDecision d1 = pick(G("x^2 + y^2*z + z^4 + u^6"));
    CHECK(d1.label == "cD main 1");
    CHECK(d1.v == Weight{1, {3, 2, 2, 1}});

    CaseDecision d2 = pick(G("x^2 + y^2*z + y*u^4 + z^5 + u^6"));
    CHECK(d2.label == "cD main 2-1");
    CHECK(d2.v == Weight{1, {3, 2, 2, 1}});

    CaseDecision d3 = pick(G("x^2 + y^2*z + y*u^3 + z^6 + u^8"));
    CHECK(d3.label == "cD main 2-3");
    CHECK(d3.v == Weight{1, {3, 3, 1, 1}});

    // the symmetric weight fails here (z^4 weighs only 4 of the needed 8);
    // the staircase weight at mu_flat = 2l - 2 steps in
    CaseDecision d4 = pick(G("x^2 + y^2*z + y*u^4 + z^4"));
    CHECK(d4.label == "cD main 2-3x");
    CHECK(d4.v == Weight{1, {3, 2, 2, 1}});
    Blowup b4 = weighted_blowup(d4.prepared, d4.v);
    CHECK(b4.minimal);
}

TEST_CASE("full resolution of a mu3 cD germ stays certified") {
    Resolution r = certified(G("x^2 + y^2*z + z^3 + z*u^2 + u^3"));
    CHECK(r.blowup_count() >= 1);
}

TEST_CASE("cD4 cone point routes through the cubic case table") {
    Germ g = G("x^2 + y^3 + z^3 + u^3");
    Analysis a = analyze(g);
    REQUIRE(a.cls == SingularityClass::cD_like);
    Resolution r = certified(g);
    CHECK(r.blowup_count() >= 1);
}

// ---------------------------------------------------------------------------
// index two and four points

TEST_CASE("cAx/2 with a non-square leading form") {
    Germ g = G("x^2 + 2*x*z^3 + y^2 + z^4 + u^4", 2, {1, 0, 1, 1});
    CaseDecision d = pick(g);
    CHECK(d.label == "cAx/2 1");
    CHECK(d.v == Weight{2, {3, 2, 1, 1}});
    certified(g);
}

TEST_CASE("cAx/2 square leading form is absorbed into x or y by parity") {
    // f_4 = -(z^2 + u^2)^2, t = 2 even: shift y
    Germ g = G("x^2 + y^2 - z^4 - 2*z^2*u^2 - u^4 + z^6", 2, {1, 0, 1, 1});
    Analysis a = analyze(g);
    REQUIRE(a.cls == SingularityClass::cAx_2);
    CaseDecision d = select_case(a);
    CHECK(d.label == "cAx/2 2");
    CHECK(d.v == Weight{2, {3, 4, 1, 1}});
    CHECK(d.pre.apply(a.germ) == d.prepared);
    Blowup bl = weighted_blowup(d.prepared, d.v);
    CHECK(bl.minimal);
}

TEST_CASE("cAx/2 square over C but not over Q is an honest failure") {
    // f_4 = -2 (z^2 + u^2)^2: a square over C whose root needs sqrt(2)
    Germ g = G("x^2 + y^2 - 2*z^4 - 4*z^2*u^2 - 2*u^4 + u^6", 2, {1, 0, 1, 1});
    Analysis a = analyze(g);
    REQUIRE(a.cls == SingularityClass::cAx_2);
    CHECK_THROWS_AS(select_case(a), IrrationalChange);
}

TEST_CASE("cAx/4 with u^sigma present takes the plain parity weight") {
    Germ g = G("x^2 + y^2 + z^6 + u^3", 4, {1, 3, 1, 2});
    CaseDecision d = pick(g);
    CHECK(d.label == "cAx/4 1");
    CHECK(d.v == Weight{4, {5, 3, 1, 2}});
    certified(g);
}

// ---------------------------------------------------------------------------
// index two and three cD points

TEST_CASE("cD/2 case table") {
    CaseDecision d1 = pick(G("x^2 + y*z*u + y^4 + u^4 + z^3", 2, {1, 1, 0, 1}));
    CHECK(d1.label == "cD/2 1a");
    CHECK(d1.v == Weight{2, {3, 1, 2, 1}});

    CaseDecision d2 = pick(G("x^2 + y*z*u + y^6 + u^4 + z^3", 2, {1, 1, 0, 1}));
    CHECK(d2.label == "cD/2 1b");
    CHECK(d2.v == Weight{2, {3, 1, 2, 3}});

    CaseDecision d3 = pick(G("x^2 + y^2*z + y*u^3 + z^3 + z*u^4", 2, {1, 1, 0, 1}));
    CHECK(d3.label == "cD/2 2-1");
    CHECK(d3.v == Weight{2, {3, 1, 2, 1}});

    CaseDecision d4 = pick(G("x^2 + y^2*z + y*u^5 + z*u^2 + z^4", 2, {1, 1, 0, 1}));
    CHECK(d4.label == "cD/2 2-2");
    CHECK(d4.v == Weight{2, {3, 1, 2, 1}});

    CaseDecision d5 = pick(G("x^2 + y^2*z + y*u^5 + z^4 + u^8", 2, {1, 1, 0, 1}));
    CHECK(d5.label == "cD/2 2-3");
    CHECK(d5.v == Weight{2, {3, 1, 4, 1}});
}

TEST_CASE("cD/2 germs resolve with a clean audit") {
    certified(G("x^2 + y*z*u + y^4 + u^4 + z^3", 2, {1, 1, 0, 1}));
    certified(G("x^2 + y^2*z + y*u^5 + z^3 + z*u^4", 2, {1, 1, 0, 1}));
}

TEST_CASE("cD/3 case table") {
    CaseDecision d1 = pick(G("x^2 + y^3 + z^2*u + z*u^2", 3, {0, 2, 1, 1}));
    CHECK(d1.label == "cD/3 1");
    CHECK(d1.v == Weight{3, {3, 2, 4, 1}});

    CaseDecision d2 = pick(G("x^2 + y^3 + z^3 + u^6", 3, {0, 2, 1, 1}));
    CHECK(d2.label == "cD/3 2-1");
    CHECK(d2.v == Weight{3, {3, 2, 4, 1}});

    CaseDecision d3 = pick(G("x^2 + y^3 + z^3 + z*u^5", 3, {0, 2, 1, 1}));
    CHECK(d3.label == "cD/3 2-2");
    CHECK(d3.v == Weight{3, {3, 2, 4, 1}});

    CaseDecision d4 = pick(G("x^2 + y^3 + z^3 + z*u^8", 3, {0, 2, 1, 1}));
    CHECK(d4.label == "cD/3 2-3");
    CHECK(d4.v == Weight{3, {6, 5, 4, 1}});
}

TEST_CASE("cD/3 germs resolve with a clean audit") {
    certified(G("x^2 + y^3 + z^2*u + z*u^2", 3, {0, 2, 1, 1}));
    certified(G("x^2 + y^3 + z^3 + u^6", 3, {0, 2, 1, 1}));
}

// ---------------------------------------------------------------------------
// cE ladders

TEST_CASE("cE6 ladder picks the highest rung the tail clears") {
    CaseDecision d1 = pick(G("x^2 + y^3 + z^4 + z*u^3"));
    CHECK(d1.label == "cE6 1-1");
    CHECK(d1.v == Weight{1, {2, 2, 1, 1}});

    CaseDecision d2 = pick(G("x^2 + y^3 + z^4 + z^2*u^2 + u^8"));
    CHECK(d2.label == "cE6 2");
    CHECK(d2.v == Weight{1, {3, 2, 2, 1}});

    CaseDecision d3 = pick(G("x^2 + y^3 + z^4 + u^8"));
    CHECK(d3.label == "cE6 3");
    CHECK(d3.v == Weight{1, {4, 3, 2, 1}});

    CaseDecision d4 = pick(G("x^2 + y^3 + z^4 + u^12"));
    CHECK(d4.label == "cE6 4");
    CHECK(d4.v == Weight{1, {6, 4, 3, 1}});
}

TEST_CASE("cE6 square quartic is absorbed into x") {
    Germ g = G("x^2 + y^3 - z^4 + u^5");
    Analysis a = analyze(g);
    CaseDecision d = select_case(a);
    CHECK(d.label == "cE6 1-2");
    CHECK(d.v == Weight{1, {3, 2, 1, 1}});
    CHECK(d.pre.apply(a.germ) == d.prepared);
    Resolution r = certified(g);
    CHECK(r.blowup_count() >= 2);
}

TEST_CASE("cE6 quartic square over C but not over Q is an honest failure") {
    // h_4 = z^4 = (z^2)^2, but the shift needs sqrt(-1)
    CHECK_THROWS_AS(resolve(G("x^2 + y^3 + z^4 + u^5")), IrrationalChange);
}

TEST_CASE("cE7 and cE8 bottoms") {
    CaseDecision d7 = pick(G("x^2 + y^3 + y*z^3 + u^5"));
    CHECK(d7.label == "cE7 1");
    CHECK(d7.v == Weight{1, {3, 2, 1, 1}});

    CaseDecision d8 = pick(G("x^2 + y^3 + z^5 + z*u^4"));
    CHECK(d8.label == "cE8 1");
    CHECK(d8.v == Weight{1, {3, 2, 2, 1}});

    CaseDecision dl = pick(G("x^2 + y^3 + y*z^4 + u^7"));
    CHECK(dl.label == "cE-like 1");
    CHECK(dl.v == Weight{1, {3, 2, 2, 1}});
}

TEST_CASE("cE/2 routes by the weight of the quartic part") {
    CaseDecision d = pick(G("x^2 + y^3 + z^4 + z*u^3", 2, {1, 0, 1, 1}));
    CHECK(d.label == "cE/2 1");
    CHECK(d.v == Weight{2, {3, 2, 3, 1}});
    certified(G("x^2 + y^3 + z^4 + z*u^3", 2, {1, 0, 1, 1}));
}

// ---------------------------------------------------------------------------
// the audit rejects tampered trees

TEST_CASE("audit flags a falsified weight and discrepancy") {
    Resolution r = resolve(G("x*y + z^2 + u^2"));
    REQUIRE(audit(r).empty());
    r.nodes[0].decision.v.b[3] = 2;
    CHECK(!audit(r).empty());
}

TEST_CASE("audit flags a non-smooth leaf") {
    Resolution r = resolve(G("x*y + z^2 + u^4"));
    REQUIRE(audit(r).empty());
    REQUIRE(r.nodes.size() >= 2);
    r.nodes[1].leaf = true;
    CHECK(!audit(r).empty());
}

TEST_CASE("audit flags a tampered preparation log") {
    Germ g = G("x^2 + y^2*z + y*u^2 + z*u^2 - z^3 + z^4");
    Resolution r = resolve(g);
    REQUIRE(audit(r).empty());
    r.nodes[0].decision.pre.steps.clear();
    CHECK(!audit(r).empty());
}
