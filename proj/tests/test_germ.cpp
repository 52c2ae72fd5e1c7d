#include "feasres/germ.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace feasres;

namespace {

MPoly P(const std::string& s) { return mpoly_from_string(s); }

Germ G(const std::string& eq, long long r = 1,
       std::array<long long, 4> a = {0, 0, 0, 0}) {
    return Germ{P(eq), CyclicAction(r, a), false};
}

}  // namespace

TEST_CASE("class names round trip and ranks are ordered") {
    for (int i = 0; i <= static_cast<int>(SingularityClass::Unclassified); ++i) {
        auto c = static_cast<SingularityClass>(i);
        auto back = class_from_name(class_name(c));
        REQUIRE(back.has_value());
        CHECK(*back == c);
    }
    CHECK(!class_from_name("cD4").has_value());
    CHECK(class_rank(SingularityClass::Smooth) == 0);
    CHECK(class_rank(SingularityClass::cA) < class_rank(SingularityClass::cA_r));
    CHECK(class_rank(SingularityClass::cD) == class_rank(SingularityClass::cAx_2));
    CHECK(class_rank(SingularityClass::cE6) < class_rank(SingularityClass::cE_2));
    CHECK(class_rank(SingularityClass::cE_2) < class_rank(SingularityClass::cE7));
    CHECK(class_rank(SingularityClass::cE8) < class_rank(SingularityClass::Unclassified));
}

TEST_CASE("semi-invariance detection") {
    CyclicAction a(4, {1, 3, 1, 2});
    CHECK(semi_invariant_weight(P("x^2 + y^2 + z^4*u + u^5"), a) == 2);
    CHECK(!semi_invariant_weight(P("x^2 + y^2 + z^6 + u^6"), a).has_value());
    CHECK(!semi_invariant_weight(MPoly(), a).has_value());
}

TEST_CASE("change steps apply and refuse non-equivariant data") {
    Germ g = G("x*y + z^4 + u^6", 2, {1, 1, 1, 0});
    // equivariant shear of z by itself stays legal
    Germ g2 = apply_step(g, ChangeStep::substitute(2, P("z") + P("x") * Rat(3)));
    CHECK(semi_invariant_weight(g2.phi, g2.action) == 0);
    // u has residue 0, z has residue 1: mixing them breaks the action
    CHECK_THROWS_AS(apply_step(g, ChangeStep::substitute(3, P("u + z"))),
                    HypothesisViolated);
    CHECK_THROWS_AS(apply_step(g, ChangeStep::scale_equation(Rat(0))),
                    HypothesisViolated);
    CHECK_THROWS_AS(apply_step(g, ChangeStep::permute({0, 0, 2, 3})),
                    HypothesisViolated);

    Germ g3 = apply_step(g, ChangeStep::permute({1, 0, 3, 2}));
    CHECK(g3.phi == P("x*y + z^6 + u^4"));
    CHECK(g3.action.a == std::array<long long, 4>{1, 1, 0, 1});
}

TEST_CASE("linear changes split a rational hyperbolic quadric") {
    // x^2 - y^2 = (x+y)(x-y): send x -> x+y, y -> x-y
    std::array<std::array<Rat, kNumVars>, kNumVars> m{};
    m[0][0] = Rat(1); m[0][1] = Rat(1);
    m[1][0] = Rat(1); m[1][1] = Rat(-1);
    m[2][2] = Rat(1);
    m[3][3] = Rat(1);
    Germ g = G("x^2 - y^2 + z^2 + u^3");
    Germ h = apply_step(g, ChangeStep::linear(m));
    CHECK(h.phi == P("4*x*y + z^2 + u^3"));

    // singular matrix rejected
    std::array<std::array<Rat, kNumVars>, kNumVars> bad{};
    bad[0][0] = Rat(1); bad[1][0] = Rat(1); bad[2][2] = Rat(1); bad[3][3] = Rat(1);
    CHECK_THROWS_AS(apply_step(g, ChangeStep::linear(bad)), HypothesisViolated);

    // mixing residues 1 and 0 under a half point is refused
    Germ q = G("x^2 - y^2 + z^4 + u^4", 2, {1, 1, 1, 0});
    std::array<std::array<Rat, kNumVars>, kNumVars> mix{};
    mix[0][0] = Rat(1); mix[1][1] = Rat(1); mix[2][2] = Rat(1);
    mix[3][3] = Rat(1); mix[3][2] = Rat(1);
    CHECK_THROWS_AS(apply_step(q, ChangeStep::linear(mix)), HypothesisViolated);
}

TEST_CASE("change log replay composes steps in order") {
    // complete the square in x: the log must reproduce the collapse exactly
    MPoly q = P("z^2 + u^3");
    Germ g{P("x^2") + P("x") * q * Rat(2) + q * q + P("y^2"), CyclicAction(), false};
    ChangeLog log;
    log.push(ChangeStep::substitute(0, P("x") - q));
    log.push(ChangeStep::scale_equation(Rat(1, 1)));
    CHECK(log.apply(g).phi == P("x^2 + y^2"));

    // a permutation followed by a substitution targets the new labels
    ChangeLog log2;
    log2.push(ChangeStep::permute({0, 2, 1, 3}));
    log2.push(ChangeStep::substitute(1, P("y - u")));
    Germ h{P("x^2 + z^3 + y*u"), CyclicAction(), false};
    CHECK(log2.apply(h).phi == P("x^2 + y^3 - 3*y^2*u + 3*y*u^2 + z*u - u^3"));
}

TEST_CASE("random replay identity: applying a log twice from a snapshot agrees") {
    std::mt19937 rng(55511);
    std::uniform_int_distribution<int> ed(0, 4), cd(-5, 5), vd(0, 3), kd(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
        MPoly p;
        for (int t = 0; t < 5; ++t) {
            int c = cd(rng);
            if (c != 0) p.add_term({ed(rng), ed(rng), ed(rng), ed(rng)}, Rat(c));
        }
        Germ g{p, CyclicAction(), false};
        ChangeLog log;
        Germ stepwise = g;
        for (int s = 0; s < kd(rng); ++s) {
            int v = vd(rng);
            ChangeStep st = ChangeStep::substitute(
                v, MPoly::var(v) + MPoly::var(vd(rng)) * MPoly::var(vd(rng)) * Rat(cd(rng)));
            log.push(st);
            stepwise = apply_step(stepwise, st);
        }
        CHECK(log.apply(g) == stepwise);
    }
}

TEST_CASE("cA invariants") {
    auto inv = compute_invariants(SingularityClass::cA, G("x*y + z^5 + z*u^4 + u^7"));
    CHECK(inv.get("tau") == 5);
    CHECK(inv.get("tau_sharp") == 5);  // z*u^4
    auto inv2 = compute_invariants(SingularityClass::cA, G("x*y + z^2 + u^9"));
    CHECK(inv2.get("tau") == 2);
    CHECK(inv2.get("tau_sharp") == 9);
}

TEST_CASE("cA/r invariants count z powers in blocks of r") {
    Germ g = G("x*y + z^6 + u^4", 3, {1, 2, 1, 0});
    auto inv = compute_invariants(SingularityClass::cA_r, g);
    CHECK(inv.get("kappa") == 2);        // z^6 = (z^3)^2
    CHECK(inv.get("kappa_sharp") == 4);  // u^4
}

TEST_CASE("cD invariants on a normal form") {
    Germ g = G("x^2 + y^2*z + y*u^5 + z^4 + z*u^6 + u^9");
    auto inv = compute_invariants(SingularityClass::cD, g);
    CHECK(inv.get("l") == 5);
    CHECK(inv.get("mu") == 8);        // z^4, weight 2i+j
    CHECK(inv.get("mu_sharp") == 8);  // z*u^6
    CHECK(inv.get("mu_flat") == 8);   // min(8, 2*5-2)
    CHECK(inv.get("tau_sharp") == 7); // z*u^6
    CHECK(inv.get("rho_sharp") == 4); // z^4
    CHECK(inv.get("p") == 5);         // y*u^5 beats z*u^6 and u^9

    Germ g0 = G("x^2 + y^2*z + z^3 + z*u^4");
    auto inv0 = compute_invariants(SingularityClass::cD, g0);
    CHECK(inv0.get("l") == kInfinite);
    CHECK(inv0.get("mu_flat") == 6);  // z^3
    CHECK(invariant_str(inv0.get("l")) == "inf");
}

TEST_CASE("cAx/2 and cAx/4 invariants") {
    Germ g2 = G("x^2 + y^2 + z^6 + z^2*u^4 + u^8", 2, {1, 0, 1, 1});
    auto i2 = compute_invariants(SingularityClass::cAx_2, g2);
    CHECK(i2.get("tau") == 6);
    CHECK(i2.get("tau_prime") == 3);

    Germ g4 = G("x^2 + y^2 + z^4*u + u^5", 4, {1, 3, 1, 2});
    auto i4 = compute_invariants(SingularityClass::cAx_4, g4);
    CHECK(i4.get("sigma") == 3);  // z^4*u -> i+j = 2+1
}

TEST_CASE("cD/2 invariants distinguish the two normal forms") {
    Germ g1 = G("x^2 + y*z*u + y^6 + u^4 + z^3", 2, {1, 1, 0, 1});
    auto i1 = compute_invariants(SingularityClass::cD_2, g1);
    CHECK(i1.get("form") == 1);
    CHECK(i1.get("a") == 3);
    CHECK(i1.get("b") == 2);
    CHECK(i1.get("c") == 3);

    Germ g2 = G("x^2 + y^2*z + y*u^5 + z^3 + z*u^4", 2, {1, 1, 0, 1});
    auto i2 = compute_invariants(SingularityClass::cD_2, g2);
    CHECK(i2.get("form") == 2);
    CHECK(i2.get("l") == 2);
    CHECK(i2.get("sigma") == 3);       // min(z^3 -> 3, z*u^4 -> 1+2)
    CHECK(i2.get("sigma_flat") == 3);  // min(3, 2*2-1)
}

TEST_CASE("cD/3 form routing by the cubic factor structure") {
    auto f1 = compute_invariants(SingularityClass::cD_3,
                                 G("x^2 + y^3 + z^2*u + z*u^2", 3, {0, 2, 1, 1}));
    CHECK(f1.get("form") == 1);  // zu(z+u): squarefree
    auto f2 = compute_invariants(SingularityClass::cD_3,
                                 G("x^2 + y^3 + z*u^2 + u^9", 3, {0, 2, 1, 1}));
    CHECK(f2.get("form") == 2);
    auto f3 = compute_invariants(SingularityClass::cD_3,
                                 G("x^2 + y^3 + z^3 + y*u^4", 3, {0, 2, 1, 1}));
    CHECK(f3.get("form") == 3);
    CHECK(f3.get("u4_in_g") == 1);
    CHECK(f3.get("u6_in_h") == 0);
}

TEST_CASE("cE invariants") {
    auto inv = compute_invariants(SingularityClass::cE7,
                                  G("x^2 + y^3 + y*z^3 + z*u^7 + u^11"));
    CHECK(inv.get("tau_g") == 3);
    CHECK(inv.get("tau_h") == 8);
    CHECK(inv.get("tau_star") == 7);  // z*u^7 has i+j = 1
}

TEST_CASE("validate accepts normal forms and explains violations") {
    CHECK(validate(G("x*y + z^2 + u^3"), SingularityClass::cA).empty());
    CHECK(validate(G("x^2 + y^2*z + y*u^3 + z^5"), SingularityClass::cD).empty());
    CHECK(validate(G("x^2 + y^3 + z^4 + u^5"), SingularityClass::cE6).empty());
    CHECK(validate(G("x^2 + y^3 + y*z^3 + u^7"), SingularityClass::cE7).empty());
    CHECK(validate(G("x^2 + y^3 + z^5 + u^7"), SingularityClass::cE8).empty());
    CHECK(validate(G("x^2 + y^2 + z^3*u + u^4", 2, {1, 0, 1, 1}),
                   SingularityClass::cAx_2)
              .empty());
    CHECK(validate(G("x^2 + y^2 + z^4*u + u^5", 4, {1, 3, 1, 2}),
                   SingularityClass::cAx_4)
              .empty());
    CHECK(validate(G("x^2 + y^3 + z^3 + z*u^5", 3, {0, 2, 1, 1}),
                   SingularityClass::cD_3)
              .empty());
    CHECK(validate(G("x^2 + y^3 + z^3*u + u^6", 2, {1, 0, 1, 1}),
                   SingularityClass::cE_2)
              .empty());
    CHECK(validate(G("x + y^5"), SingularityClass::Smooth).empty());
    CHECK(validate(Germ{MPoly(), CyclicAction(5, {2, 3, 1, 0}), true},
                   SingularityClass::TerminalQuotient)
              .empty());

    // wrong shapes produce messages
    CHECK(!validate(G("x*y + z^2 + u^3"), SingularityClass::cD).empty());
    CHECK(!validate(G("x^2 + y^3"), SingularityClass::cE6).empty());
    // the old quarter-point equation with even u powers is not semi-invariant
    CHECK(!validate(G("x^2 + y^2 + z^6 + u^6", 4, {1, 3, 1, 2}),
                    SingularityClass::cAx_4)
               .empty());
    // non-isolated: singular along the z axis
    CHECK(!validate(G("x*y + u^2"), SingularityClass::cA).empty());
    // leading form of f must contain z^tau for the case split
    CHECK(!validate(G("x*y + z*u + u^2"), SingularityClass::cA).empty());
    // quotient point whose action fixes a curve
    CHECK(!validate(Germ{MPoly(), CyclicAction(4, {2, 0, 1, 0}), true},
                    SingularityClass::TerminalQuotient)
               .empty());
    // cE7 tag on a cE6 equation
    CHECK(!validate(G("x^2 + y^3 + z^4 + u^5"), SingularityClass::cE7).empty());
}

TEST_CASE("tangency condition: positive witness") {
    // s = z^2: g_v = -3 z^4, h_v = 2 z^6, and the cross term
    // h_{v+1} = -s g_{v+1} with g_{v+1} = z^3 u^2.
    Weight v{1, {3, 2, 1, 1}};
    MPoly s = P("z^2");
    MPoly phi = P("x^2 + y^3") - P("y") * s * s * Rat(3) + s * s * s * Rat(2) +
                P("y") * P("z^3*u^2") - s * P("z^3*u^2") + P("u^9");
    auto w = tangency_condition(phi, v);
    REQUIRE(w.holds);
    CHECK(w.s == s);
}

TEST_CASE("tangency condition: sign and cross-term failures") {
    Weight v{1, {3, 2, 1, 1}};
    // g_v = -3 z^4 but h_v = -2 z^6 needs s with s^2 = z^4, s^3 = -z^6: s = -z^2
    MPoly s = P("z^2");
    MPoly good = P("x^2 + y^3") - P("y") * s * s * Rat(3) - s * s * s * Rat(2) + P("u^9");
    auto w = tangency_condition(good, v);
    REQUIRE(w.holds);
    CHECK(w.s == -s);

    // wrong coefficient on h_v
    MPoly bad = P("x^2 + y^3 - 3*y*z^4 + 3*z^6 + u^9");
    CHECK(!tangency_condition(bad, v).holds);
    // g_v positive square: -g_v/3 = -z^4/3... no rational (or real) root
    MPoly bad2 = P("x^2 + y^3 + 3*y*z^4 + 2*z^6 + u^9");
    CHECK(!tangency_condition(bad2, v).holds);
    // cross term has the wrong sign: h_{v+1} = +s g_{v+1}
    MPoly bad3 = P("x^2 + y^3 - 3*y*z^4 + 2*z^6 + y*z^3*u^2 + z^5*u^2 + u^9");
    CHECK(!tangency_condition(bad3, v).holds);
    // g_v = 0 branch: holds only when h_v and h_{v+1} also vanish
    MPoly zero_branch = P("x^2 + y^3 + y*z^2*u^3 + u^12");
    CHECK(tangency_condition(zero_branch, v).holds);
    MPoly zero_bad = P("x^2 + y^3 + z^6 + u^12");
    CHECK(!tangency_condition(zero_bad, v).holds);
}

TEST_CASE("tangency condition on a weighted ladder entry") {
    // v_12 = (6,4,3,1): z^4 sits in h_v, which can never equal 2 s^3 alone
    Weight v12{1, {6, 4, 3, 1}};
    MPoly phi = P("x^2 + y^3 + z^4 + u^12");
    CHECK(!tangency_condition(phi, v12).holds);
    // but a crafted equation at the same weight does satisfy it: s = u^4
    MPoly s = P("u^4");
    MPoly phi2 = P("x^2 + y^3") - P("y") * s * s * Rat(3) + s * s * s * Rat(2) + P("z^5*u");
    auto w = tangency_condition(phi2, v12);
    REQUIRE(w.holds);
    CHECK(w.s == s);
}
