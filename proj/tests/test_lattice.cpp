#include "feasres/lattice.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace feasres;

TEST_CASE("weight membership in quotient lattices") {
    // trivial ambient: integral weights only
    CHECK(weight_in_lattice(4, 1, {0, 0, 0, 0}, 1, {2, 1, 1, 1}));
    CHECK(!weight_in_lattice(4, 1, {0, 0, 0, 0}, 2, {1, 1, 1, 1}));
    // quarter point of the cAx/4 action
    CHECK(weight_in_lattice(4, 4, {1, 3, 1, 2}, 4, {1, 3, 1, 2}));
    CHECK(!weight_in_lattice(4, 4, {1, 3, 1, 2}, 4, {3, 1, 1, 2}));
    CHECK(weight_in_lattice(4, 4, {1, 3, 1, 2}, 4, {5, 3, 1, 2}));
    CHECK(!weight_in_lattice(4, 4, {1, 3, 1, 2}, 4, {1, 3, 2, 2}));
}

TEST_CASE("weight primitivity") {
    CHECK(weight_primitive(4, 1, {0, 0, 0, 0}, 1, {2, 1, 1, 1}));
    CHECK(!weight_primitive(4, 1, {0, 0, 0, 0}, 1, {2, 4, 2, 2}));
    CHECK(weight_primitive(4, 2, {1, 1, 0, 1}, 2, {3, 1, 2, 1}));
    CHECK(!weight_primitive(4, 2, {1, 1, 0, 1}, 2, {2, 2, 4, 2}));
}

TEST_CASE("charts of the (2,1,1,1) blowup of smooth space") {
    // U_1 is a half point, the other charts are smooth
    auto q0 = chart_quotient(4, 1, {0, 0, 0, 0}, 1, {2, 1, 1, 1}, 0);
    CHECK(q0.order == 2);
    CHECK(q0.residues == std::vector<long long>{1, 1, 1, 1});
    for (int i = 1; i < 4; ++i) {
        auto qi = chart_quotient(4, 1, {0, 0, 0, 0}, 1, {2, 1, 1, 1}, i);
        CHECK(qi.order == 1);
    }
}

TEST_CASE("charts of the Kawamata blowup of a terminal quotient") {
    // C^3 / (1/5)(2,3,1), subdivision at the age one point itself
    auto q0 = chart_quotient(3, 5, {2, 3, 1}, 5, {2, 3, 1}, 0);
    CHECK(q0.order == 2);
    auto f0 = terminal_quotient_form(2, {q0.residues[0], q0.residues[1], q0.residues[2]});
    REQUIRE(f0.has_value());
    CHECK(f0->s == 1);

    auto q1 = chart_quotient(3, 5, {2, 3, 1}, 5, {2, 3, 1}, 1);
    CHECK(q1.order == 3);
    auto f1 = terminal_quotient_form(3, {q1.residues[0], q1.residues[1], q1.residues[2]});
    REQUIRE(f1.has_value());
    CHECK(f1->s == 1);

    auto q2 = chart_quotient(3, 5, {2, 3, 1}, 5, {2, 3, 1}, 2);
    CHECK(q2.order == 1);
}

TEST_CASE("chart of the cA/r blowup keeps the u chart of full index") {
    // ambient (1/3)(1,2,1,0), weight (1/3)(1,2,1,3): the u chart carries
    // the residual index 3 group acting with the original residues pattern
    auto q3 = chart_quotient(4, 3, {1, 2, 1, 0}, 3, {1, 2, 1, 3}, 3);
    CHECK(q3.order == 3);
    // the residues must act trivially on an invariant monomial such as xy
    CHECK((q3.residues[0] + q3.residues[1]) % 3 == 0);
    CHECK(q3.residues[3] == 0);  // the exceptional coordinate is invariant
}

TEST_CASE("terminal quotient normal form") {
    auto f = terminal_quotient_form(7, {3, 4, 1});
    REQUIRE(f.has_value());
    CHECK(f->s == 3);
    // (1/7)(6,1,5): multiply by 3 -> (4,3,1): s = 3
    auto g = terminal_quotient_form(7, {6, 1, 5});
    REQUIRE(g.has_value());
    CHECK(g->s == 3);
    // non-terminal: a zero residue fixes a curve
    CHECK(!terminal_quotient_form(4, {2, 0, 1}).has_value());
    // (1/4)(2,2,1) has residues not coprime to the order
    CHECK(!terminal_quotient_form(4, {2, 2, 1}).has_value());
    // trivial group
    auto t = terminal_quotient_form(1, {0, 0, 0});
    REQUIRE(t.has_value());
    CHECK(t->s == 0);
}
