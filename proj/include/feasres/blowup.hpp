#pragma once

// Weighted blowups. Given a germ and a weight vector in its quotient
// lattice, this header descends the equation to every blowup chart with the
// induced cyclic action, computes the discrepancy of the exceptional
// divisor, decides (or honestly refuses to decide) irreducibility of the
// exceptional divisor, and locates the singular points on the charts by
// exact rational elimination.
//
// Everything here is exact. When a rational method cannot certify an
// answer the functions throw (IrrationalCenter, OracleEscape) rather than
// guess; the finite field scan in verify.hpp provides the independent
// cross-check that no singular point was missed.

#include "feasres/germ.hpp"
#include "feasres/univariate.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace feasres {

namespace detail {

// ---------------------------------------------------------------------------
// Multivariate helpers

// Leading term under the storage order (graded, compatible with products).
inline std::pair<Exp4, Rat> lead_term(const MPoly& f) {
    if (f.is_zero()) throw EngineError("lead_term: zero polynomial");
    auto it = f.terms().rbegin();
    return {it->first, it->second};
}

// Exact multivariate division: a / b when b divides a, nullopt otherwise.
inline std::optional<MPoly> try_divide_exact(const MPoly& a, const MPoly& b) {
    if (b.is_zero()) throw EngineError("try_divide_exact: division by zero");
    MPoly rem = a, q;
    auto [eb, cb] = lead_term(b);
    int guard = static_cast<int>(a.size()) * (b.degree() + 2) + 8;
    while (!rem.is_zero()) {
        if (--guard < 0) return std::nullopt;
        auto [er, cr] = lead_term(rem);
        Exp4 em;
        for (int i = 0; i < kNumVars; ++i) {
            if (er[i] < eb[i]) return std::nullopt;
            em[i] = er[i] - eb[i];
        }
        MPoly m = MPoly::monomial(em, cr / cb);
        q += m;
        rem -= m * b;
    }
    return q;
}

// Exact square root: s with s * s == q. Greedy leading-term recovery; the
// storage order is multiplicative, so if q is a square the terms of its
// root appear in strictly decreasing order.
inline std::optional<MPoly> poly_sqrt(const MPoly& q) {
    if (q.is_zero()) return MPoly();
    auto [e0, c0] = lead_term(q);
    Exp4 eh;
    for (int i = 0; i < kNumVars; ++i) {
        if (e0[i] % 2 != 0) return std::nullopt;
        eh[i] = e0[i] / 2;
    }
    auto ch = c0.kth_root(2);
    if (!ch) return std::nullopt;
    MPoly head = MPoly::monomial(eh, *ch);
    MPoly s = head;
    int guard = static_cast<int>(q.size()) + 2;
    while (true) {
        MPoly rem = q - s * s;
        if (rem.is_zero()) return s;
        if (--guard < 0) return std::nullopt;
        auto [er, cr] = lead_term(rem);
        Exp4 em;
        for (int i = 0; i < kNumVars; ++i) {
            if (er[i] < eh[i]) return std::nullopt;
            em[i] = er[i] - eh[i];
        }
        s += MPoly::monomial(em, cr / (Rat(2) * *ch));
    }
}

// Determinant of a small square rational matrix.
inline Rat detn(std::vector<std::vector<Rat>> m) {
    int n = static_cast<int>(m.size());
    Rat det(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (!m[r][c].is_zero()) { piv = r; break; }
        if (piv < 0) return Rat(0);
        if (piv != c) { std::swap(m[piv], m[c]); det = -det; }
        det *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (m[r][c].is_zero()) continue;
            Rat f = m[r][c] / m[c][c];
            for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

// f as a univariate in `var`; every other exponent must be zero.
inline UPoly to_upoly(const MPoly& f, int var) {
    std::vector<Rat> c(f.degree_in(var) + 1, Rat(0));
    for (auto& [e, co] : f.terms()) {
        for (int i = 0; i < kNumVars; ++i)
            if (i != var && e[i] != 0)
                throw EngineError("to_upoly: polynomial is not univariate");
        c[e[var]] = co;
    }
    return UPoly(std::move(c));
}

inline UPoly lagrange_interpolate(const std::vector<Rat>& xs,
                                  const std::vector<Rat>& ys) {
    UPoly acc;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        UPoly term = UPoly::constant(Rat(1));
        Rat den(1);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (i == j) continue;
            term = term * (UPoly::x() - UPoly::constant(xs[j]));
            den *= xs[i] - xs[j];
        }
        acc = acc + term * (ys[i] / den);
    }
    return acc;
}

// Resultant of two bivariate polynomials with respect to variable w,
// returned as a univariate polynomial in v. Computed by evaluating the
// fixed-size Sylvester determinant at enough points and interpolating,
// which keeps the formal w-degrees even where leading coefficients vanish.
inline UPoly resultant_wrt(const MPoly& f, const MPoly& g, int w, int v) {
    int m = f.degree_in(w), n = g.degree_in(w);
    if (m <= 0 || n <= 0) throw EngineError("resultant_wrt: degenerate input");
    int dv = f.degree_in(v) * n + g.degree_in(v) * m;

    auto coeffs_at = [&](const MPoly& p, int deg, const Rat& t) {
        std::vector<Rat> c(deg + 1, Rat(0));
        for (auto& [e, co] : p.terms()) {
            Rat val = co;
            for (int k = 0; k < e[v]; ++k) val *= t;
            c[e[w]] += val;
        }
        return c;
    };

    std::vector<Rat> xs, ys;
    long long t = 0;
    while (static_cast<int>(xs.size()) < dv + 1) {
        Rat tv(t);
        t = t > 0 ? -t : -t + 1;  // 0, 1, -1, 2, -2, ...
        auto fc = coeffs_at(f, m, tv);
        auto gc = coeffs_at(g, n, tv);
        std::vector<std::vector<Rat>> syl(m + n, std::vector<Rat>(m + n, Rat(0)));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k <= m; ++k) syl[i][i + m - k] = fc[k];
        for (int i = 0; i < m; ++i)
            for (int k = 0; k <= n; ++k) syl[n + i][i + n - k] = gc[k];
        xs.push_back(tv);
        ys.push_back(detn(std::move(syl)));
    }
    return lagrange_interpolate(xs, ys);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Irreducibility of the exceptional divisor

enum class Irreducibility { Yes, No, Unknown };

inline const char* irreducibility_str(Irreducibility i) {
    switch (i) {
        case Irreducibility::Yes: return "yes";
        case Irreducibility::No: return "no";
        case Irreducibility::Unknown: return "unknown";
    }
    throw EngineError("irreducibility_str: bad enum value");
}

namespace detail {

// Decides whether a weighted homogeneous form cuts out an irreducible
// reduced divisor over the complex numbers. Handles the shapes that occur
// as leading forms in the case table: forms linear or quadratic in some
// coordinate. Everything else is reported Unknown and surfaces as a warning
// in the verification layer, never as a silent pass.
inline Irreducibility form_irreducible(const MPoly& f0) {
    if (f0.is_zero()) return Irreducibility::No;

    // strip monomial content
    Exp4 emin = lead_term(f0).first;
    for (auto& [e, c] : f0.terms())
        for (int i = 0; i < kNumVars; ++i) emin[i] = std::min(emin[i], e[i]);
    MPoly f;
    for (auto& [e, c] : f0.terms()) {
        Exp4 e2;
        for (int i = 0; i < kNumVars; ++i) e2[i] = e[i] - emin[i];
        f.add_term(e2, c);
    }
    int content_deg = total_degree(emin);
    if (f.degree() == 0) {
        // pure monomial: a single coordinate hyperplane is irreducible,
        // anything else splits or is non-reduced
        int nvars = 0;
        for (int i = 0; i < kNumVars; ++i) nvars += emin[i] > 0;
        if (nvars == 1 && content_deg == 1) return Irreducibility::Yes;
        return Irreducibility::No;
    }
    if (content_deg > 0) return Irreducibility::No;

    // linear in some variable: f = A v + B
    for (int v = 0; v < kNumVars; ++v) {
        if (f.degree_in(v) != 1) continue;
        MPoly a, b;
        for (auto& [e, c] : f.terms()) {
            Exp4 e2 = e;
            if (e[v] == 1) {
                e2[v] = 0;
                a.add_term(e2, c);
            } else {
                b.add_term(e, c);
            }
        }
        if (b.is_zero()) return Irreducibility::No;  // f = A v
        if (a.degree() == 0) return Irreducibility::Yes;
        if (a.size() == 1) {
            // common factor of a monomial and B is a variable of both
            Exp4 ea = lead_term(a).first;
            for (int k = 0; k < kNumVars; ++k) {
                if (ea[k] == 0) continue;
                bool divides = true;
                for (auto& [e, c] : b.terms())
                    if (e[k] == 0) { divides = false; break; }
                if (divides) return Irreducibility::No;
            }
            return Irreducibility::Yes;
        }
        if (try_divide_exact(b, a)) return Irreducibility::No;
        return Irreducibility::Unknown;
    }

    // quadratic in some variable: f = A v^2 + B v + C splits over C exactly
    // when the discriminant is a square up to a constant and A divides the
    // matching root numerator.
    for (int v = 0; v < kNumVars; ++v) {
        if (f.degree_in(v) != 2) continue;
        MPoly a, b, c;
        for (auto& [e, co] : f.terms()) {
            Exp4 e2 = e;
            e2[v] = 0;
            if (e[v] == 2) a.add_term(e2, co);
            else if (e[v] == 1) b.add_term(e2, co);
            else c.add_term(e2, co);
        }
        MPoly disc = b * b - a * c * Rat(4);
        if (disc.is_zero()) return Irreducibility::No;  // repeated factor
        Rat lc = lead_term(disc).second;
        auto root = poly_sqrt(disc * (Rat(1) / lc));
        if (!root) return Irreducibility::Yes;
        auto lcr = lc.kth_root(2);
        if (lcr) {
            MPoly s = *root * *lcr;
            if (try_divide_exact(b - s, a) || try_divide_exact(b + s, a))
                return Irreducibility::No;
            return Irreducibility::Yes;
        }
        // sqrt(lc) irrational: B +- sqrt(lc) root is divisible by A exactly
        // when both rational components are
        if (try_divide_exact(b, a) && try_divide_exact(*root, a))
            return Irreducibility::No;
        return Irreducibility::Yes;
    }

    return Irreducibility::Unknown;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The blowup itself

struct BlowupChart {
    int chart = 0;
    Germ germ;
};

struct Blowup {
    Weight v;
    Rat multiplicity;          // weight of the equation divided out; 0 for
                               // quotient points
    Rat discrepancy;           // of the exceptional divisor over the germ
    bool minimal = false;      // discrepancy == 1 / index
    Irreducibility exceptional = Irreducibility::Unknown;
    std::vector<BlowupChart> charts;
};

// Weighted blowup of a hypersurface germ at the weight v, or the blowup of
// a bare quotient point (three coordinates, v.b[3] == 0). The weight must
// be a primitive vector of the quotient lattice.
inline Blowup weighted_blowup(const Germ& g, const Weight& v) {
    Blowup out;
    out.v = v;
    long long r = g.action.r;

    if (g.quotient_only) {
        if (v.b[3] != 0)
            throw HypothesisViolated("weighted_blowup: quotient point weight must have b4 = 0");
        std::vector<long long> a = {g.action.a[0], g.action.a[1], g.action.a[2]};
        std::vector<long long> b = {v.b[0], v.b[1], v.b[2]};
        for (auto bi : b)
            if (bi < 1) throw HypothesisViolated("weighted_blowup: nonpositive weight entry");
        if (!weight_in_lattice(3, r, a, v.r0, b))
            throw HypothesisViolated("weighted_blowup: weight outside the quotient lattice");
        if (!weight_primitive(3, r, a, v.r0, b))
            throw HypothesisViolated("weighted_blowup: weight is not primitive");
        out.multiplicity = Rat(0);
        out.discrepancy = Rat(b[0] + b[1] + b[2], v.r0) - Rat(1);
        out.minimal = out.discrepancy == Rat(1, r);
        out.exceptional = Irreducibility::Yes;  // a toric prime divisor
        for (int i = 0; i < 3; ++i) {
            ChartQuotient cq = chart_quotient(3, r, a, v.r0, b, i);
            Germ child;
            child.quotient_only = true;
            child.action = CyclicAction(
                cq.order, {cq.residues[0], cq.residues[1], cq.residues[2], 0});
            out.charts.push_back({i, std::move(child)});
        }
        return out;
    }

    std::vector<long long> a(g.action.a.begin(), g.action.a.end());
    std::vector<long long> b(v.b.begin(), v.b.end());
    for (auto bi : b)
        if (bi < 1) throw HypothesisViolated("weighted_blowup: nonpositive weight entry");
    if (!weight_in_lattice(kNumVars, r, a, v.r0, b))
        throw HypothesisViolated("weighted_blowup: weight outside the quotient lattice");
    if (!weight_primitive(kNumVars, r, a, v.r0, b))
        throw HypothesisViolated("weighted_blowup: weight is not primitive");
    if (g.phi.is_zero())
        throw HypothesisViolated("weighted_blowup: zero equation");

    Rat wt = weight_of(g.phi, v);
    out.multiplicity = wt;
    out.discrepancy = v.sum() - wt - Rat(1);
    out.minimal = out.discrepancy == Rat(1, r);
    out.exceptional = detail::form_irreducible(weight_part(g.phi, v, wt));

    for (int i = 0; i < kNumVars; ++i) {
        ChartImage ci = chart_transform(g.phi, v, i);
        ChartQuotient cq = chart_quotient(kNumVars, r, a, v.r0, b, i);
        Germ child;
        child.phi = std::move(ci.poly);
        child.action = CyclicAction(cq.order, {cq.residues[0], cq.residues[1],
                                               cq.residues[2], cq.residues[3]});
        out.charts.push_back({i, std::move(child)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Singular point location

struct SingularPoint {
    int chart = 0;
    std::array<Rat, kNumVars> point{};  // coordinates on the chart cover
    Germ germ;                          // germ recentred at the point
    bool origin = false;
    int pair_var = -1;  // >= 0: the conjugate pair pair_var = +-sqrt(pair_q),
    Rat pair_q;         // all other coordinates zero
};

namespace detail {

inline int rat_cmp(const Rat& a, const Rat& b) { return (a - b).sign(); }

inline bool point_less(const std::array<Rat, kNumVars>& a,
                       const std::array<Rat, kNumVars>& b) {
    for (int i = 0; i < kNumVars; ++i) {
        int c = rat_cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

inline constexpr int kSolveDepthCap = 64;

// Exact rational solutions of a polynomial system in up to four variables.
// Strategy, in order: discard satisfied equations and fail on contradicted
// ones; cancel matching leading terms between equations; eliminate
// variables that appear linearly with a constant coefficient; branch over
// the vanishing variable of a monomial equation or of monomial content;
// finish one-variable systems by gcd (certifying that no irrational
// solution remains, up to orbit images of rational ones); reduce
// two-variable systems by resultants; as a last resort eliminate a
// variable that appears linearly with a polynomial coefficient.
// Positive dimensional or otherwise intractable systems raise OracleEscape.
struct SystemSolver {
    std::vector<std::array<Rat, kNumVars>> solutions;

    // chart action; irrational points that are orbit images of rational
    // ones (or of each other, see PairPoint) are then not failures
    CyclicAction action;

    // a conjugate orbit {v = sqrt(q), v = -sqrt(q)}, all other coordinates
    // zero, under an order two multiplier on v: one rational point of the
    // quotient without a rational representative on the cover
    struct PairPoint {
        int var;
        Rat q;
    };
    std::vector<PairPoint> pairs;

    void run(std::vector<MPoly> sys) {
        for (int i = 0; i < kNumVars; ++i) {
            long long m = action.r;
            orbit_ord[i] = m / std::gcd(action.a[i] % m, m);
        }
        std::array<std::optional<Rat>, kNumVars> fixed{};
        recurse(std::move(sys), fixed, {}, 0);
        std::sort(solutions.begin(), solutions.end(), point_less);
        solutions.erase(std::unique(solutions.begin(), solutions.end()),
                        solutions.end());
        auto pair_less = [](const PairPoint& a, const PairPoint& b) {
            if (a.var != b.var) return a.var < b.var;
            return (a.q - b.q).sign() < 0;
        };
        auto pair_eq = [](const PairPoint& a, const PairPoint& b) {
            return a.var == b.var && a.q == b.q;
        };
        std::sort(pairs.begin(), pairs.end(), pair_less);
        pairs.erase(std::unique(pairs.begin(), pairs.end(), pair_eq),
                    pairs.end());
    }

private:
    struct Elim {
        int var;
        MPoly num;
        MPoly den;  // empty means 1; a vanishing denominator voids the point
    };
    using Elims = std::vector<Elim>;

    // order of the action multiplier on each coordinate
    std::array<long long, kNumVars> orbit_ord{1, 1, 1, 1};

    void emit(std::array<std::optional<Rat>, kNumVars> fixed, const Elims& elims) {
        // back-substitute eliminated variables in reverse order
        for (auto it = elims.rbegin(); it != elims.rend(); ++it) {
            std::array<Rat, kNumVars> pt{};
            for (int i = 0; i < kNumVars; ++i)
                if (fixed[i]) pt[i] = *fixed[i];
            if (it->den.is_zero()) {
                fixed[it->var] = it->num.eval(pt);
            } else {
                Rat dv = it->den.eval(pt);
                // the denominator-zero locus is covered by a separate branch
                if (dv.is_zero()) return;
                fixed[it->var] = it->num.eval(pt) / dv;
            }
        }
        std::array<Rat, kNumVars> pt{};
        for (int i = 0; i < kNumVars; ++i) {
            if (!fixed[i])
                throw OracleEscape("singular locus is not zero dimensional");
            pt[i] = *fixed[i];
        }
        solutions.push_back(pt);
    }

    void recurse(std::vector<MPoly> sys,
                 std::array<std::optional<Rat>, kNumVars> fixed,
                 Elims elims, int depth) {
        if (depth > kSolveDepthCap)
            throw OracleEscape("singular locus solver exceeded its depth bound");

        // clean
        std::vector<MPoly> live;
        for (auto& p : sys) {
            if (p.is_zero()) continue;
            if (p.degree() == 0) return;  // nonzero constant: no solutions
            live.push_back(p);
        }
        if (live.empty()) {
            emit(fixed, elims);
            return;
        }

        auto eliminated = [&](int v) {
            for (auto& el : elims)
                if (el.var == v) return true;
            return false;
        };

        // two equations with the same leading monomial reduce against each
        // other; the difference can expose a contradiction (or a simpler
        // equation) that no single-equation rule below would find
        for (std::size_t i = 0; i < live.size(); ++i)
            for (std::size_t j = 0; j < live.size(); ++j) {
                if (i == j) continue;
                auto [ei, ci] = lead_term(live[i]);
                auto [ej, cj] = lead_term(live[j]);
                if (ei != ej) continue;
                auto next = live;
                next[j] = live[j] - live[i] * (cj / ci);
                recurse(std::move(next), fixed, std::move(elims), depth + 1);
                return;
            }

        // linear elimination with a constant coefficient
        for (auto& p : live) {
            for (int v = 0; v < kNumVars; ++v) {
                if (fixed[v] || eliminated(v)) continue;
                if (p.degree_in(v) != 1) continue;
                MPoly a, b;
                bool pure = true;
                for (auto& [e, c] : p.terms()) {
                    if (e[v] == 1) {
                        Exp4 e2 = e;
                        e2[v] = 0;
                        a.add_term(e2, c);
                    } else {
                        b.add_term(e, c);
                    }
                }
                if (a.degree() != 0) pure = false;
                if (!pure) continue;
                Rat cv = lead_term(a).second;
                MPoly value = b * (Rat(-1) / cv);
                std::vector<MPoly> next;
                for (auto& q : live) next.push_back(q.substituted(v, value));
                elims.push_back({v, value, MPoly()});
                recurse(std::move(next), fixed, std::move(elims), depth + 1);
                return;
            }
        }

        // monomial branching
        for (auto& p : live) {
            if (p.size() != 1) continue;
            Exp4 e = lead_term(p).first;
            for (int v = 0; v < kNumVars; ++v) {
                if (e[v] == 0) continue;
                auto f2 = fixed;
                f2[v] = Rat(0);
                std::vector<MPoly> next;
                for (auto& q : live) next.push_back(q.substituted(v, MPoly()));
                recurse(std::move(next), f2, elims, depth + 1);
            }
            return;
        }
        // a polynomial with monomial content splits the solution set
        for (std::size_t pi = 0; pi < live.size(); ++pi) {
            Exp4 emin = lead_term(live[pi]).first;
            for (auto& [e, c] : live[pi].terms())
                for (int i = 0; i < kNumVars; ++i) emin[i] = std::min(emin[i], e[i]);
            if (total_degree(emin) == 0) continue;
            for (int v = 0; v < kNumVars; ++v) {
                if (emin[v] == 0) continue;
                auto f2 = fixed;
                f2[v] = Rat(0);
                std::vector<MPoly> next;
                for (auto& q : live) next.push_back(q.substituted(v, MPoly()));
                recurse(std::move(next), f2, elims, depth + 1);
            }
            MPoly stripped;
            for (auto& [e, c] : live[pi].terms()) {
                Exp4 e2;
                for (int i = 0; i < kNumVars; ++i) e2[i] = e[i] - emin[i];
                stripped.add_term(e2, c);
            }
            auto next = live;
            next[pi] = stripped;
            recurse(std::move(next), fixed, std::move(elims), depth + 1);
            return;
        }

        // which variables are still present
        std::vector<int> vars;
        for (int v = 0; v < kNumVars; ++v) {
            bool present = false;
            for (auto& p : live)
                if (p.degree_in(v) > 0) present = true;
            if (present) vars.push_back(v);
        }
        if (vars.empty()) throw EngineError("SystemSolver: constant system survived");

        if (vars.size() == 1) {
            solve_univariate(live, vars[0], fixed, elims);
            return;
        }
        if (vars.size() == 2) {
            solve_bivariate(live, vars[0], vars[1], fixed, elims, depth);
            return;
        }

        // linear elimination with a polynomial coefficient: p = a v + b
        // splits into the branch a = 0 (then also b = 0) and the branch
        // v = -b/a, where every other equation is cleared of v by powers of
        // a; points with a = 0 reconstructed on the second branch are
        // discarded at emission by their vanishing denominator
        for (std::size_t pi = 0; pi < live.size(); ++pi) {
            const MPoly& p = live[pi];
            for (int v = 0; v < kNumVars; ++v) {
                if (fixed[v] || eliminated(v)) continue;
                if (p.degree_in(v) != 1) continue;
                MPoly a, b;
                for (auto& [e, c] : p.terms()) {
                    if (e[v] == 1) {
                        Exp4 e2 = e;
                        e2[v] = 0;
                        a.add_term(e2, c);
                    } else {
                        b.add_term(e, c);
                    }
                }
                {
                    auto next = live;
                    next[pi] = a;
                    next.push_back(b);
                    recurse(std::move(next), fixed, elims, depth + 1);
                }
                MPoly bneg = b * Rat(-1);
                std::vector<MPoly> next;
                for (std::size_t qi = 0; qi < live.size(); ++qi) {
                    if (qi == pi) continue;
                    const MPoly& q = live[qi];
                    int d = q.degree_in(v);
                    MPoly acc, apow;
                    apow.add_term({0, 0, 0, 0}, Rat(1));
                    for (int k = d; k >= 0; --k) {
                        MPoly qk;
                        for (auto& [e, c] : q.terms())
                            if (e[v] == k) {
                                Exp4 e2 = e;
                                e2[v] = 0;
                                qk.add_term(e2, c);
                            }
                        acc = acc * bneg + qk * apow;
                        if (k > 0) apow = apow * a;
                    }
                    next.push_back(std::move(acc));
                }
                elims.push_back({v, bneg, a});
                recurse(std::move(next), fixed, std::move(elims), depth + 1);
                return;
            }
        }
        throw OracleEscape("singular locus solver has no applicable elimination");
    }

    void solve_univariate(const std::vector<MPoly>& live, int v,
                          const std::array<std::optional<Rat>, kNumVars>& fixed,
                          const Elims& elims) {
        UPoly g;
        for (auto& p : live) g = ugcd(g, to_upoly(p, v));
        if (g.is_zero()) throw EngineError("SystemSolver: zero gcd");
        if (g.degree() == 0) return;
        auto roots = rational_roots(g);
        // radical degree counts every complex solution once
        UPoly rad = udiv_exact(g, ugcd(g, g.derivative()));
        if (static_cast<int>(roots.size()) < rad.degree())
            admit_irrational(rad, roots, v, fixed, elims);
        for (auto& [root, mult] : roots) {
            auto f2 = fixed;
            f2[v] = root;
            emit(f2, elims);
        }
    }

    // Irrational roots in v are admissible in exactly two situations, both
    // requiring every other coordinate of the candidate points to vanish so
    // that a group element moving only the v coordinate maps point to
    // point: the root is an orbit image of a rational root (the orbit of
    // rho consists of the roots of t^d - rho^d, d the order of the
    // multiplier on v), or the roots pair up as conjugate orbits
    // {+-sqrt(q)} under a multiplier of order two, which are rational
    // points of the quotient and get reported as PairPoints. Anything
    // else is a hard stop.
    void admit_irrational(const UPoly& rad,
                          const std::vector<std::pair<Rat, int>>& roots, int v,
                          const std::array<std::optional<Rat>, kNumVars>& fixed,
                          const Elims& elims) {
        auto refuse = [] {
            throw IrrationalCenter(
                "singular point with irrational coordinates on a chart");
        };
        long long d = orbit_ord[v];
        if (d <= 1) refuse();

        // propagate known zeros through the elimination chain in
        // back-substitution order; a voided denominator never emits, so
        // counting its variable as zero here is harmless
        std::array<bool, kNumVars> zero{};
        for (int i = 0; i < kNumVars; ++i)
            zero[i] = fixed[i] && fixed[i]->is_zero();
        for (auto it = elims.rbegin(); it != elims.rend(); ++it) {
            MPoly num = it->num;
            for (int j = 0; j < kNumVars; ++j)
                if (zero[j]) num = num.substituted(j, MPoly());
            if (num.is_zero()) zero[it->var] = true;
        }
        for (int i = 0; i < kNumVars; ++i)
            if (i != v && !zero[i]) refuse();

        // strip the orbits of the rational roots
        UPoly rem = rad;
        for (auto& [rho, mult] : roots) {
            std::vector<Rat> cc(static_cast<std::size_t>(d) + 1, Rat(0));
            Rat rd(1);
            for (long long k = 0; k < d; ++k) rd *= rho;
            cc[0] = -rd;
            cc[static_cast<std::size_t>(d)] = Rat(1);
            UPoly orbit(std::move(cc));
            UPoly common = ugcd(rem, orbit);
            if (common.degree() > 0) rem = udiv_exact(rem, common);
        }
        if (rem.degree() == 0) return;

        if (action.r != 2 || action.a[v] % 2 != 1) refuse();
        for (auto& part : ufactor(rem).factors) {
            if (part.factor.degree() != 2 || !part.factor.coeff(1).is_zero())
                refuse();
            pairs.push_back({v, -part.factor.coeff(0) / part.factor.coeff(2)});
        }
    }

    void solve_bivariate(const std::vector<MPoly>& live, int va, int vb,
                         const std::array<std::optional<Rat>, kNumVars>& fixed,
                         const Elims& elims, int depth) {
        // eliminate vb: pure-va equations join the certificate directly,
        // mixed ones through pairwise resultants
        UPoly cert;
        std::vector<const MPoly*> mixed;
        for (auto& p : live) {
            if (p.degree_in(vb) > 0) mixed.push_back(&p);
            else cert = ugcd(cert, to_upoly(p, va));
        }
        for (std::size_t i = 0; i < mixed.size(); ++i)
            for (std::size_t j = i + 1; j < mixed.size(); ++j)
                cert = ugcd(cert, resultant_wrt(*mixed[i], *mixed[j], vb, va));
        if (mixed.size() == 1 && cert.is_zero())
            throw OracleEscape("singular locus solver: underdetermined pair");
        if (cert.is_zero())
            throw OracleEscape("singular locus has a positive dimensional part");
        if (cert.degree() == 0) return;
        for (auto& [root, mult] : rational_roots(cert)) {
            auto f2 = fixed;
            f2[va] = root;
            std::vector<MPoly> next;
            for (auto& p : live)
                next.push_back(p.substituted(va, MPoly() + MPoly::monomial({0, 0, 0, 0}, root)));
            recurse(std::move(next), f2, elims, depth + 1);
        }
        // irrational roots of the certificate may be spurious projections;
        // the finite field verification pass is responsible for flagging any
        // that extend to true singular points
    }
};

// stabilizer order of a point under the action: elements fixing every
// nonzero coordinate
inline long long stabilizer_order(const CyclicAction& act,
                                  const std::array<Rat, kNumVars>& pt) {
    long long m = act.r;
    long long step = 1;
    for (int j = 0; j < kNumVars; ++j) {
        if (pt[j].is_zero()) continue;
        long long g = std::gcd(act.a[j], m);
        step = std::lcm(step, m / g);
    }
    return m / step;
}

// The germ of the quotient at a non-origin point: translate on the cover
// and keep the residual action of the stabilizer.
inline Germ germ_at_point(const Germ& g, const std::array<Rat, kNumVars>& pt) {
    long long d = stabilizer_order(g.action, pt);
    MPoly phi = g.phi;
    for (int j = 0; j < kNumVars; ++j)
        if (!pt[j].is_zero())
            phi = phi.substituted(j, MPoly::var(j) + MPoly::monomial({0, 0, 0, 0}, pt[j]));
    std::array<long long, kNumVars> res{};
    if (d > 1)
        for (int j = 0; j < kNumVars; ++j) res[j] = g.action.a[j] % d;
    Germ out;
    out.phi = std::move(phi);
    out.action = CyclicAction(d == 0 ? 1 : d, res);
    return out;
}

// Rational orbit images of a cover point: group elements whose multiplier
// on every nonzero coordinate is +-1.
inline std::vector<std::array<Rat, kNumVars>> rational_orbit(
    const CyclicAction& act, const std::array<Rat, kNumVars>& pt) {
    std::vector<std::array<Rat, kNumVars>> out = {pt};
    long long m = act.r;
    for (long long k = 1; k < m; ++k) {
        std::array<Rat, kNumVars> img = pt;
        bool ok = true;
        for (int j = 0; j < kNumVars && ok; ++j) {
            if (pt[j].is_zero()) continue;
            long long t = k * act.a[j] % m;
            if (t == 0) continue;
            if (2 * t == m) img[j] = -img[j];
            else ok = false;
        }
        if (ok) out.push_back(img);
    }
    std::sort(out.begin(), out.end(), point_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// The germ of the quotient at the conjugate orbit {v = +-sqrt(q)} of an
// order two action odd on v, q a rational non-square and every other
// coordinate zero. The orbit is one rational point of the quotient: near
// it v is a unit, so the invariants T = v^2 and W_j = v w_j (w_j the other
// odd coordinates) together with the even coordinates form a local chart,
// every invariant monomial of the equation is Laurent in T with the W and
// even exponents unchanged, and clearing T denominators by the unit
// T = q + X (X the recentred coordinate in the v slot) leaves a polynomial
// germ with no residual action.
inline Germ germ_at_conjugate_pair(const Germ& g, int v, const Rat& q) {
    if (g.action.r != 2 || g.action.a[v] % 2 != 1)
        throw EngineError(
            "germ_at_conjugate_pair: needs an order two action odd on v");
    if (q.is_zero() || q.kth_root(2))
        throw EngineError("germ_at_conjugate_pair: q must be a non-square");

    auto odd_weight = [&](const Exp4& e) {
        long long b = 0;
        for (int j = 0; j < kNumVars; ++j)
            if (j != v && g.action.a[j] % 2 == 1) b += e[j];
        return b;
    };
    // a semi-invariant equation of odd residue is replaced by v * phi,
    // an invariant with the same zero locus where v is a unit
    long long parity = -1, tmin = 0;
    for (auto& [e, c] : g.phi.terms()) {
        long long p = (e[v] + odd_weight(e)) % 2;
        if (parity < 0) parity = p;
        else if (p != parity)
            throw EngineError("germ_at_conjugate_pair: mixed parity equation");
    }
    for (auto& [e, c] : g.phi.terms())
        tmin = std::min(tmin, (e[v] + parity - odd_weight(e)) / 2);

    MPoly base = MPoly::var(v) + MPoly(q);
    MPoly out;
    for (auto& [e, c] : g.phi.terms()) {
        long long t = (e[v] + parity - odd_weight(e)) / 2 - tmin;
        Exp4 e2 = e;
        e2[v] = 0;
        MPoly term = MPoly::monomial(e2, c);
        for (long long k = 0; k < t; ++k) term = term * base;
        out += term;
    }
    Germ child;
    child.phi = std::move(out);
    child.action = CyclicAction(1, {0, 0, 0, 0});
    return child;
}

// Quotient singularities away from the chart origin sit where the action
// has fixed points on the hypersurface. Isolated ones lie on coordinate
// axes; a fixed curve inside the hypersurface would not be terminal, so
// any sign of one is a hard stop rather than a wrong answer.
inline void append_axis_quotient_points(
    const Germ& g, std::vector<std::array<Rat, kNumVars>>& pts) {
    long long m = g.action.r;
    if (m <= 1) return;
    for (int k = 0; k < kNumVars; ++k) {
        long long d = std::gcd(g.action.a[k], m);
        MPoly restr = g.phi;
        for (int j = 0; j < kNumVars; ++j)
            if (j != k) restr = restr.substituted(j, MPoly());
        if (restr.is_zero()) {
            if (d > 1)
                throw OracleEscape("quotient singularities along a coordinate axis");
            continue;
        }
        if (d <= 1) continue;
        for (auto& [root, mult] : rational_roots(to_upoly(restr, k))) {
            if (root.is_zero()) continue;
            std::array<Rat, kNumVars> pt{};
            pt[k] = root;
            pts.push_back(pt);
        }
    }
    // fixed planes meeting the hypersurface in anything but coordinate axes
    for (int c = 0; c < kNumVars; ++c)
        for (int d2 = c + 1; d2 < kNumVars; ++d2) {
            long long h = std::gcd(std::gcd(g.action.a[c], g.action.a[d2]), m);
            if (h <= 1) continue;
            MPoly restr = g.phi;
            for (int j = 0; j < kNumVars; ++j)
                if (j != c && j != d2) restr = restr.substituted(j, MPoly());
            if (restr.is_zero())
                throw OracleEscape("quotient singularities along a fixed plane");
            Exp4 emin = lead_term(restr).first;
            for (auto& [e, co] : restr.terms())
                for (int i = 0; i < kNumVars; ++i) emin[i] = std::min(emin[i], e[i]);
            MPoly stripped;
            for (auto& [e, co] : restr.terms()) {
                Exp4 e2;
                for (int i = 0; i < kNumVars; ++i) e2[i] = e[i] - emin[i];
                stripped.add_term(e2, co);
            }
            if (stripped.degree() > 0)
                throw OracleEscape("quotient singularities along a fixed curve");
        }
}

}  // namespace detail

// All singular points of the blown up space, reported once each: a point
// visible on several charts belongs to the lowest chart index. Chart
// origins are always reported (their germs may still be smooth; callers
// classify and filter). Non-origin points carry the recentred germ with
// the residual stabilizer action.
inline std::vector<SingularPoint> locate_singularities(const Blowup& bl) {
    std::vector<SingularPoint> out;

    for (auto& ch : bl.charts) {
        const Germ& g = ch.germ;

        if (g.quotient_only) {
            if (g.action.r > 1) {
                SingularPoint sp;
                sp.chart = ch.chart;
                sp.germ = g;
                sp.origin = true;
                out.push_back(sp);
            }
            continue;
        }

        // the chart origin
        bool origin_on_surface = g.phi.coeff({0, 0, 0, 0}).is_zero();
        if (origin_on_surface && (g.phi.order() >= 2 || g.action.r > 1)) {
            SingularPoint sp;
            sp.chart = ch.chart;
            sp.germ = g;
            sp.origin = true;
            out.push_back(sp);
        }

        // singular points of the cover hypersurface on the exceptional
        // divisor {x_chart = 0}: the blowup is an isomorphism elsewhere, so
        // any singular point off it is an artifact of the polynomial
        // representative, not part of the germ
        std::vector<MPoly> sys = {g.phi, MPoly::var(ch.chart)};
        for (int i = 0; i < kNumVars; ++i) sys.push_back(g.phi.derivative(i));
        detail::SystemSolver solver;
        solver.action = g.action;
        solver.run(std::move(sys));
        std::vector<std::array<Rat, kNumVars>> pts = std::move(solver.solutions);

        // isolated quotient points of the action on the hypersurface
        detail::append_axis_quotient_points(g, pts);

        // dedup: orbit representatives, drop the origin (already handled)
        // and points visible on an earlier chart
        std::vector<std::array<Rat, kNumVars>> keep;
        for (auto& p : pts) {
            bool zero = true;
            for (auto& c : p) zero = zero && c.is_zero();
            if (zero) continue;
            if (!p[ch.chart].is_zero()) continue;  // off the exceptional divisor
            bool earlier = false;
            for (int j = 0; j < ch.chart; ++j) earlier = earlier || !p[j].is_zero();
            if (earlier) continue;
            keep.push_back(detail::rational_orbit(g.action, p).front());
        }
        std::sort(keep.begin(), keep.end(), detail::point_less);
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

        for (auto& p : keep) {
            SingularPoint sp;
            sp.chart = ch.chart;
            sp.point = p;
            sp.germ = detail::germ_at_point(g, p);
            sp.origin = false;
            out.push_back(sp);
        }

        // conjugate pairs, with the same chart precedence rule
        for (auto& pp : solver.pairs) {
            if (pp.var < ch.chart) continue;
            SingularPoint sp;
            sp.chart = ch.chart;
            sp.germ = detail::germ_at_conjugate_pair(g, pp.var, pp.q);
            sp.origin = false;
            sp.pair_var = pp.var;
            sp.pair_q = pp.q;
            out.push_back(sp);
        }
    }
    return out;
}

}  // namespace feasres
