#pragma once

// Singularity germs: a hypersurface equation in C^4 together with a cyclic
// group action (or a bare three-dimensional quotient point), the class
// lattice of terminal three-fold singularities, replayable coordinate
// changes, and the named integer invariants that drive the case analysis.

#include "feasres/binary_form.hpp"
#include "feasres/errors.hpp"
#include "feasres/lattice.hpp"
#include "feasres/mpoly.hpp"

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace feasres {

inline constexpr long long kInfinite = std::numeric_limits<long long>::max();

inline std::string invariant_str(long long v) {
    return v == kInfinite ? "inf" : std::to_string(v);
}

// ---------------------------------------------------------------------------
// Class lattice

enum class SingularityClass {
    Smooth,
    TerminalQuotient,
    cA,
    cA_r,
    cD,
    cD_like,
    cAx_2,
    cAx_4,
    cD_2,
    cD_3,
    cE6,
    cE7,
    cE8,
    cE_2,
    cE_like,
    Unclassified,
};

inline const char* class_name(SingularityClass c) {
    switch (c) {
        case SingularityClass::Smooth: return "smooth";
        case SingularityClass::TerminalQuotient: return "quotient";
        case SingularityClass::cA: return "cA";
        case SingularityClass::cA_r: return "cA/r";
        case SingularityClass::cD: return "cD";
        case SingularityClass::cD_like: return "cD-like";
        case SingularityClass::cAx_2: return "cAx/2";
        case SingularityClass::cAx_4: return "cAx/4";
        case SingularityClass::cD_2: return "cD/2";
        case SingularityClass::cD_3: return "cD/3";
        case SingularityClass::cE6: return "cE6";
        case SingularityClass::cE7: return "cE7";
        case SingularityClass::cE8: return "cE8";
        case SingularityClass::cE_2: return "cE/2";
        case SingularityClass::cE_like: return "cE-like";
        case SingularityClass::Unclassified: return "unclassified";
    }
    throw EngineError("class_name: bad enum value");
}

inline std::optional<SingularityClass> class_from_name(const std::string& s) {
    static const std::array<SingularityClass, 16> all = {
        SingularityClass::Smooth,   SingularityClass::TerminalQuotient,
        SingularityClass::cA,       SingularityClass::cA_r,
        SingularityClass::cD,       SingularityClass::cD_like,
        SingularityClass::cAx_2,    SingularityClass::cAx_4,
        SingularityClass::cD_2,     SingularityClass::cD_3,
        SingularityClass::cE6,      SingularityClass::cE7,
        SingularityClass::cE8,      SingularityClass::cE_2,
        SingularityClass::cE_like,  SingularityClass::Unclassified,
    };
    for (auto c : all)
        if (s == class_name(c)) return c;
    return std::nullopt;
}

// Position in the resolution hierarchy. Every blowup child must sit at a
// rank no larger than its parent, except along the few sanctioned edges
// whitelisted in the audit.
inline int class_rank(SingularityClass c) {
    switch (c) {
        case SingularityClass::Smooth: return 0;
        case SingularityClass::TerminalQuotient: return 1;
        case SingularityClass::cA: return 2;
        case SingularityClass::cA_r: return 3;
        case SingularityClass::cD:
        case SingularityClass::cD_like:
        case SingularityClass::cAx_2: return 4;
        case SingularityClass::cAx_4:
        case SingularityClass::cD_2:
        case SingularityClass::cD_3: return 5;
        case SingularityClass::cE6: return 6;
        case SingularityClass::cE_2: return 7;
        case SingularityClass::cE7: return 8;
        case SingularityClass::cE8:
        case SingularityClass::cE_like: return 9;
        case SingularityClass::Unclassified: return 10;
    }
    throw EngineError("class_rank: bad enum value");
}

// ---------------------------------------------------------------------------
// Germs

// A germ is either a hypersurface (phi = 0) in C^4 / action, or, when
// quotient_only is set, the bare quotient point C^3 / (1/r)(a1,a2,a3) with
// phi = 0 and a4 = 0.
struct Germ {
    MPoly phi;
    CyclicAction action;
    bool quotient_only = false;

    long long index() const { return action.r; }

    bool operator==(const Germ& o) const = default;

    std::string str() const {
        std::string s = quotient_only ? "quotient point" : phi.str();
        if (action.r > 1) s += " / " + action.str();
        return s;
    }
};

// The action weight shared by every monomial of a semi-invariant, or nullopt
// if the monomials disagree (or phi is zero).
inline std::optional<long long> semi_invariant_weight(const MPoly& phi,
                                                      const CyclicAction& act) {
    if (phi.is_zero()) return std::nullopt;
    long long w = -1;
    for (auto& [e, c] : phi.terms()) {
        long long we = act.weight_of_exp(e);
        if (w < 0) w = we;
        else if (we != w) return std::nullopt;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Replayable coordinate changes

struct ChangeStep {
    enum class Kind { Substitute, ScaleEquation, Permute, Linear, Regenerator };

    Kind kind = Kind::Substitute;
    int var = 0;                    // Substitute target
    MPoly value;                    // Substitute replacement, in new coordinates
    Rat factor = Rat(1);            // ScaleEquation multiplier
    long long unit = 1;             // Regenerator multiplier, coprime to the order
    std::array<int, kNumVars> perm{0, 1, 2, 3};  // new index -> old index
    // Linear: old coordinate i = sum_j mat[i][j] * new coordinate j
    std::array<std::array<Rat, kNumVars>, kNumVars> mat;

    static ChangeStep substitute(int var, MPoly value) {
        ChangeStep s;
        s.kind = Kind::Substitute;
        s.var = var;
        s.value = std::move(value);
        return s;
    }
    static ChangeStep scale_equation(const Rat& f) {
        ChangeStep s;
        s.kind = Kind::ScaleEquation;
        s.factor = f;
        return s;
    }
    static ChangeStep permute(const std::array<int, kNumVars>& p) {
        ChangeStep s;
        s.kind = Kind::Permute;
        s.perm = p;
        return s;
    }
    static ChangeStep linear(const std::array<std::array<Rat, kNumVars>, kNumVars>& m) {
        ChangeStep s;
        s.kind = Kind::Linear;
        s.mat = m;
        return s;
    }
    // Replaces the group generator by its k-th power: the same group, with
    // every residue multiplied by k. The equation is untouched.
    static ChangeStep regenerator(long long k) {
        ChangeStep s;
        s.kind = Kind::Regenerator;
        s.unit = k;
        return s;
    }

    std::string str() const {
        switch (kind) {
            case Kind::Substitute:
                return std::string(kVarNames[var]) + " -> " + value.str();
            case Kind::ScaleEquation:
                return "equation * " + factor.str();
            case Kind::Permute: {
                std::string s = "relabel (";
                for (int i = 0; i < kNumVars; ++i)
                    s += std::string(kVarNames[perm[i]]) + (i + 1 < kNumVars ? "," : ")");
                return s;
            }
            case Kind::Linear: {
                std::string s = "linear [";
                for (int i = 0; i < kNumVars; ++i) {
                    if (i) s += "; ";
                    s += std::string(kVarNames[i]) + " ->";
                    for (int j = 0; j < kNumVars; ++j)
                        if (!mat[i][j].is_zero())
                            s += " + " + mat[i][j].str() + "*" + kVarNames[j];
                }
                return s + "]";
            }
            case Kind::Regenerator:
                return "generator ^ " + std::to_string(unit);
        }
        throw EngineError("ChangeStep::str: bad kind");
    }
};

namespace detail {

inline Rat det4(const std::array<std::array<Rat, kNumVars>, kNumVars>& m) {
    auto a = m;
    Rat det(1);
    for (int c = 0; c < kNumVars; ++c) {
        int piv = -1;
        for (int r = c; r < kNumVars; ++r)
            if (!a[r][c].is_zero()) { piv = r; break; }
        if (piv < 0) return Rat(0);
        if (piv != c) { std::swap(a[piv], a[c]); det = -det; }
        det = det * a[c][c];
        for (int r = c + 1; r < kNumVars; ++r) {
            if (a[r][c].is_zero()) continue;
            Rat f = a[r][c] / a[c][c];
            for (int k = c; k < kNumVars; ++k) a[r][k] = a[r][k] - f * a[c][k];
        }
    }
    return det;
}

}  // namespace detail

// Applies one step to a germ. Substitutions must replace a coordinate by an
// expression of the same action weight, otherwise the change would not
// descend to the quotient.
inline Germ apply_step(const Germ& g, const ChangeStep& s) {
    Germ out = g;
    switch (s.kind) {
        case ChangeStep::Kind::Substitute: {
            if (g.action.r > 1 && !s.value.is_zero()) {
                Exp4 ev{0, 0, 0, 0};
                ev[s.var] = 1;
                long long want = g.action.weight_of_exp(ev);
                for (auto& [e, c] : s.value.terms())
                    if (g.action.weight_of_exp(e) != want)
                        throw HypothesisViolated(
                            "apply_step: substitution for " +
                            std::string(kVarNames[s.var]) + " is not equivariant");
            }
            out.phi = g.phi.substituted(s.var, s.value);
            break;
        }
        case ChangeStep::Kind::ScaleEquation:
            if (s.factor.is_zero())
                throw HypothesisViolated("apply_step: zero equation scale");
            out.phi = g.phi * s.factor;
            break;
        case ChangeStep::Kind::Permute: {
            std::array<bool, kNumVars> seen{};
            for (int i = 0; i < kNumVars; ++i) {
                if (s.perm[i] < 0 || s.perm[i] >= kNumVars || seen[s.perm[i]])
                    throw HypothesisViolated("apply_step: bad permutation");
                seen[s.perm[i]] = true;
            }
            MPoly p;
            for (auto& [e, c] : g.phi.terms()) {
                Exp4 e2;
                for (int i = 0; i < kNumVars; ++i) e2[i] = e[s.perm[i]];
                p.add_term(e2, c);
            }
            out.phi = p;
            std::array<long long, kNumVars> a2;
            for (int i = 0; i < kNumVars; ++i) a2[i] = g.action.a[s.perm[i]];
            out.action = CyclicAction(g.action.r, a2);
            break;
        }
        case ChangeStep::Kind::Linear: {
            if (detail::det4(s.mat).is_zero())
                throw HypothesisViolated("apply_step: singular linear change");
            if (g.action.r > 1)
                for (int i = 0; i < kNumVars; ++i)
                    for (int j = 0; j < kNumVars; ++j)
                        if (!s.mat[i][j].is_zero() &&
                            (g.action.a[i] - g.action.a[j]) % g.action.r != 0)
                            throw HypothesisViolated(
                                "apply_step: linear change mixes coordinates of "
                                "different residues");
            std::array<MPoly, kNumVars> img;
            for (int i = 0; i < kNumVars; ++i)
                for (int j = 0; j < kNumVars; ++j)
                    if (!s.mat[i][j].is_zero()) img[i] += MPoly::var(j) * s.mat[i][j];
            out.phi = g.phi.composed(img);
            break;
        }
        case ChangeStep::Kind::Regenerator: {
            long long r = g.action.r;
            long long k = ((s.unit % r) + r) % r;
            if (std::gcd(k, r) != 1)
                throw HypothesisViolated("apply_step: regenerator is not a unit");
            std::array<long long, kNumVars> a2;
            for (int i = 0; i < kNumVars; ++i) a2[i] = k * g.action.a[i];
            out.action = CyclicAction(r, a2);
            break;
        }
    }
    return out;
}

struct ChangeLog {
    std::vector<ChangeStep> steps;

    bool empty() const { return steps.empty(); }
    void push(ChangeStep s) { steps.push_back(std::move(s)); }

    Germ apply(const Germ& g) const {
        Germ cur = g;
        for (auto& s : steps) cur = apply_step(cur, s);
        return cur;
    }

    std::string str() const {
        std::string out;
        for (auto& s : steps) {
            if (!out.empty()) out += "; ";
            out += s.str();
        }
        return out.empty() ? "(identity)" : out;
    }
};

// ---------------------------------------------------------------------------
// Invariants

struct InvariantLedger {
    std::map<std::string, long long> values;

    bool has(const std::string& k) const { return values.count(k) != 0; }
    long long get(const std::string& k) const {
        auto it = values.find(k);
        if (it == values.end()) throw EngineError("InvariantLedger: missing " + k);
        return it->second;
    }
    void set(const std::string& k, long long v) { values[k] = v; }

    std::string str() const {
        std::string out;
        for (auto& [k, v] : values) {
            if (!out.empty()) out += ", ";
            out += k + "=" + invariant_str(v);
        }
        return out.empty() ? "(none)" : out;
    }
};

// Terms of phi with fixed x and y exponents, divided by x^ex y^ey: the
// coefficient in the partial expansion phi = sum x^ex y^ey c_{ex,ey}(z,u).
inline MPoly coefficient_part(const MPoly& phi, int ex, int ey) {
    MPoly r;
    for (auto& [e, c] : phi.terms())
        if (e[0] == ex && e[1] == ey) r.add_term({0, 0, e[2], e[3]}, c);
    return r;
}

// min over pure (z,u) monomials z^i u^j of phi of wz*i + wu*j, with optional
// cap on the z exponent (cap_i) or on the u exponent (cap_j); kInfinite when
// no such monomial exists.
inline long long min_zu_weight(const MPoly& phi, long long wz, long long wu,
                               int cap_i = -1, int cap_j = -1) {
    long long best = kInfinite;
    for (auto& [e, c] : phi.terms()) {
        if (e[0] != 0 || e[1] != 0) continue;
        if (cap_i >= 0 && e[2] > cap_i) continue;
        if (cap_j >= 0 && e[3] > cap_j) continue;
        best = std::min(best, wz * e[2] + wu * e[3]);
    }
    return best;
}

// tau of a polynomial in z and u only: minimal total degree.
inline long long tau_of(const MPoly& f) {
    long long t = min_zu_weight(f, 1, 1);
    return t;
}

namespace detail {

// l = min{k : y u^k in phi} over terms x^0 y^1 z^0 u^k; kInfinite if none.
inline long long cd_l_of(const MPoly& phi) {
    long long l = kInfinite;
    for (auto& [e, c] : phi.terms())
        if (e[0] == 0 && e[1] == 1 && e[2] == 0)
            l = std::min(l, static_cast<long long>(e[3]));
    return l;
}

}  // namespace detail

// Named invariants of a germ already in the normal form of its class. For a
// class whose case analysis never consults an invariant, nothing is set.
inline InvariantLedger compute_invariants(SingularityClass cls, const Germ& g) {
    InvariantLedger inv;
    const MPoly& phi = g.phi;
    switch (cls) {
        case SingularityClass::Smooth:
            break;
        case SingularityClass::TerminalQuotient: {
            inv.set("r", g.action.r);
            auto f = terminal_quotient_form(
                g.action.r, {g.action.a[0], g.action.a[1], g.action.a[2]});
            if (f) inv.set("s", f->s);
            break;
        }
        case SingularityClass::cA: {
            // phi = xy + f(z,u)
            MPoly f = coefficient_part(phi, 0, 0);
            inv.set("tau", tau_of(f));
            inv.set("tau_sharp", min_zu_weight(f, 1, 1, 1));
            break;
        }
        case SingularityClass::cA_r: {
            // phi = xy + f(z,u) with z exponents divisible by r; kappa counts
            // z^{ir} u^j as i + j.
            long long r = g.action.r;
            long long kappa = kInfinite, kappa_sharp = kInfinite;
            for (auto& [e, c] : phi.terms()) {
                if (e[0] != 0 || e[1] != 0) continue;
                if (e[2] % r != 0) continue;
                kappa = std::min(kappa, e[2] / r + e[3]);
                if (e[2] == 0) kappa_sharp = std::min(kappa_sharp, static_cast<long long>(e[3]));
            }
            inv.set("kappa", kappa);
            inv.set("kappa_sharp", kappa_sharp);
            break;
        }
        case SingularityClass::cD:
        case SingularityClass::cD_like: {
            // phi = x^2 + y^2 z + lambda y u^l + f(z,u)
            long long l = detail::cd_l_of(phi);
            long long mu = min_zu_weight(phi, 2, 1);
            long long mu_sharp = min_zu_weight(phi, 2, 1, 1);
            long long mu_flat = std::min(mu, l == kInfinite ? kInfinite : 2 * l - 2);
            inv.set("l", l);
            inv.set("mu", mu);
            inv.set("mu_sharp", mu_sharp);
            inv.set("mu_flat", mu_flat);
            inv.set("tau_sharp", min_zu_weight(phi, 1, 1, 1));
            inv.set("rho_sharp", min_zu_weight(phi, 1, 1, -1, 1));
            // isolation exponent: min p with y u^p, z u^p or u^p in phi
            long long p = l;
            for (auto& [e, c] : phi.terms())
                if (e[0] == 0 && e[1] == 0 && e[2] <= 1)
                    p = std::min(p, static_cast<long long>(e[3]));
            inv.set("p", p);
            break;
        }
        case SingularityClass::cAx_2: {
            MPoly f = coefficient_part(phi, 0, 0);
            long long tau = tau_of(f);
            inv.set("tau", tau);
            if (tau != kInfinite) inv.set("tau_prime", tau / 2);
            break;
        }
        case SingularityClass::cAx_4: {
            // f = sum a_ij z^{2i} u^j; sigma = min i+j
            long long sigma = kInfinite;
            for (auto& [e, c] : phi.terms())
                if (e[0] == 0 && e[1] == 0)
                    sigma = std::min(sigma, static_cast<long long>(e[2] / 2 + e[3]));
            inv.set("sigma", sigma);
            break;
        }
        case SingularityClass::cD_2: {
            // Case 1 form x^2+yzu+y^{2a}+u^{2b}+z^c, or Case 2 form
            // x^2+y^2z+lambda y u^{2l+1}+f(z,u^2).
            bool has_yzu = !phi.coeff({0, 1, 1, 1}).is_zero();
            bool has_y2z = !phi.coeff({0, 2, 1, 0}).is_zero();
            if (has_yzu && !has_y2z) {
                inv.set("form", 1);
                long long a = kInfinite, b = kInfinite, c = kInfinite;
                for (auto& [e, co] : phi.terms()) {
                    if (e[0] != 0) continue;
                    if (e[1] >= 2 && e[2] == 0 && e[3] == 0)
                        a = std::min(a, static_cast<long long>(e[1] / 2));
                    if (e[1] == 0 && e[2] == 0 && e[3] >= 2)
                        b = std::min(b, static_cast<long long>(e[3] / 2));
                    if (e[1] == 0 && e[3] == 0 && e[2] >= 2)
                        c = std::min(c, static_cast<long long>(e[2]));
                }
                inv.set("a", a);
                inv.set("b", b);
                inv.set("c", c);
            } else {
                inv.set("form", 2);
                long long lo = detail::cd_l_of(phi);  // exponent 2l+1
                long long l = lo == kInfinite ? kInfinite : (lo - 1) / 2;
                long long sigma = kInfinite;
                for (auto& [e, c2] : phi.terms())
                    if (e[0] == 0 && e[1] == 0)
                        sigma = std::min(sigma, static_cast<long long>(e[2] + e[3] / 2));
                inv.set("l", l);
                inv.set("sigma", sigma);
                long long sf = std::min(sigma, l == kInfinite ? kInfinite : 2 * l - 1);
                inv.set("sigma_flat", sf);
            }
            break;
        }
        case SingularityClass::cD_3: {
            // phi = x^2 + y^3 + (cubic in z,u) + y g + h
            MPoly h = coefficient_part(phi, 0, 0);
            MPoly gp = coefficient_part(phi, 0, 1);
            MPoly c3 = h.graded_part(3);
            // form 1: zu(z+u)-type (three distinct factors), form 2: zu^2,
            // form 3: z^3
            long long form = 0;
            if (!c3.is_zero()) {
                auto sq = squarefree_decompose(BinaryForm::from_mpoly(c3));
                int maxmult = 0;
                for (auto& p : sq.parts) maxmult = std::max(maxmult, p.multiplicity);
                form = maxmult == 1 ? 1 : (maxmult == 2 ? 2 : 3);
            }
            inv.set("form", form);
            inv.set("u4_in_g", gp.coeff({0, 0, 0, 4}).is_zero() ? 0 : 1);
            inv.set("u6_in_h", h.coeff({0, 0, 0, 6}).is_zero() ? 0 : 1);
            inv.set("zu5_in_h", h.coeff({0, 0, 1, 5}).is_zero() ? 0 : 1);
            inv.set("u9_in_h", h.coeff({0, 0, 0, 9}).is_zero() ? 0 : 1);
            break;
        }
        case SingularityClass::cE6:
        case SingularityClass::cE7:
        case SingularityClass::cE8:
        case SingularityClass::cE_2:
        case SingularityClass::cE_like: {
            // phi = x^2 + y^3 + y g(z,u) + h(z,u)
            MPoly gp = coefficient_part(phi, 0, 1);
            MPoly h = coefficient_part(phi, 0, 0);
            inv.set("tau_g", tau_of(gp));
            inv.set("tau_h", tau_of(h));
            // tau_star = min{p : y^i z^j u^p in phi, i + j <= 1}
            long long ts = kInfinite;
            for (auto& [e, c] : phi.terms())
                if (e[0] == 0 && e[1] + e[2] <= 1)
                    ts = std::min(ts, static_cast<long long>(e[3]));
            inv.set("tau_star", ts);
            break;
        }
        case SingularityClass::Unclassified:
            break;
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void require(std::vector<std::string>& out, bool ok, const std::string& msg) {
    if (!ok) out.push_back(msg);
}

// Every term is x y m(y,z,u), y^a m(z,u) with a >= 1 and m nonconstant,
// or a pure (z,u) monomial of total degree >= lo. The non-bare terms are a
// unit dressing of the hyperbolic plane (x y U(y,z,u), plus mixed terms
// whose absorption would divide by U); they have no polynomial
// normalization and do not change the pure part, so they are part of the
// accepted form. The bare x y must be present.
inline bool is_xy_plus_f(const MPoly& phi, int lo) {
    bool saw_xy = false;
    for (auto& [e, c] : phi.terms()) {
        if (e[0] == 1 && e[1] >= 1) {
            if (e[1] == 1 && e[2] == 0 && e[3] == 0) saw_xy = true;
            continue;
        }
        if (e[0] == 0 && e[1] >= 1 && e[2] + e[3] >= 1) continue;
        if (e[0] != 0 || e[1] != 0) return false;
        if (e[2] + e[3] < lo) return false;
    }
    return saw_xy;
}

// Every term is x^2, or has x exponent 0.
inline bool is_x2_plus_rest(const MPoly& phi) {
    bool saw_x2 = false;
    for (auto& [e, c] : phi.terms()) {
        if (e[0] == 2 && e[1] == 0 && e[2] == 0 && e[3] == 0) {
            saw_x2 = !c.is_zero();
            continue;
        }
        if (e[0] != 0) return false;
    }
    return saw_x2;
}

// Rest of phi fits x^2 + y^2 z + lambda y u^l + f(z,u).
inline bool is_cd_template(const MPoly& phi) {
    if (!is_x2_plus_rest(phi)) return false;
    if (phi.coeff({0, 2, 1, 0}).is_zero()) return false;
    for (auto& [e, c] : phi.terms()) {
        if (e[0] != 0) continue;
        if (e[1] == 0) continue;                              // f(z,u)
        if (e[1] == 2 && e[2] == 1 && e[3] == 0) continue;    // y^2 z
        if (e[1] == 1 && e[2] == 0) continue;                 // y u^l
        return false;
    }
    return true;
}

// x^2 + y^3 + y g(z,u) + h(z,u).
inline bool is_ce_template(const MPoly& phi) {
    if (!is_x2_plus_rest(phi)) return false;
    if (phi.coeff({0, 3, 0, 0}).is_zero()) return false;
    for (auto& [e, c] : phi.terms()) {
        if (e[0] != 0) continue;
        if (e[1] == 0 || (e[1] == 1 && e[2] + e[3] > 0)) continue;
        if (e[1] == 3 && e[2] == 0 && e[3] == 0) continue;
        return false;
    }
    return true;
}

}  // namespace detail

// Checks a germ against the normal form contract of the declared class.
// Returns human-readable violations; empty means the declaration is
// consistent. This inspects shape only and never mutates the germ.
inline std::vector<std::string> validate(const Germ& g, SingularityClass cls) {
    using detail::require;
    std::vector<std::string> out;
    const MPoly& phi = g.phi;

    if (g.quotient_only) {
        require(out, cls == SingularityClass::TerminalQuotient || cls == SingularityClass::Smooth,
                "quotient-only germ declared as a hypersurface class");
        require(out, phi.is_zero(), "quotient-only germ with a nonzero equation");
        if (cls == SingularityClass::TerminalQuotient) {
            require(out, g.action.r > 1, "quotient point with trivial group");
            require(out, g.action.a[3] == 0, "quotient point uses the fourth residue");
            auto f = terminal_quotient_form(
                g.action.r, {g.action.a[0], g.action.a[1], g.action.a[2]});
            require(out, f.has_value(), "action " + g.action.str() +
                    " is not of terminal type (s, r-s, 1)");
        }
        if (cls == SingularityClass::Smooth)
            require(out, g.action.r == 1, "smooth point with a nontrivial group");
        return out;
    }

    if (phi.is_zero()) {
        out.push_back("hypersurface germ with zero equation");
        return out;
    }
    if (g.action.r > 1 && !semi_invariant_weight(phi, g.action))
        out.push_back("equation is not semi-invariant for " + g.action.str());

    auto expect_index = [&](long long r) {
        require(out, g.action.r == r,
                std::string("class ") + class_name(cls) + " requires index " +
                    std::to_string(r) + ", germ has " + std::to_string(g.action.r));
    };

    switch (cls) {
        case SingularityClass::Smooth: {
            bool sm = !phi.coeff({0, 0, 0, 0}).is_zero() || phi.order() == 1;
            require(out, sm, "equation vanishes to order >= 2 at the origin");
            break;
        }
        case SingularityClass::TerminalQuotient:
            out.push_back("quotient class declared on a hypersurface germ");
            break;
        case SingularityClass::cA: {
            expect_index(1);
            require(out, detail::is_xy_plus_f(phi, 2), "not of the form xy + f(z,u)");
            MPoly f = coefficient_part(phi, 0, 0);
            require(out, !f.is_zero() && min_zu_weight(f, 1, 1, 1) != kInfinite,
                    "no z u^{p-1} or u^p term: the germ is not isolated");
            long long tau = tau_of(f);
            if (tau != kInfinite)
                require(out, !f.coeff({0, 0, static_cast<int>(tau), 0}).is_zero(),
                        "z^tau missing from the leading form of f");
            break;
        }
        case SingularityClass::cA_r: {
            require(out, g.action.r > 1, "cA/r requires index > 1");
            require(out, detail::is_xy_plus_f(phi, 1), "not of the form xy + f(z,u)");
            long long r = g.action.r;
            require(out, (g.action.a[0] + g.action.a[1]) % r == 0,
                    "x and y residues do not sum to 0 mod r");
            require(out, g.action.a[3] % r == 0, "u residue is not 0 mod r");
            require(out, int_gcd(Int(g.action.a[2]), Int(r)) == 1,
                    "z residue is not a unit mod r");
            bool has_uk = false;
            for (auto& [e, c] : phi.terms())
                if (e[0] == 0 && e[1] == 0 && e[2] == 0) has_uk = true;
            require(out, has_uk, "no u^k term: the germ is not isolated");
            break;
        }
        case SingularityClass::cD:
        case SingularityClass::cD_like: {
            expect_index(1);
            if (cls == SingularityClass::cD) {
                require(out, detail::is_cd_template(phi),
                        "not of the form x^2 + y^2 z + lambda y u^l + f(z,u)");
                long long l = detail::cd_l_of(phi);
                require(out, l == kInfinite || l >= 2, "y u^l term with l < 2");
                require(out, min_zu_weight(phi, 1, 1, -1, 1) != kInfinite,
                        "no z^{q-1} u or z^q term: singular along the u axis");
                if (l == kInfinite)
                    require(out, min_zu_weight(phi, 1, 1, 1) != kInfinite,
                            "lambda = 0 and no z u^{p-1} or u^p term: singular along the z axis");
            } else {
                require(out, detail::is_x2_plus_rest(phi), "no clean x^2 term");
                MPoly phi3 = phi.graded_part(3);
                require(out, !phi3.coeff({0, 2, 1, 0}).is_zero(),
                        "y^2 z missing from the cubic part");
                require(out, !phi3.coeff({0, 0, 3, 0}).is_zero(),
                        "z^3 missing from the cubic part");
                for (auto& [e, c] : phi3.terms()) {
                    bool ok = (e[1] == 2 && e[2] == 1 && e[3] == 0) ||
                              (e[1] == 1 && e[2] == 0 && e[3] == 2) || e[1] == 0;
                    require(out, ok, "cubic part has a term outside y^2 z + lambda y u^2 + f3(z,u)");
                    if (!ok) break;
                }
                long long p = detail::cd_l_of(phi);
                p = std::min(p, min_zu_weight(phi, 0, 1, 1));
                require(out, p != kInfinite,
                        "no y u^p, z u^p or u^p term: the germ is not isolated");
            }
            break;
        }
        case SingularityClass::cAx_2: {
            expect_index(2);
            require(out, g.action.a == std::array<long long, 4>{1, 0, 1, 1},
                    "action is not 1/2(1,0,1,1)");
            require(out, detail::is_x2_plus_rest(phi) && !phi.coeff({0, 2, 0, 0}).is_zero(),
                    "not of the form x^2 + y^2 + f(z,u)");
            for (auto& [e, c] : phi.terms()) {
                bool ok = (e[0] == 2 && e[1] + e[2] + e[3] == 0) ||
                          (e[1] == 2 && e[0] + e[2] + e[3] == 0) ||
                          (e[0] == 0 && e[1] == 0);
                if (!ok) {
                    out.push_back("term outside x^2 + y^2 + f(z,u)");
                    break;
                }
            }
            MPoly f = coefficient_part(phi, 0, 0);
            require(out, f.is_zero() || tau_of(f) >= 4,
                    "f has order < 4 (the germ is cA/2 or smooth, not cAx/2)");
            break;
        }
        case SingularityClass::cAx_4: {
            expect_index(4);
            require(out, g.action.a == std::array<long long, 4>{1, 3, 1, 2},
                    "action is not 1/4(1,3,1,2)");
            require(out, detail::is_x2_plus_rest(phi) && !phi.coeff({0, 2, 0, 0}).is_zero(),
                    "not of the form x^2 + y^2 + f(z,u)");
            for (auto& [e, c] : phi.terms()) {
                if (e[0] + e[1] > 0) continue;
                // i + j = 1 is admissible only as z^2: a bare u term would
                // make the germ a smooth chart of a quotient point
                bool ok = e[2] % 2 == 0 && (e[2] / 2 + e[3]) % 2 == 1 &&
                          (e[2] / 2 + e[3] >= 3 || e[2] >= 2);
                if (!ok) {
                    out.push_back("f term z^" + std::to_string(e[2]) + " u^" +
                                  std::to_string(e[3]) +
                                  " is not z^{2i} u^j with i+j odd (u alone excluded)");
                    break;
                }
            }
            break;
        }
        case SingularityClass::cD_2: {
            expect_index(2);
            require(out, g.action.a == std::array<long long, 4>{1, 1, 0, 1},
                    "action is not 1/2(1,1,0,1)");
            require(out, detail::is_x2_plus_rest(phi), "no clean x^2 term");
            bool has_yzu = !phi.coeff({0, 1, 1, 1}).is_zero();
            bool has_y2z = !phi.coeff({0, 2, 1, 0}).is_zero();
            require(out, has_yzu || has_y2z, "neither yzu nor y^2 z present");
            if (!has_yzu && has_y2z) {
                for (auto& [e, c] : phi.terms()) {
                    if (e[0] != 0) continue;
                    bool ok = (e[1] == 2 && e[2] == 1 && e[3] == 0) ||
                              (e[1] == 1 && e[2] == 0 && e[3] % 2 == 1) ||
                              (e[1] == 0 && e[3] % 2 == 0);
                    if (!ok) {
                        out.push_back("term outside x^2 + y^2 z + lambda y u^{2l+1} + f(z,u^2)");
                        break;
                    }
                }
            }
            break;
        }
        case SingularityClass::cD_3: {
            expect_index(3);
            require(out, g.action.a == std::array<long long, 4>{0, 2, 1, 1},
                    "action is not 1/3(0,2,1,1)");
            require(out, detail::is_ce_template(phi),
                    "not of the form x^2 + y^3 + y g(z,u) + h(z,u)");
            MPoly h3 = coefficient_part(phi, 0, 0).graded_part(3);
            require(out, !h3.is_zero(), "no cubic part in z,u");
            break;
        }
        case SingularityClass::cE6:
        case SingularityClass::cE7:
        case SingularityClass::cE8:
        case SingularityClass::cE_like: {
            expect_index(1);
            require(out, detail::is_ce_template(phi),
                    "not of the form x^2 + y^3 + y g(z,u) + h(z,u)");
            MPoly gp = coefficient_part(phi, 0, 1);
            MPoly h = coefficient_part(phi, 0, 0);
            long long tg = tau_of(gp), th = tau_of(h);
            require(out, tg >= 3, "tau(g) < 3: the germ is at worst cD");
            require(out, th >= 4, "tau(h) < 4: the germ is at worst cD");
            if (cls == SingularityClass::cE6) {
                require(out, th == 4, "cE6 requires tau(h) = 4");
                if (th == 4)
                    require(out, !h.coeff({0, 0, 4, 0}).is_zero(),
                            "z^4 missing from the tau = 4 part of h");
            }
            if (cls == SingularityClass::cE7) {
                require(out, tg == 3 && th >= 5, "cE7 requires tau(g) = 3 and tau(h) >= 5");
                if (tg == 3)
                    require(out, !gp.coeff({0, 0, 3, 0}).is_zero(),
                            "z^3 missing from the tau = 3 part of g");
            }
            if (cls == SingularityClass::cE8) {
                require(out, tg >= 4 && th == 5, "cE8 requires tau(g) >= 4 and tau(h) = 5");
                if (th == 5)
                    require(out, !h.coeff({0, 0, 5, 0}).is_zero(),
                            "z^5 missing from the tau = 5 part of h");
            }
            if (cls == SingularityClass::cE_like)
                require(out, tg >= 4 && th >= 6,
                        "cE-like tag with tau(g) <= 3 or tau(h) <= 5: use the cE_n class");
            long long ts = kInfinite;
            for (auto& [e, c] : phi.terms())
                if (e[0] == 0 && e[1] + e[2] <= 1)
                    ts = std::min(ts, static_cast<long long>(e[3]));
            require(out, ts != kInfinite,
                    "no y u^p, z u^p or u^p term: the germ is not isolated");
            break;
        }
        case SingularityClass::cE_2: {
            expect_index(2);
            require(out, g.action.a == std::array<long long, 4>{1, 0, 1, 1},
                    "action is not 1/2(1,0,1,1)");
            require(out, detail::is_ce_template(phi),
                    "not of the form x^2 + y^3 + y g(z,u) + h(z,u)");
            MPoly h4 = coefficient_part(phi, 0, 0).graded_part(4);
            require(out, !h4.is_zero(), "h_4 = 0: the germ is not a cE/2 point");
            break;
        }
        case SingularityClass::Unclassified:
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// The tangency condition on a weight (the obstruction called natural here):
// with phi = x^2 + y^3 + y g + h and v-leading pieces g_v, h_v, h_{v+1},
// the singular locus of the blown up chart U_4 fails to be isolated exactly
// when some binary form s satisfies
//   g_v = -3 s^2,  h_v = 2 s^3,  h_{v+1} = -s g_{v+1}.

struct TangencyWitness {
    bool holds = false;
    MPoly s;  // valid when holds
};

// Any witness s over C is forced to be rational: s = 0 when g_v = 0, and
// otherwise s = -3 h_v / (2 g_v) since s^3 / s^2 = (h_v / 2) / (-g_v / 3).
// So the decision reduces to taking the rational square root of -g_v / 3,
// fixing the sign against h_v and checking the cross term.
inline TangencyWitness tangency_condition(const MPoly& phi, const Weight& v) {
    if (v.b[3] != 1)
        throw HypothesisViolated("tangency_condition: weight must have b4 = 1");
    TangencyWitness w;
    Rat wt = weight_of(phi, v);
    // y g_v and h_v live at the leading weight, y g_{v+1} and h_{v+1} one
    // integer above it; coefficient_part strips the y factor.
    MPoly lead = weight_part(phi, v, wt);
    MPoly next = weight_part(phi, v, wt + Rat(1));
    MPoly gv = coefficient_part(lead, 0, 1);
    MPoly gv1 = coefficient_part(next, 0, 1);
    MPoly hv = coefficient_part(lead, 0, 0);
    MPoly hv1 = coefficient_part(next, 0, 0);

    if (gv.is_zero()) {
        w.holds = hv.is_zero() && hv1.is_zero();
        return w;
    }
    if (hv.is_zero()) return w;  // g_v = -3 s^2 != 0 forces h_v = 2 s^3 != 0

    std::optional<BinaryForm> root;
    try {
        root = perfect_power(BinaryForm::from_mpoly(gv * Rat(-1, 3),
                                                    static_cast<int>(v.b[2])),
                             2);
    } catch (const HypothesisViolated&) {
        return w;  // g_v not homogeneous for this weight: no witness
    }
    if (!root) return w;
    for (const MPoly& s : {root->to_mpoly(), -root->to_mpoly()}) {
        if (gv == s * s * Rat(-3) && hv == s * s * s * Rat(2) && hv1 == -(s * gv1)) {
            w.holds = true;
            w.s = s;
            return w;
        }
    }
    return w;
}

}  // namespace feasres
