#pragma once

// Sparse exact polynomials in the four ambient coordinates x, y, z, u,
// together with the weight and group-action bookkeeping used by weighted
// blowups: weight filtration, chart descent, and Jacobian evaluation.

#include "feasres/errors.hpp"
#include "feasres/rational.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace feasres {

inline constexpr int kNumVars = 4;
inline constexpr std::array<const char*, kNumVars> kVarNames = {"x", "y", "z", "u"};

using Exp4 = std::array<int, kNumVars>;

inline int total_degree(const Exp4& e) { return e[0] + e[1] + e[2] + e[3]; }

// Term order used for storage and printing: ascending total degree, ties
// broken so that higher powers of earlier variables come first. This makes
// iteration order equal to the canonical text order.
struct TermOrder {
    bool operator()(const Exp4& a, const Exp4& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a > b;  // lexicographically larger exponent vector prints first
    }
};

// Blowup weight v = (b1/r0, b2/r0, b3/r0, b4/r0) with bi > 0.
struct Weight {
    long long r0 = 1;
    std::array<long long, kNumVars> b{1, 1, 1, 1};

    Rat entry(int i) const { return Rat(b[i], r0); }
    Rat sum() const { return Rat(b[0] + b[1] + b[2] + b[3], r0); }

    bool operator==(const Weight& o) const = default;

    std::string str() const {
        std::string s = "(1/" + std::to_string(r0) + ")(";
        for (int i = 0; i < kNumVars; ++i)
            s += std::to_string(b[i]) + (i + 1 < kNumVars ? "," : ")");
        return s;
    }
};

// Cyclic group action of order r with residues a[i] on the coordinates.
struct CyclicAction {
    long long r = 1;
    std::array<long long, kNumVars> a{0, 0, 0, 0};

    CyclicAction() = default;
    CyclicAction(long long r_, std::array<long long, kNumVars> a_) : r(r_), a(a_) {
        normalize();
    }

    void normalize() {
        if (r <= 0) throw EngineError("CyclicAction: nonpositive order");
        for (auto& ai : a) ai = ((ai % r) + r) % r;
    }

    bool is_trivial() const { return r == 1; }

    long long weight_of_exp(const Exp4& e) const {
        long long w = 0;
        for (int i = 0; i < kNumVars; ++i) w = (w + a[i] * (e[i] % r)) % r;
        return w;
    }

    bool operator==(const CyclicAction& o) const = default;

    std::string str() const {
        std::string s = "(1/" + std::to_string(r) + ")(";
        for (int i = 0; i < kNumVars; ++i)
            s += std::to_string(a[i]) + (i + 1 < kNumVars ? "," : ")");
        return s;
    }
};

class MPoly {
public:
    using Terms = std::map<Exp4, Rat, TermOrder>;

    MPoly() = default;
    explicit MPoly(const Rat& c) {
        if (!c.is_zero()) terms_[{0, 0, 0, 0}] = c;
    }

    static MPoly var(int i, int power = 1) {
        MPoly p;
        Exp4 e{0, 0, 0, 0};
        e[i] = power;
        p.terms_[e] = Rat(1);
        return p;
    }

    static MPoly monomial(const Exp4& e, const Rat& c) {
        MPoly p;
        if (!c.is_zero()) p.terms_[e] = c;
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rat coeff(const Exp4& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const Exp4& e, const Rat& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    int degree() const {
        int d = -1;
        for (auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;  // -1 for the zero polynomial
    }

    int degree_in(int var) const {
        int d = -1;
        for (auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }

    bool depends_on(int var) const {
        for (auto& [e, c] : terms_)
            if (e[var] > 0) return true;
        return false;
    }

    MPoly operator-() const {
        MPoly r;
        for (auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    MPoly& operator+=(const MPoly& o) {
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        for (auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r;
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                Exp4 e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
                r.add_term(e, ca * cb);
            }
        return r;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    MPoly& operator*=(const Rat& c) {
        if (c.is_zero()) { terms_.clear(); return *this; }
        for (auto& [e, v] : terms_) v *= c;
        return *this;
    }
    friend MPoly operator*(MPoly a, const Rat& c) { return a *= c; }
    friend MPoly operator*(const Rat& c, MPoly a) { return a *= c; }

    bool operator==(const MPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    MPoly pow(int n) const {
        if (n < 0) throw EngineError("MPoly::pow: negative exponent");
        MPoly r(Rat(1));
        MPoly base = *this;
        while (n > 0) {
            if (n & 1) r *= base;
            base *= base;
            n >>= 1;
        }
        return r;
    }

    MPoly derivative(int var) const {
        MPoly r;
        for (auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exp4 d = e;
            d[var] -= 1;
            r.add_term(d, c * Rat(e[var]));
        }
        return r;
    }

    // Drops every term of total degree above max_degree. Returns true when
    // something was dropped.
    bool truncate(int max_degree) {
        bool dropped = false;
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (total_degree(it->first) > max_degree) {
                it = terms_.erase(it);
                dropped = true;
            } else {
                ++it;
            }
        }
        return dropped;
    }

    MPoly truncated(int max_degree) const {
        MPoly r = *this;
        r.truncate(max_degree);
        return r;
    }

    // Homogeneous part of the given total degree.
    MPoly graded_part(int d) const {
        MPoly r;
        for (auto& [e, c] : terms_)
            if (total_degree(e) == d) r.terms_[e] = c;
        return r;
    }

    int order() const {  // degree of the lowest term, -1 for zero
        if (terms_.empty()) return -1;
        return total_degree(terms_.begin()->first);
    }

    // Substitute var -> value, exact composition.
    MPoly substituted(int var, const MPoly& value) const {
        // Group by exponent of var, then Horner in the substituted value.
        std::map<int, MPoly> by_pow;
        for (auto& [e, c] : terms_) {
            Exp4 rest = e;
            rest[var] = 0;
            by_pow[e[var]].add_term(rest, c);
        }
        MPoly acc;
        int prev = -1;
        for (auto it = by_pow.rbegin(); it != by_pow.rend(); ++it) {
            if (prev >= 0) acc *= value.pow(prev - it->first);
            acc += it->second;
            prev = it->first;
        }
        if (prev > 0) acc *= value.pow(prev);
        return acc;
    }

    // Simultaneous substitution of all four coordinates.
    MPoly composed(const std::array<MPoly, kNumVars>& vals) const {
        MPoly r;
        for (auto& [e, c] : terms_) {
            MPoly t(c);
            for (int i = 0; i < kNumVars; ++i)
                if (e[i] > 0) t *= vals[i].pow(e[i]);
            r += t;
        }
        return r;
    }

    // Exact division by a monomial; every term must be divisible.
    MPoly divided_by_monomial(const Exp4& m) const {
        MPoly r;
        for (auto& [e, c] : terms_) {
            Exp4 d;
            for (int i = 0; i < kNumVars; ++i) {
                if (e[i] < m[i])
                    throw EngineError("divided_by_monomial: not divisible");
                d[i] = e[i] - m[i];
            }
            r.terms_[d] = c;
        }
        return r;
    }

    // Largest monomial dividing every term.
    Exp4 content_monomial() const {
        Exp4 g{-1, -1, -1, -1};
        for (auto& [e, c] : terms_) {
            for (int i = 0; i < kNumVars; ++i)
                g[i] = g[i] < 0 ? e[i] : std::min(g[i], e[i]);
        }
        if (g[0] < 0) return {0, 0, 0, 0};
        return g;
    }

    Rat eval(const std::array<Rat, kNumVars>& pt) const {
        Rat acc(0);
        for (auto& [e, c] : terms_) {
            Rat t = c;
            for (int i = 0; i < kNumVars; ++i)
                for (int k = 0; k < e[i]; ++k) t *= pt[i];
            acc += t;
        }
        return acc;
    }

    std::string str() const;

private:
    Terms terms_;
};

// ---------------------------------------------------------------------------
// Weight filtration

// Scaled weight of one exponent vector: sum b_i e_i (the actual weight is
// this divided by w.r0).
inline long long scaled_weight(const Exp4& e, const Weight& w) {
    long long s = 0;
    for (int i = 0; i < kNumVars; ++i) s += w.b[i] * e[i];
    return s;
}

// wt_v(phi) = min over terms of <v, exponent>. Undefined for phi = 0.
inline Rat weight_of(const MPoly& phi, const Weight& w) {
    if (phi.is_zero()) throw EngineError("weight_of: zero polynomial");
    bool first = true;
    long long best = 0;
    for (auto& [e, c] : phi.terms()) {
        long long s = scaled_weight(e, w);
        if (first || s < best) { best = s; first = false; }
    }
    return Rat(best, w.r0);
}

// Sum of the terms of phi of exact v-weight val.
inline MPoly weight_part(const MPoly& phi, const Weight& w, const Rat& val) {
    MPoly r;
    for (auto& [e, c] : phi.terms())
        if (Rat(scaled_weight(e, w), w.r0) == val) r.add_term(e, c);
    return r;
}

// Terms of v-weight strictly below val.
inline MPoly weight_part_below(const MPoly& phi, const Weight& w, const Rat& val) {
    MPoly r;
    for (auto& [e, c] : phi.terms())
        if (Rat(scaled_weight(e, w), w.r0) < val) r.add_term(e, c);
    return r;
}

// ---------------------------------------------------------------------------
// Chart descent

// Descends phi to the cover of chart U_i of the weighted blowup with weight
// w: substitutes x_j -> x_j x_i^{b_j/r0} (j != i), x_i -> x_i^{b_i/r0} and
// divides out x_i^{wt}. On the lattice of monomials this sends an exponent
// vector e to e' with e'_j = e_j (j != i) and
//   e'_i = (scaled_weight(e) - min scaled weight) / r0.
// Throws NonIntegralExponent when that quotient is not an integer, which is
// exactly the case of an incompatible weight/polynomial pair.
struct ChartImage {
    MPoly poly;     // the descended strict transform on the chart cover
    Rat weight;     // wt_v(phi), the multiplicity divided out
};

inline ChartImage chart_transform(const MPoly& phi, const Weight& w, int chart) {
    if (chart < 0 || chart >= kNumVars)
        throw EngineError("chart_transform: chart index out of range");
    if (phi.is_zero()) throw EngineError("chart_transform: zero polynomial");
    long long smin = 0;
    bool first = true;
    for (auto& [e, c] : phi.terms()) {
        long long s = scaled_weight(e, w);
        if (first || s < smin) { smin = s; first = false; }
    }
    MPoly out;
    for (auto& [e, c] : phi.terms()) {
        long long s = scaled_weight(e, w) - smin;
        if (s % w.r0 != 0)
            throw NonIntegralExponent(
                "chart_transform: monomial weight gap " + std::to_string(s) +
                " not divisible by " + std::to_string(w.r0) + " on chart " +
                kVarNames[chart]);
        Exp4 e2 = e;
        e2[chart] = static_cast<int>(s / w.r0);
        out.add_term(e2, c);
    }
    return {out, Rat(smin, w.r0)};
}

// ---------------------------------------------------------------------------
// Jacobian evaluation

struct JacobianValue {
    Rat value;
    std::array<Rat, kNumVars> partial;
};

inline JacobianValue jacobian_eval(const MPoly& phi, const std::array<Rat, kNumVars>& pt) {
    JacobianValue jv;
    jv.value = phi.eval(pt);
    for (int i = 0; i < kNumVars; ++i) jv.partial[i] = phi.derivative(i).eval(pt);
    return jv;
}

// Modular image of phi for the finite field scans. Coefficients are mapped
// through n/d -> n * d^{-1} mod p; a denominator divisible by p is a
// BadPrime error.
inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline std::uint64_t rat_mod_p(const Rat& c, std::uint64_t p) {
    Int n = c.num() % Int(p);
    if (n < 0) n += Int(p);
    Int d = c.den() % Int(p);
    if (d == 0)
        throw BadPrime("coefficient denominator divisible by prime " + std::to_string(p));
    std::uint64_t nn = n.convert_to<std::uint64_t>();
    std::uint64_t dd = d.convert_to<std::uint64_t>();
    return nn * mod_pow(dd, p - 2, p) % p;
}

struct ModTerm {
    Exp4 e;
    std::uint64_t c;
};

inline std::vector<ModTerm> mpoly_mod_p(const MPoly& phi, std::uint64_t p) {
    std::vector<ModTerm> out;
    out.reserve(phi.size());
    for (auto& [e, c] : phi.terms()) {
        std::uint64_t cm = rat_mod_p(c, p);
        if (cm != 0) out.push_back({e, cm});
    }
    return out;
}

inline std::uint64_t eval_mod_p(const std::vector<ModTerm>& terms,
                                const std::array<std::uint64_t, kNumVars>& pt,
                                std::uint64_t p) {
    std::uint64_t acc = 0;
    for (auto& t : terms) {
        std::uint64_t v = t.c;
        for (int i = 0; i < kNumVars; ++i)
            if (t.e[i]) v = v * mod_pow(pt[i], t.e[i], p) % p;
        acc = (acc + v) % p;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Canonical text form and parsing

inline std::string MPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [e, c] : terms_) {
        Rat mag = c.sign() < 0 ? -c : c;
        if (first) {
            if (c.sign() < 0) out += "-";
            first = false;
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        std::string mon;
        for (int i = 0; i < kNumVars; ++i) {
            if (e[i] == 0) continue;
            if (!mon.empty()) mon += "*";
            mon += kVarNames[i];
            if (e[i] > 1) mon += "^" + std::to_string(e[i]);
        }
        if (mon.empty()) {
            out += mag.str();
        } else {
            if (mag != Rat(1)) out += mag.str() + "*";
            out += mon;
        }
    }
    return out;
}

namespace detail {

struct PolyParser {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit PolyParser(const std::string& s_) : s(s_) {}

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

    void advance() {
        if (s[pos] == '\n') { ++line; col = 1; } else { ++col; }
        ++pos;
    }
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) advance();
    }
    bool eof() { skip_ws(); return pos >= s.size(); }
    char peek() { skip_ws(); return pos < s.size() ? s[pos] : '\0'; }

    Int parse_uint() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            fail("expected digit");
        std::string digits;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            digits += s[pos];
            advance();
        }
        return Int(digits);
    }

    Rat parse_number() {
        Int n = parse_uint();
        if (peek() == '/') {
            advance();
            Int d = parse_uint();
            if (d == 0) fail("zero denominator");
            return Rat(n, d);
        }
        return Rat(n);
    }

    MPoly parse_factor() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return MPoly(parse_number());
        for (int i = 0; i < kNumVars; ++i) {
            if (c == kVarNames[i][0]) {
                advance();
                int power = 1;
                if (peek() == '^') {
                    advance();
                    Int p = parse_uint();
                    if (p <= 0 || p > 1000) fail("exponent out of range");
                    power = p.convert_to<int>();
                }
                return MPoly::var(i, power);
            }
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    MPoly parse_term() {
        MPoly t = parse_factor();
        while (peek() == '*') {
            advance();
            t *= parse_factor();
        }
        return t;
    }

    MPoly parse_expr() {
        MPoly acc;
        int sign = 1;
        if (peek() == '-') { sign = -1; advance(); }
        else if (peek() == '+') advance();
        acc += MPoly(Rat(sign)) * parse_term();
        while (!eof()) {
            char c = peek();
            if (c == '+') sign = 1;
            else if (c == '-') sign = -1;
            else fail(std::string("expected '+' or '-', got '") + c + "'");
            advance();
            acc += MPoly(Rat(sign)) * parse_term();
        }
        return acc;
    }
};

}  // namespace detail

inline MPoly mpoly_from_string(const std::string& text) {
    detail::PolyParser p(text);
    if (p.eof()) throw ParseError("empty polynomial", 1, 1);
    return p.parse_expr();
}

}  // namespace feasres
