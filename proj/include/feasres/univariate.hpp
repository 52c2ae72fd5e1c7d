#pragma once

// Dense univariate polynomials over Q: Euclidean arithmetic, Yun squarefree
// decomposition, rational root extraction and complete factorization by
// interpolation. Degrees in this engine stay small (single digits), so the
// quadratic and exponential corners of these algorithms never bite.

#include "feasres/errors.hpp"
#include "feasres/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace feasres {

class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UPoly constant(const Rat& v) { return UPoly({v}); }
    static UPoly x() { return UPoly({Rat(0), Rat(1)}); }

    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Rat lead() const { return c_.empty() ? Rat(0) : c_.back(); }
    Rat coeff(int i) const {
        return (i < 0 || i >= static_cast<int>(c_.size())) ? Rat(0) : c_[i];
    }

    bool operator==(const UPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UPoly& o) const { return !(*this == o); }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return UPoly(std::move(r));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return UPoly(std::move(r));
    }
    friend UPoly operator*(const UPoly& a, const Rat& s) {
        UPoly r = a;
        for (auto& v : r.c_) v *= s;
        r.trim();
        return r;
    }

    UPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rat> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat((long long)i);
        return UPoly(std::move(r));
    }

    Rat eval(const Rat& v) const {
        Rat acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * v + *it;
        return acc;
    }

    UPoly pow(int n) const {
        UPoly r = constant(Rat(1));
        UPoly b = *this;
        while (n > 0) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    UPoly monic() const {
        if (is_zero()) return {};
        return *this * (Rat(1) / lead());
    }

    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            if (c_[i].is_zero()) continue;
            Rat mag = c_[i].sign() < 0 ? -c_[i] : c_[i];
            if (out.empty()) out += c_[i].sign() < 0 ? "-" : "";
            else out += c_[i].sign() < 0 ? " - " : " + ";
            if (i == 0 || mag != Rat(1)) out += mag.str();
            if (i > 0) {
                if (mag != Rat(1)) out += "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rat> c_;
};

// Quotient and remainder of Euclidean division.
inline std::pair<UPoly, UPoly> udivmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw EngineError("udivmod: division by zero polynomial");
    std::vector<Rat> rem(a.coeffs());
    std::vector<Rat> quo(std::max<int>(0, a.degree() - b.degree() + 1), Rat(0));
    Rat inv = Rat(1) / b.lead();
    for (int i = a.degree(); i >= b.degree(); --i) {
        if (rem[i].is_zero()) continue;
        Rat q = rem[i] * inv;
        quo[i - b.degree()] = q;
        for (int j = 0; j <= b.degree(); ++j) rem[i - b.degree() + j] -= q * b.coeff(j);
    }
    return {UPoly(std::move(quo)), UPoly(std::move(rem))};
}

inline UPoly udiv_exact(const UPoly& a, const UPoly& b) {
    auto [q, r] = udivmod(a, b);
    if (!r.is_zero()) throw EngineError("udiv_exact: nonzero remainder");
    return q;
}

inline bool udivides(const UPoly& b, const UPoly& a) {
    if (a.is_zero()) return true;
    if (b.is_zero() || b.degree() > a.degree()) return false;
    return udivmod(a, b).second.is_zero();
}

inline UPoly ugcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = udivmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Yun's algorithm: f = unit * prod g_i^i with the g_i monic, squarefree and
// pairwise coprime. Returns (unit, [(g_i, i)]) skipping trivial g_i.
struct SquarefreePart {
    UPoly factor;  // monic, squarefree
    int multiplicity;
};

struct SquarefreeDecomposition {
    Rat unit;
    std::vector<SquarefreePart> parts;

    UPoly reassemble() const {
        UPoly r = UPoly::constant(unit);
        for (auto& p : parts) r = r * p.factor.pow(p.multiplicity);
        return r;
    }
};

inline SquarefreeDecomposition usquarefree(const UPoly& f) {
    if (f.is_zero()) throw ZeroForm("usquarefree: zero polynomial");
    SquarefreeDecomposition out;
    out.unit = f.lead();
    UPoly g = f.monic();
    if (g.degree() == 0) return out;
    UPoly gp = g.derivative();
    UPoly a = ugcd(g, gp);
    UPoly b = udiv_exact(g, a);
    UPoly c = udiv_exact(gp, a) - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        UPoly d = ugcd(b, c);
        if (d.degree() > 0) out.parts.push_back({d, i});
        b = udiv_exact(b, d);
        c = udiv_exact(c - b.derivative() * d, d);
        // The loop invariant keeps c exact; d divides both by construction.
        ++i;
    }
    return out;
}

namespace detail {

inline std::vector<Int> positive_divisors(Int n) {
    if (n < 0) n = -n;
    std::vector<Int> ds;
    if (n == 0) return ds;
    for (Int d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d * d != n) ds.push_back(n / d);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// Primitive integer image of a rational polynomial (content removed).
inline std::vector<Int> primitive_integer_coeffs(const UPoly& f) {
    Int den = 1;
    for (auto& c : f.coeffs()) den = int_lcm(den, c.den());
    std::vector<Int> z;
    z.reserve(f.coeffs().size());
    Int content = 0;
    for (auto& c : f.coeffs()) {
        Int v = c.num() * (den / c.den());
        z.push_back(v);
        content = int_gcd(content, v < 0 ? Int(-v) : v);
    }
    if (content > 1)
        for (auto& v : z) v /= content;
    return z;
}

}  // namespace detail

// All rational roots of f with multiplicities, found by the rational root
// bound on the primitive integer image.
inline std::vector<std::pair<Rat, int>> rational_roots(const UPoly& f) {
    std::vector<std::pair<Rat, int>> roots;
    if (f.is_zero() || f.degree() == 0) return roots;
    UPoly g = f;
    // Pull out the root at zero first.
    int zero_mult = 0;
    while (g.coeff(0).is_zero() && g.degree() > 0) {
        std::vector<Rat> shifted(g.coeffs().begin() + 1, g.coeffs().end());
        g = UPoly(std::move(shifted));
        ++zero_mult;
    }
    if (zero_mult > 0) roots.push_back({Rat(0), zero_mult});
    if (g.degree() == 0) return roots;
    auto z = detail::primitive_integer_coeffs(g);
    auto ps = detail::positive_divisors(z.front());
    auto qs = detail::positive_divisors(z.back());
    std::vector<Rat> candidates;
    for (auto& p : ps)
        for (auto& q : qs) {
            candidates.push_back(Rat(p, q));
            candidates.push_back(Rat(-p, q));
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (auto& cand : candidates) {
        if (!g.eval(cand).is_zero()) continue;
        int mult = 0;
        UPoly lin({-cand, Rat(1)});
        while (g.eval(cand).is_zero() && g.degree() > 0) {
            g = udiv_exact(g, lin);
            ++mult;
        }
        roots.push_back({cand, mult});
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

struct IrreducibleFactor {
    UPoly factor;  // monic, irreducible over Q
    int multiplicity;
};

struct Factorization {
    Rat unit;
    std::vector<IrreducibleFactor> factors;

    UPoly reassemble() const {
        UPoly r = UPoly::constant(unit);
        for (auto& p : factors) r = r * p.factor.pow(p.multiplicity);
        return r;
    }
};

namespace detail {

// Splits a monic squarefree polynomial with no rational roots into monic
// irreducible factors by Kronecker interpolation. Exponential in principle,
// fine at the degrees this engine produces (<= 8).
inline void kronecker_split(const UPoly& f, std::vector<UPoly>& out) {
    int n = f.degree();
    if (n <= 1) {
        if (n == 1) out.push_back(f);
        return;
    }
    auto z = primitive_integer_coeffs(f);
    UPoly fz;
    {
        std::vector<Rat> cc(z.begin(), z.end());
        fz = UPoly(std::move(cc));
    }
    for (int d = 2; d <= n / 2; ++d) {
        // Evaluation points 0, 1, -1, 2, -2, ...
        std::vector<Rat> pts;
        for (int k = 0; static_cast<int>(pts.size()) < d + 1; ++k) {
            pts.push_back(Rat(k == 0 ? 0 : (k % 2 ? (k + 1) / 2 : -(k / 2))));
        }
        std::vector<std::vector<Int>> choices(d + 1);
        for (int i = 0; i <= d; ++i) {
            Rat v = fz.eval(pts[i]);
            auto ds = positive_divisors(v.num());
            for (auto& dv : ds) {
                choices[i].push_back(dv);
                choices[i].push_back(-dv);
            }
        }
        std::vector<std::size_t> idx(d + 1, 0);
        while (true) {
            // Lagrange interpolation through the chosen divisor values.
            std::vector<Rat> vals(d + 1);
            for (int i = 0; i <= d; ++i) vals[i] = Rat(choices[i][idx[i]]);
            UPoly g;
            for (int i = 0; i <= d; ++i) {
                UPoly basis = UPoly::constant(Rat(1));
                Rat denom(1);
                for (int j = 0; j <= d; ++j) {
                    if (i == j) continue;
                    basis = basis * UPoly({-pts[j], Rat(1)});
                    denom *= pts[i] - pts[j];
                }
                g = g + basis * (vals[i] / denom);
            }
            bool integral = g.degree() == d;
            if (integral)
                for (auto& c : g.coeffs())
                    if (!c.is_integer()) { integral = false; break; }
            if (integral && udivides(g, fz)) {
                UPoly rest = udiv_exact(fz, g).monic();
                UPoly gm = g.monic();
                kronecker_split(gm, out);
                kronecker_split(rest, out);
                return;
            }
            int carry = 0;
            while (carry <= d) {
                if (++idx[carry] < choices[carry].size()) break;
                idx[carry] = 0;
                ++carry;
            }
            if (carry > d) break;
        }
    }
    out.push_back(f.monic());  // irreducible
}

}  // namespace detail

// Complete factorization over Q.
inline Factorization ufactor(const UPoly& f) {
    if (f.is_zero()) throw ZeroForm("ufactor: zero polynomial");
    Factorization out;
    out.unit = f.lead();
    auto sqf = usquarefree(f);
    std::map<std::vector<Rat>, std::pair<UPoly, int>> acc;
    for (auto& part : sqf.parts) {
        UPoly g = part.factor;
        for (auto& [root, mult] : rational_roots(g)) {
            UPoly lin({-root, Rat(1)});
            for (int k = 0; k < mult; ++k) g = udiv_exact(g, lin);
            auto& slot = acc[lin.coeffs()];
            slot.first = lin;
            slot.second += mult * part.multiplicity;
        }
        if (g.degree() > 0) {
            std::vector<UPoly> irr;
            detail::kronecker_split(g, irr);
            for (auto& h : irr) {
                auto& slot = acc[h.coeffs()];
                slot.first = h;
                slot.second += part.multiplicity;
            }
        }
    }
    for (auto& [key, val] : acc) out.factors.push_back({val.first, val.second});
    std::sort(out.factors.begin(), out.factors.end(),
              [](const IrreducibleFactor& a, const IrreducibleFactor& b) {
                  if (a.factor.degree() != b.factor.degree())
                      return a.factor.degree() < b.factor.degree();
                  const auto& ca = a.factor.coeffs();
                  const auto& cb = b.factor.coeffs();
                  for (std::size_t i = ca.size(); i-- > 0;) {
                      if (ca[i] != cb[i]) return ca[i] < cb[i];
                  }
                  return false;
              });
    return out;
}

// Resultant via the Euclidean remainder sequence over Q.
inline Rat uresultant(UPoly a, UPoly b) {
    if (a.is_zero() || b.is_zero()) return Rat(0);
    Rat res(1);
    while (b.degree() > 0) {
        UPoly r = udivmod(a, b).second;
        if (r.is_zero()) return Rat(0);
        // res(a,b) = lc(b)^(deg a - deg r) * (-1)^(deg a * deg b) * res(b,r)
        Rat lc = b.lead();
        Rat scale(1);
        for (int i = 0; i < a.degree() - r.degree(); ++i) scale *= lc;
        if ((a.degree() * b.degree()) % 2 == 1) scale = -scale;
        res *= scale;
        a = std::move(b);
        b = std::move(r);
    }
    // b is a nonzero constant: res = b^deg(a)
    Rat scale(1);
    for (int i = 0; i < a.degree(); ++i) scale *= b.coeff(0);
    return res * scale;
}

}  // namespace feasres
