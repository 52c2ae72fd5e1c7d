#pragma once

// Weighted-homogeneous binary forms in the coordinates z and u. The z
// variable may carry an integer weight k >= 1 (u always has weight 1), so a
// form of weighted degree D is a sum of monomials z^i u^j with k*i + j = D.
// Factorization reduces to the univariate kernel by setting u = 1.

#include "feasres/errors.hpp"
#include "feasres/mpoly.hpp"
#include "feasres/univariate.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace feasres {

class BinaryForm {
public:
    // coeffs[i] is the coefficient of z^i u^(D - k*i).
    BinaryForm(std::vector<Rat> coeffs, int weighted_degree, int z_weight = 1)
        : c_(std::move(coeffs)), deg_(weighted_degree), k_(z_weight) {
        if (k_ < 1) throw EngineError("BinaryForm: z weight must be positive");
        if (deg_ < 0) throw EngineError("BinaryForm: negative degree");
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
        if (static_cast<int>(c_.size()) - 1 > deg_ / k_)
            throw EngineError("BinaryForm: z power exceeds weighted degree");
    }

    // Reads a form off an MPoly that must involve only z and u and be
    // weighted-homogeneous for the given z weight.
    static BinaryForm from_mpoly(const MPoly& p, int z_weight = 1) {
        if (p.is_zero()) throw ZeroForm("BinaryForm: zero polynomial");
        int deg = -1;
        for (auto& [e, c] : p.terms()) {
            if (e[0] != 0 || e[1] != 0)
                throw HypothesisViolated("BinaryForm: polynomial involves x or y");
            int d = z_weight * e[2] + e[3];
            if (deg < 0) deg = d;
            else if (d != deg)
                throw HypothesisViolated("BinaryForm: not weighted-homogeneous");
        }
        std::vector<Rat> cc(deg / z_weight + 1, Rat(0));
        for (auto& [e, c] : p.terms()) cc[e[2]] = c;
        return BinaryForm(std::move(cc), deg, z_weight);
    }

    MPoly to_mpoly() const {
        MPoly p;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            p.add_term({0, 0, static_cast<int>(i), deg_ - k_ * static_cast<int>(i)}, c_[i]);
        }
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int weighted_degree() const { return deg_; }
    int z_weight() const { return k_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    bool operator==(const BinaryForm& o) const {
        return c_ == o.c_ && deg_ == o.deg_ && k_ == o.k_;
    }

    std::string str() const { return is_zero() ? "0" : to_mpoly().str(); }

    // p(t) = form(t, 1).
    UPoly dehomogenized() const { return UPoly(c_); }

private:
    std::vector<Rat> c_;
    int deg_;
    int k_;
};

struct FormFactor {
    BinaryForm factor;
    int multiplicity;
};

struct FactorStructure {
    Rat unit;
    std::vector<FormFactor> parts;  // z power first, then u power, then the rest

    BinaryForm reassemble(int z_weight) const {
        MPoly p(unit);
        for (auto& f : parts) {
            MPoly fp = f.factor.to_mpoly();
            for (int i = 0; i < f.multiplicity; ++i) p = p * fp;
        }
        return BinaryForm::from_mpoly(p, z_weight);
    }
};

namespace detail {

inline BinaryForm homogenize_factor(const UPoly& q, int D_unused, int k) {
    (void)D_unused;
    int d = q.degree();
    std::vector<Rat> cc(q.coeffs());
    return BinaryForm(std::move(cc), k * d, k);
}

}  // namespace detail

// Squarefree decomposition of a binary form over Q: the z and u monomial
// factors carry explicit multiplicities, the rest comes from Yun's algorithm
// on the dehomogenization. Throws ZeroForm on the zero form.
inline FactorStructure squarefree_decompose(const BinaryForm& b) {
    if (b.is_zero()) throw ZeroForm("squarefree_decompose: zero form");
    FactorStructure out;
    int k = b.z_weight();
    UPoly p = b.dehomogenized();
    int mz = 0;
    while (p.coeff(mz).is_zero()) ++mz;
    if (mz > 0) {
        std::vector<Rat> shifted(p.coeffs().begin() + mz, p.coeffs().end());
        p = UPoly(std::move(shifted));
    }
    int mu = b.weighted_degree() - k * (mz + p.degree());
    auto sqf = usquarefree(p);
    out.unit = sqf.unit;
    if (mz > 0)
        out.parts.push_back({BinaryForm({Rat(0), Rat(1)}, k, k), mz});
    if (mu > 0)
        out.parts.push_back({BinaryForm({Rat(1)}, 1, k), mu});
    for (auto& part : sqf.parts)
        out.parts.push_back({detail::homogenize_factor(part.factor, 0, k), part.multiplicity});
    return out;
}

// Complete irreducible factorization over Q, same factor conventions.
inline FactorStructure factor_form(const BinaryForm& b) {
    if (b.is_zero()) throw ZeroForm("factor_form: zero form");
    FactorStructure out;
    int k = b.z_weight();
    UPoly p = b.dehomogenized();
    int mz = 0;
    while (p.coeff(mz).is_zero()) ++mz;
    if (mz > 0) {
        std::vector<Rat> shifted(p.coeffs().begin() + mz, p.coeffs().end());
        p = UPoly(std::move(shifted));
    }
    int mu = b.weighted_degree() - k * (mz + p.degree());
    auto fac = ufactor(p);
    out.unit = fac.unit;
    if (mz > 0)
        out.parts.push_back({BinaryForm({Rat(0), Rat(1)}, k, k), mz});
    if (mu > 0)
        out.parts.push_back({BinaryForm({Rat(1)}, 1, k), mu});
    for (auto& part : fac.factors)
        out.parts.push_back({detail::homogenize_factor(part.factor, 0, k), part.multiplicity});
    return out;
}

// Exact k-th root of a binary form over Q, if one exists: every squarefree
// multiplicity (including the z and u powers) must be divisible by k and the
// scalar unit must have an exact rational k-th root.
inline std::optional<BinaryForm> perfect_power(const BinaryForm& b, int k) {
    if (k <= 0) throw EngineError("perfect_power: k must be positive");
    if (b.is_zero()) return BinaryForm({}, 0, b.z_weight());
    if (b.weighted_degree() % k != 0) return std::nullopt;
    auto sqf = squarefree_decompose(b);
    auto root_unit = sqf.unit.kth_root(static_cast<unsigned>(k));
    if (!root_unit) return std::nullopt;
    MPoly acc(*root_unit);
    for (auto& part : sqf.parts) {
        if (part.multiplicity % k != 0) return std::nullopt;
        MPoly fp = part.factor.to_mpoly();
        for (int i = 0; i < part.multiplicity / k; ++i) acc = acc * fp;
    }
    return BinaryForm::from_mpoly(acc, b.z_weight());
}

}  // namespace feasres
