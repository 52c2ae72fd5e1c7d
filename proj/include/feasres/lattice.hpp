#pragma once

// Integer lattice bookkeeping for weighted blowups of cyclic quotients.
// The ambient germ is C^n / (1/r)(a_1..a_n) with lattice
//   Nbar = Z^n + Z * (a/r).
// Subdividing at a weight vector v = b/r0 produces charts U_i whose local
// fundamental group is Nbar / (span of {e_j : j != i} and v). This header
// computes that quotient group and the induced residues on the chart
// coordinates, plus membership and primitivity tests for v, and the
// normal form of a terminal cyclic quotient action.

#include "feasres/errors.hpp"
#include "feasres/rational.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace feasres {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;  // row major, square

namespace lattice_detail {

inline IntMat identity(int n) {
    IntMat m(n, IntVec(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

// Smith normal form of a square integer matrix. Returns the diagonal and
// Uinv where the row transform U satisfies U * A * V = diag. Uinv is needed
// to read off generators of the quotient Z^n / A Z^n = Z^n / Uinv D Z^n.
struct SnfResult {
    IntVec diag;
    IntMat uinv;
};

inline SnfResult smith_normal_form(IntMat a) {
    int n = static_cast<int>(a.size());
    IntMat uinv = identity(n);

    auto row_swap = [&](int i, int j) {
        std::swap(a[i], a[j]);
        for (int k = 0; k < n; ++k) std::swap(uinv[k][i], uinv[k][j]);
    };
    auto row_neg = [&](int i) {
        for (int k = 0; k < n; ++k) a[i][k] = -a[i][k];
        for (int k = 0; k < n; ++k) uinv[k][i] = -uinv[k][i];
    };
    auto row_add = [&](int i, int j, const Int& q) {  // R_i += q R_j
        for (int k = 0; k < n; ++k) a[i][k] += q * a[j][k];
        for (int k = 0; k < n; ++k) uinv[k][j] -= q * uinv[k][i];
    };
    auto col_swap = [&](int i, int j) {
        for (int k = 0; k < n; ++k) std::swap(a[k][i], a[k][j]);
    };
    auto col_neg = [&](int i) {
        for (int k = 0; k < n; ++k) a[k][i] = -a[k][i];
    };
    auto col_add = [&](int i, int j, const Int& q) {  // C_i += q C_j
        for (int k = 0; k < n; ++k) a[k][i] += q * a[k][j];
    };

    for (int t = 0; t < n; ++t) {
        // find smallest nonzero pivot in the trailing block
        while (true) {
            int pi = -1, pj = -1;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j) {
                    if (a[i][j] == 0) continue;
                    if (pi < 0 || boost::multiprecision::abs(a[i][j]) <
                                      boost::multiprecision::abs(a[pi][pj])) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) break;  // block is zero
            if (pi != t) row_swap(pi, t);
            if (pj != t) col_swap(pj, t);
            if (a[t][t] < 0) row_neg(t);
            bool clean = true;
            for (int i = t + 1; i < n; ++i) {
                if (a[i][t] == 0) continue;
                Int q = a[i][t] / a[t][t];
                row_add(i, t, -q);
                if (a[i][t] != 0) clean = false;
            }
            for (int j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                Int q = a[t][j] / a[t][t];
                col_add(j, t, -q);
                if (a[t][j] != 0) clean = false;
            }
            if (clean) {
                // enforce divisibility: fold any non-multiple into this block
                bool redo = false;
                for (int i = t + 1; i < n && !redo; ++i)
                    for (int j = t + 1; j < n && !redo; ++j)
                        if (a[i][j] % a[t][t] != 0) {
                            row_add(t, i, 1);
                            redo = true;
                        }
                if (!redo) break;
            }
        }
    }
    SnfResult r;
    r.diag.resize(n);
    for (int i = 0; i < n; ++i) r.diag[i] = a[i][i];
    r.uinv = std::move(uinv);
    return r;
}

// Solves A x = rhs exactly over Q by fraction-free Gaussian elimination.
inline std::vector<Rat> solve_rational(IntMat a, std::vector<Rat> rhs) {
    int n = static_cast<int>(a.size());
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = Rat(a[i][j]);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (!m[i][c].is_zero()) { p = i; break; }
        if (p < 0) throw EngineError("solve_rational: singular matrix");
        std::swap(m[p], m[c]);
        std::swap(rhs[p], rhs[c]);
        Rat inv = Rat(1) / m[c][c];
        for (int j = c; j < n; ++j) m[c][j] *= inv;
        rhs[c] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == c || m[i][c].is_zero()) continue;
            Rat f = m[i][c];
            for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
            rhs[i] -= f * rhs[c];
        }
    }
    return rhs;
}

}  // namespace lattice_detail

// Does b/r0 lie in Z^n + Z * (a/r)?
inline bool weight_in_lattice(int n, long long r, const std::vector<long long>& a,
                              long long r0, const std::vector<long long>& b) {
    for (long long k = 0; k < r; ++k) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            // need b_i/r0 - k a_i / r integral
            Rat d = Rat(b[i], r0) - Rat(k * a[i], r);
            ok = d.is_integer();
        }
        if (ok) return true;
    }
    return false;
}

// Is b/r0 primitive in the lattice (not an integer multiple of a shorter
// lattice vector)?
inline bool weight_primitive(int n, long long r, const std::vector<long long>& a,
                             long long r0, const std::vector<long long>& b) {
    if (!weight_in_lattice(n, r, a, r0, b)) return false;
    long long bmax = 0;
    for (auto v : b) bmax = std::max(bmax, v);
    for (long long m = 2; m <= bmax * r; ++m)
        if (weight_in_lattice(n, r, a, r0 * m, b)) return false;
    return true;
}

// The quotient group attached to one blowup chart, as a cyclic action on
// the chart coordinates. order == 1 means the chart is a manifold point.
struct ChartQuotient {
    long long order = 1;
    std::vector<long long> residues;  // size n, reduced mod order
};

inline ChartQuotient chart_quotient(int n, long long r, const std::vector<long long>& a,
                                    long long r0, const std::vector<long long>& b,
                                    int chart) {
    using namespace lattice_detail;
    if (!weight_in_lattice(n, r, a, r0, b))
        throw EngineError("chart_quotient: weight not in the ambient lattice");

    // Scale everything by R = r * r0 so every generator is integral.
    long long R = r * r0;
    // Lattice L = R * Nbar, generated by R e_i and (R/r) a. Reduce the n+1
    // generators to a basis via SNF on the n x (n+1) matrix; cheaper here:
    // append and take HNF by column reduction. We only need *some* basis, so
    // run SNF machinery on the square matrix [R I | replace last col by a']
    // is wrong in general; instead do a direct column style reduction.
    std::vector<IntVec> gens;
    for (int i = 0; i < n; ++i) {
        IntVec e(n, 0);
        e[i] = R;
        gens.push_back(e);
    }
    {
        IntVec av(n);
        for (int i = 0; i < n; ++i) av[i] = Int(R / r) * a[i];
        gens.push_back(av);
    }
    // Column HNF by integer gcd steps: reduce generator list to n columns.
    IntMat h(n, IntVec(n, 0));
    {
        // work on a copy as columns
        std::vector<IntVec> cols = gens;
        for (int row = 0; row < n; ++row) {
            // gcd-combine all columns with nonzero entry in this row into one
            int keep = -1;
            for (std::size_t c = row; c < cols.size(); ++c) {
                if (cols[c][row] == 0) continue;
                if (keep < 0) {
                    keep = static_cast<int>(c);
                    continue;
                }
                // extended gcd step between cols[keep] and cols[c]
                while (cols[c][row] != 0) {
                    Int q = cols[keep][row] / cols[c][row];
                    for (int k = 0; k < n; ++k) cols[keep][k] -= q * cols[c][k];
                    std::swap(cols[keep], cols[c]);
                }
            }
            if (keep < 0) throw EngineError("chart_quotient: degenerate lattice");
            std::swap(cols[row], cols[keep]);
            if (cols[row][row] < 0)
                for (int k = 0; k < n; ++k) cols[row][k] = -cols[row][k];
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) h[i][j] = cols[j][i];
        // basis sanity: |det h| must equal R^n / r, the index scale of Nbar
        Int det = 1;
        for (int i = 0; i < n; ++i) det *= h[i][i];  // lower triangular
        Int expected = boost::multiprecision::pow(Int(R), n) / r;
        if (boost::multiprecision::abs(det) != expected)
            throw EngineError("chart_quotient: lattice basis reduction failed");
    }

    // Sublattice L' generated by R e_j (j != chart) and R v = (R/r0) b.
    IntMat gp(n, IntVec(n, 0));
    for (int j = 0, col = 0; j < n; ++j) {
        if (j == chart) continue;
        gp[j][col] = R;
        ++col;
    }
    for (int i = 0; i < n; ++i) gp[i][n - 1] = Int(R / r0) * b[i];

    // Express L' in the basis h: solve h * C = gp column by column.
    IntMat c(n, IntVec(n, 0));
    for (int col = 0; col < n; ++col) {
        std::vector<Rat> rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = Rat(gp[i][col]);
        auto x = solve_rational(h, rhs);
        for (int i = 0; i < n; ++i) {
            if (!x[i].is_integer())
                throw EngineError("chart_quotient: chart sublattice not contained in Nbar");
            c[i][col] = x[i].num();
        }
    }

    auto snf = smith_normal_form(c);
    // Quotient = sum Z/d_k with generator columns of h * uinv.
    long long order = 1;
    int gen_index = -1;
    for (int k = 0; k < n; ++k) {
        Int d = snf.diag[k] < 0 ? Int(-snf.diag[k]) : snf.diag[k];
        if (d == 0) throw EngineError("chart_quotient: quotient not finite");
        if (d > 1) {
            if (order > 1) throw EngineError("chart_quotient: quotient not cyclic");
            order = d.convert_to<long long>();
            gen_index = k;
        }
    }
    ChartQuotient out;
    out.order = order;
    out.residues.assign(n, 0);
    if (order == 1) return out;

    // Generator gamma of Nbar / N'_chart, as a rational vector: column
    // gen_index of h * uinv, divided by R.
    std::vector<Rat> gamma(n);
    for (int i = 0; i < n; ++i) {
        Int acc = 0;
        for (int k = 0; k < n; ++k) acc += h[i][k] * snf.uinv[k][gen_index];
        gamma[i] = Rat(acc, R);
    }
    // Residue of the action on chart coordinate j: write gamma in the basis
    // {e_j (j != chart), v}; the coefficients mod 1 are the residues.
    Rat ci = gamma[chart] * Rat(r0, b[chart]);
    for (int j = 0; j < n; ++j) {
        Rat cj = (j == chart) ? ci : gamma[j] - ci * Rat(b[j], r0);
        Rat scaled = cj * Rat(order);
        if (!scaled.is_integer())
            throw EngineError("chart_quotient: non-integral residue");
        long long res = (scaled.num() % Int(order)).convert_to<long long>();
        out.residues[j] = ((res % order) + order) % order;
    }
    return out;
}

// Normal form of a three dimensional terminal cyclic quotient: finds a unit
// t mod r and a coordinate permutation sending the residues to
// (s, r - s, 1) with gcd(s, r) = 1 and 1 <= s <= r - s. Returns s, or
// nothing when the action is not of terminal type.
struct TerminalQuotientForm {
    long long s;
    long long unit;            // multiplier applied to the residues
    std::array<int, 3> perm;   // new coordinate k was old coordinate perm[k]
};

inline std::optional<TerminalQuotientForm> terminal_quotient_form(
    long long r, const std::array<long long, 3>& a) {
    if (r == 1) return TerminalQuotientForm{0, 1, {0, 1, 2}};
    std::array<long long, 3> res;
    for (int i = 0; i < 3; ++i) res[i] = ((a[i] % r) + r) % r;
    for (long long t = 1; t < r; ++t) {
        if (std::gcd(t, r) != 1) continue;
        std::array<long long, 3> m;
        for (int i = 0; i < 3; ++i) m[i] = t * res[i] % r;
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end());
        do {
            long long s = m[idx[0]];
            if (s >= 1 && s <= r - s && m[idx[1]] == r - s && m[idx[2]] == 1 &&
                std::gcd(s, r) == 1)
                return TerminalQuotientForm{s, t, idx};
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
    return std::nullopt;
}

}  // namespace feasres
