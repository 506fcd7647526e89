#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "semiq/core.hpp"

namespace semiq {

/// Parity of the permutation that sorts `w` ascending: +1 even, -1 odd.
/// Entries must be distinct.
inline int sort_sign(const std::vector<std::uint8_t>& w) {
    int inv = 0;
    for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t b = a + 1; b < w.size(); ++b)
            if (w[a] > w[b]) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
}

/// Product of d antisymmetric brackets, stored as a d x n tableau over [dn]
/// (labels 0-based internally). Rows are kept strictly ascending; the sign
/// carries the parity absorbed while sorting. Row order is significant.
struct BracketMonomial {
    int n = 0;
    int d = 0;
    std::vector<std::uint8_t> rows;  // row-major, size d*n
    int sign = 1;

    int at(int i, int j) const { return rows[static_cast<std::size_t>(i) * n + j]; }

    bool operator==(const BracketMonomial& o) const {
        return n == o.n && d == o.d && sign == o.sign && rows == o.rows;
    }
};

struct NormalizedBracket {
    bool is_zero = false;
    BracketMonomial mono;  // valid only when !is_zero
};

/// Sort each row ascending, tracking parity. A repeat inside one row yields
/// the distinguished zero. A repeat across rows is rejected: such a grid is
/// not a repetition-free monomial at all.
inline NormalizedBracket normalize_bracket_rows(int n, int d, const std::vector<std::uint8_t>& raw, int sign = 1) {
    if (static_cast<int>(raw.size()) != n * d) throw InputError("bracket rows: wrong entry count");
    int dn = d * n;
    std::vector<int> seen(static_cast<std::size_t>(dn), 0);
    for (auto e : raw) {
        if (e >= dn) throw InputError("bracket rows: entry out of range");
        ++seen[e];
    }
    NormalizedBracket out;
    out.mono.n = n;
    out.mono.d = d;
    out.mono.rows = raw;
    out.mono.sign = sign;
    for (int i = 0; i < d; ++i) {
        auto lo = out.mono.rows.begin() + static_cast<std::ptrdiff_t>(i) * n;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (lo[a] == lo[b]) {
                    out.is_zero = true;
                    return out;
                }
        int inv = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (lo[a] > lo[b]) ++inv;
        if (inv % 2) out.mono.sign = -out.mono.sign;
        std::sort(lo, lo + n);
    }
    for (int e = 0; e < dn; ++e)
        if (seen[static_cast<std::size_t>(e)] > 1)
            throw InputError("bracket rows: label repeated across rows");
    return out;
}

/// Strictly increasing along rows (by storage) and down columns; the column
/// condition subsumes the canonical row order.
inline bool is_standard(const BracketMonomial& m) {
    for (int i = 0; i + 1 < m.d; ++i)
        for (int j = 0; j < m.n; ++j)
            if (m.at(i, j) >= m.at(i + 1, j)) return false;
    return true;
}

struct ByteVecHash {
    std::size_t operator()(const std::vector<std::uint8_t>& v) const {
        return static_cast<std::size_t>(fnv1a(v.data(), v.size()));
    }
};

/// Formal Q-linear combination of bracket monomials for fixed (n, d).
/// Keys are sorted-row tableaux with sign +1; all sign lives in coefficients.
struct FactorExpression {
    int n = 0;
    int d = 0;
    std::unordered_map<std::vector<std::uint8_t>, Rat, ByteVecHash> terms;

    FactorExpression() = default;
    FactorExpression(int n_, int d_) : n(n_), d(d_) {}

    void add(const BracketMonomial& m, const Rat& c) {
        if (m.n != n || m.d != d) throw InputError("factor expression: dimension mismatch");
        Rat v = c * m.sign;
        auto [it, fresh] = terms.emplace(m.rows, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) terms.erase(it);
        }
    }

    void add_key(const std::vector<std::uint8_t>& rows, const Rat& c) {
        auto [it, fresh] = terms.emplace(rows, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    FactorExpression& operator+=(const FactorExpression& o) {
        if (o.n != n || o.d != d) throw InputError("factor expression: dimension mismatch");
        for (const auto& [k, c] : o.terms) add_key(k, c);
        return *this;
    }

    FactorExpression& operator*=(const Rat& c) {
        if (c == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [k, v] : terms) v *= c;
        return *this;
    }

    bool is_zero() const { return terms.empty(); }
};

/// Bilinear form with the monomials as an orthonormal basis.
inline Rat bilinear_form_factor(const FactorExpression& a, const FactorExpression& b) {
    if (a.n != b.n || a.d != b.d) throw InputError("bilinear form: dimension mismatch");
    Rat s = 0;
    const auto& small = a.terms.size() <= b.terms.size() ? a : b;
    const auto& big = a.terms.size() <= b.terms.size() ? b : a;
    for (const auto& [k, c] : small.terms) {
        auto it = big.terms.find(k);
        if (it != big.terms.end()) s += c * it->second;
    }
    return s;
}

/// All repetition-free monomials for (n, d): ordered choices of sorted rows,
/// lexicographic by row-major entries. Count is (dn)!/(n!)^d.
inline void enumerate_monomials(int n, int d, const std::function<bool(const BracketMonomial&)>& visit) {
    int dn = n * d;
    std::vector<std::uint8_t> rows(static_cast<std::size_t>(dn));
    std::vector<bool> used(static_cast<std::size_t>(dn), false);
    bool stop = false;
    std::function<void(int)> rec = [&](int row) {
        if (stop) return;
        if (row == d) {
            BracketMonomial m{n, d, rows, 1};
            if (!visit(m)) stop = true;
            return;
        }
        // choose a strictly ascending row from the unused labels
        std::function<void(int, int)> pick = [&](int pos, int minv) {
            if (stop) return;
            if (pos == n) {
                rec(row + 1);
                return;
            }
            for (int v = minv; v < dn; ++v) {
                if (used[static_cast<std::size_t>(v)]) continue;
                used[static_cast<std::size_t>(v)] = true;
                rows[static_cast<std::size_t>(row) * n + pos] = static_cast<std::uint8_t>(v);
                pick(pos + 1, v + 1);
                used[static_cast<std::size_t>(v)] = false;
                if (stop) return;
            }
        };
        pick(0, 0);
    };
    rec(0);
}

}  // namespace semiq
