#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "semiq/bracket.hpp"
#include "semiq/core.hpp"
#include "semiq/diagram.hpp"

namespace semiq {

/// d x d grid of disjoint subsets of [dn] partitioning [dn], with row and
/// column unions of size n. Stored as the cell index of each label, which is
/// canonical by construction. The grid position is significant: cell (i, j)
/// couples the i-th left bracket with the j-th right bracket.
struct CorrelatedTableau {
    int n = 0;
    int d = 0;
    std::vector<std::uint8_t> cell_of;  // label k (0-based) lives at cell_of[k] = i*d + j

    int row_of(int label) const { return cell_of[static_cast<std::size_t>(label)] / d; }
    int col_of(int label) const { return cell_of[static_cast<std::size_t>(label)] % d; }

    /// Labels of cell (i, j), ascending.
    std::vector<int> cell(int i, int j) const {
        std::vector<int> out;
        int want = i * d + j;
        for (int k = 0; k < n * d; ++k)
            if (cell_of[static_cast<std::size_t>(k)] == want) out.push_back(k);
        return out;
    }

    CorrelatedDiagram shape() const {
        std::vector<int> counts(static_cast<std::size_t>(d) * d, 0);
        for (auto c : cell_of) ++counts[c];
        return CorrelatedDiagram(n, d, std::move(counts));
    }

    void validate() const {
        if (n < 1 || d < 1 || cell_of.size() != static_cast<std::size_t>(n) * d)
            throw InputError("correlated tableau: bad dimensions");
        shape();  // checks row/column sums
    }

    bool operator==(const CorrelatedTableau& o) const { return n == o.n && d == o.d && cell_of == o.cell_of; }
};

struct TableauHash {
    std::size_t operator()(const CorrelatedTableau& t) const {
        return static_cast<std::size_t>(fnv1a(t.cell_of.data(), t.cell_of.size()));
    }
};

enum class GraphClass { Disconnected, ConnectedSimple, ConnectedMulti };

inline const char* to_string(GraphClass g) {
    switch (g) {
        case GraphClass::Disconnected: return "Disconnected";
        case GraphClass::ConnectedSimple: return "ConnectedSimple";
        default: return "ConnectedMulti";
    }
}

/// Bipartite multigraph view: left vertices = rows, right vertices = columns,
/// one edge per label at its cell.
struct BipartiteMultigraph {
    int n = 0;
    int d = 0;
    std::vector<std::pair<int, int>> endpoint;  // endpoint[label] = (left, right)

    std::vector<int> left_degree() const {
        std::vector<int> deg(static_cast<std::size_t>(d), 0);
        for (auto& [l, r] : endpoint) ++deg[static_cast<std::size_t>(l)];
        return deg;
    }
    std::vector<int> right_degree() const {
        std::vector<int> deg(static_cast<std::size_t>(d), 0);
        for (auto& [l, r] : endpoint) ++deg[static_cast<std::size_t>(r)];
        return deg;
    }
};

inline BipartiteMultigraph graph_of(const CorrelatedTableau& C) {
    BipartiteMultigraph g;
    g.n = C.n;
    g.d = C.d;
    g.endpoint.resize(static_cast<std::size_t>(C.n) * C.d);
    for (int k = 0; k < C.n * C.d; ++k) g.endpoint[static_cast<std::size_t>(k)] = {C.row_of(k), C.col_of(k)};
    return g;
}

inline GraphClass classify(const CorrelatedTableau& C) {
    CorrelatedDiagram D = C.shape();
    bool simple = std::all_of(D.counts.begin(), D.counts.end(), [](int v) { return v <= 1; });
    if (!diagram_connected(D)) return GraphClass::Disconnected;
    return simple ? GraphClass::ConnectedSimple : GraphClass::ConnectedMulti;
}

namespace detail {

/// Reading word of grid row i: cells left to right, ascending within a cell.
inline void read_row_word(const CorrelatedTableau& C, int i, std::vector<std::uint8_t>& out) {
    out.clear();
    for (int j = 0; j < C.d; ++j)
        for (int k = 0; k < C.n * C.d; ++k)
            if (C.cell_of[static_cast<std::size_t>(k)] == i * C.d + j) out.push_back(static_cast<std::uint8_t>(k));
}

/// Reading word of grid column j: cells top to bottom, ascending within a cell.
inline void read_col_word(const CorrelatedTableau& C, int j, std::vector<std::uint8_t>& out) {
    out.clear();
    for (int i = 0; i < C.d; ++i)
        for (int k = 0; k < C.n * C.d; ++k)
            if (C.cell_of[static_cast<std::size_t>(k)] == i * C.d + j) out.push_back(static_cast<std::uint8_t>(k));
}

}  // namespace detail

/// Monomial pair read from a tableau: rows of S along grid rows, rows of T
/// along grid columns, ascending inside each cell. Signs are the sorting
/// parities of the reading words, so (S, T) with those signs equals C exactly.
inline std::pair<BracketMonomial, BracketMonomial> from_correlated(const CorrelatedTableau& C) {
    BracketMonomial S, T;
    S.n = T.n = C.n;
    S.d = T.d = C.d;
    S.rows.reserve(static_cast<std::size_t>(C.n) * C.d);
    T.rows.reserve(static_cast<std::size_t>(C.n) * C.d);
    std::vector<std::uint8_t> word;
    for (int i = 0; i < C.d; ++i) {
        detail::read_row_word(C, i, word);
        S.sign *= sort_sign(word);
        std::sort(word.begin(), word.end());
        S.rows.insert(S.rows.end(), word.begin(), word.end());
    }
    for (int j = 0; j < C.d; ++j) {
        detail::read_col_word(C, j, word);
        T.sign *= sort_sign(word);
        std::sort(word.begin(), word.end());
        T.rows.insert(T.rows.end(), word.begin(), word.end());
    }
    return {S, T};
}

/// Tableau of a monomial pair: label k lands at (row of k in S, row of k in T).
/// The returned sign relates the inputs to the tableau as basis elements:
/// S (x) T = sign * C.
inline std::pair<CorrelatedTableau, int> to_correlated(const BracketMonomial& S, const BracketMonomial& T) {
    if (S.n != T.n || S.d != T.d) throw InputError("to_correlated: dimension mismatch");
    int n = S.n, d = S.d, dn = n * d;
    CorrelatedTableau C;
    C.n = n;
    C.d = d;
    C.cell_of.assign(static_cast<std::size_t>(dn), 0);
    std::vector<int> srow(static_cast<std::size_t>(dn), -1), trow(static_cast<std::size_t>(dn), -1);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j) {
            srow[static_cast<std::size_t>(S.at(i, j))] = i;
            trow[static_cast<std::size_t>(T.at(i, j))] = i;
        }
    for (int k = 0; k < dn; ++k) {
        if (srow[static_cast<std::size_t>(k)] < 0 || trow[static_cast<std::size_t>(k)] < 0)
            throw InputError("to_correlated: monomials must cover [dn]");
        C.cell_of[static_cast<std::size_t>(k)] =
            static_cast<std::uint8_t>(srow[static_cast<std::size_t>(k)] * d + trow[static_cast<std::size_t>(k)]);
    }
    auto [Sr, Tr] = from_correlated(C);
    return {C, S.sign * T.sign * Sr.sign * Tr.sign};
}

/// Diagonal relabeling: sends label k to perm[k]. The tableau basis carries
/// the diagonal action without signs (both factor parities cancel).
inline std::pair<CorrelatedTableau, int> diagonal_action(const CorrelatedTableau& C, const std::vector<std::uint8_t>& perm) {
    int dn = C.n * C.d;
    if (static_cast<int>(perm.size()) != dn) throw InputError("diagonal_action: bad permutation size");
    CorrelatedTableau out;
    out.n = C.n;
    out.d = C.d;
    out.cell_of.assign(static_cast<std::size_t>(dn), 0);
    std::vector<int> hit(static_cast<std::size_t>(dn), 0);
    for (int k = 0; k < dn; ++k) {
        int img = perm[static_cast<std::size_t>(k)];
        if (img < 0 || img >= dn || hit[static_cast<std::size_t>(img)]++) throw InputError("diagonal_action: not a permutation");
        out.cell_of[static_cast<std::size_t>(img)] = C.cell_of[static_cast<std::size_t>(k)];
    }
    return {out, 1};
}

/// Independent relabelings of the two factors, routed through the monomial
/// pair so every parity is tracked exactly.
inline std::pair<CorrelatedTableau, int> bimodule_action(const CorrelatedTableau& C, const std::vector<std::uint8_t>& sigma,
                                                         const std::vector<std::uint8_t>& tau) {
    auto [S, T] = from_correlated(C);
    std::vector<std::uint8_t> sraw(S.rows.size()), traw(T.rows.size());
    for (std::size_t idx = 0; idx < S.rows.size(); ++idx) sraw[idx] = sigma[S.rows[idx]];
    for (std::size_t idx = 0; idx < T.rows.size(); ++idx) traw[idx] = tau[T.rows[idx]];
    NormalizedBracket ns = normalize_bracket_rows(C.n, C.d, sraw, S.sign);
    NormalizedBracket nt = normalize_bracket_rows(C.n, C.d, traw, T.sign);
    if (ns.is_zero || nt.is_zero) throw InternalError("bimodule_action: relabeling produced a repeat");
    return to_correlated(ns.mono, nt.mono);
}

/// Formal Q-linear combination of correlated tableaux for fixed (n, d).
struct Expression {
    int n = 0;
    int d = 0;
    std::unordered_map<CorrelatedTableau, Rat, TableauHash> terms;

    Expression() = default;
    Expression(int n_, int d_) : n(n_), d(d_) {}

    void add(const CorrelatedTableau& C, const Rat& c) {
        if (C.n != n || C.d != d) throw InputError("expression: dimension mismatch");
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(C, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    Expression& operator+=(const Expression& o) {
        if (o.n != n || o.d != d) throw InputError("expression: dimension mismatch");
        for (const auto& [k, c] : o.terms) add(k, c);
        return *this;
    }

    Expression& operator*=(const Rat& c) {
        if (c == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [k, v] : terms) v *= c;
        return *this;
    }

    bool is_zero() const { return terms.empty(); }
};

inline Expression operator-(Expression a, const Expression& b) {
    Expression nb = b;
    nb *= Rat(-1);
    a += nb;
    return a;
}

/// Bilinear form with the tableau basis orthonormal.
inline Rat bilinear_form(const Expression& a, const Expression& b) {
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

/// Tensor of two single-factor expressions, with each basis pair converted to
/// a tableau and the conversion sign absorbed into the coefficient.
inline Expression tensor_expression(const FactorExpression& a, const FactorExpression& b) {
    if (a.n != b.n || a.d != b.d) throw InputError("tensor: dimension mismatch");
    Expression out(a.n, a.d);
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            BracketMonomial ma{a.n, a.d, ka, 1}, mb{b.n, b.d, kb, 1};
            auto [C, sg] = to_correlated(ma, mb);
            out.add(C, ca * cb * sg);
        }
    return out;
}

/// All label assignments of a diagram: cells row-major, each taking the
/// lexicographically least available sorted subset first.
inline void enumerate_assignments(const CorrelatedDiagram& D, const std::function<bool(const CorrelatedTableau&)>& visit) {
    int d = D.d, dn = D.n * D.d;
    std::vector<int> cells;  // nonempty cell ids, row-major
    for (int c = 0; c < d * d; ++c)
        if (D.counts[static_cast<std::size_t>(c)] > 0) cells.push_back(c);
    CorrelatedTableau C;
    C.n = D.n;
    C.d = d;
    C.cell_of.assign(static_cast<std::size_t>(dn), 0);
    std::vector<bool> used(static_cast<std::size_t>(dn), false);
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t ci) {
        if (stop) return;
        if (ci == cells.size()) {
            if (!visit(C)) stop = true;
            return;
        }
        int cell = cells[ci];
        int need = D.counts[static_cast<std::size_t>(cell)];
        std::vector<int> chosen;
        std::function<void(int, int)> pick = [&](int got, int minv) {
            if (stop) return;
            if (got == need) {
                rec(ci + 1);
                return;
            }
            for (int v = minv; v < dn; ++v) {
                if (used[static_cast<std::size_t>(v)]) continue;
                used[static_cast<std::size_t>(v)] = true;
                C.cell_of[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(cell);
                pick(got + 1, v + 1);
                used[static_cast<std::size_t>(v)] = false;
                if (stop) return;
            }
        };
        pick(0, 0);
    };
    rec(0);
}

/// Every correlated tableau for (n, d): diagrams in descending-lex order, then
/// assignments in lexicographic order. Fixed so reports are reproducible.
inline void enumerate_tableaux(int n, int d, const std::function<bool(const CorrelatedTableau&)>& visit) {
    enumerate_diagrams(n, d, [&](const CorrelatedDiagram& D) {
        bool keep = true;
        enumerate_assignments(D, [&](const CorrelatedTableau& C) {
            keep = visit(C);
            return keep;
        });
        return keep;
    });
}

}  // namespace semiq
