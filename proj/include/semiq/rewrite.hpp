#pragma once

#include <algorithm>
#include <deque>
#include <vector>

#include "semiq/core.hpp"
#include "semiq/correlated.hpp"
#include "semiq/straighten.hpp"

namespace semiq {

/// Signed sum of diagonal relabelings over all permutations of the chosen
/// labels. Alternating in more copies of V (x) W than its dimension, so the
/// result lies in the kernel. Labels must sit in pairwise distinct cells.
inline Expression alt_relation(const CorrelatedTableau& C, const std::vector<int>& labels) {
    int n = C.n, d = C.d, dn = n * d;
    int need = n * n + 1;
    if (static_cast<int>(labels.size()) != need) throw InputError("alt_relation: need n^2+1 labels");
    std::vector<int> cells;
    for (int l : labels) {
        if (l < 0 || l >= dn) throw InputError("alt_relation: label out of range");
        cells.push_back(C.cell_of[static_cast<std::size_t>(l)]);
    }
    std::sort(cells.begin(), cells.end());
    if (std::adjacent_find(cells.begin(), cells.end()) != cells.end())
        throw InputError("alt_relation: labels must lie in pairwise distinct cells");

    std::vector<int> sorted_labels(labels);
    std::sort(sorted_labels.begin(), sorted_labels.end());
    Expression out(n, d);
    std::vector<int> perm(sorted_labels);
    do {
        int inv = 0;
        for (std::size_t a = 0; a < perm.size(); ++a)
            for (std::size_t b = a + 1; b < perm.size(); ++b)
                if (perm[a] > perm[b]) ++inv;
        std::vector<std::uint8_t> p(static_cast<std::size_t>(dn));
        for (int k = 0; k < dn; ++k) p[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(k);
        for (std::size_t t = 0; t < perm.size(); ++t)
            p[static_cast<std::size_t>(sorted_labels[t])] = static_cast<std::uint8_t>(perm[t]);
        auto [img, sg] = diagonal_action(C, p);
        out.add(img, Rat((inv % 2) ? -1 : 1) * sg);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// The smallest label from each of the first n^2+1 nonempty cells, row-major.
inline std::vector<int> default_alt_labels(const CorrelatedTableau& C) {
    int n = C.n, d = C.d;
    std::vector<int> out;
    for (int cell = 0; cell < d * d && static_cast<int>(out.size()) < n * n + 1; ++cell) {
        int best = -1;
        for (int k = 0; k < n * d; ++k)
            if (C.cell_of[static_cast<std::size_t>(k)] == cell) {
                best = k;
                break;
            }
        if (best >= 0) out.push_back(best);
    }
    if (static_cast<int>(out.size()) < n * n + 1) throw InputError("alt_relation: too few nonempty cells");
    return out;
}

struct AdjacentSwap {
    CorrelatedTableau swapped;  // the relabeled tableau, e and ep exchanged
    Rat swapped_coeff;          // coefficient in front of it (always -1)
    Expression residue;         // supported on keys with some cell of size >= 2
};

/// Exchange relation for two labels whose cells share a row (left vertex) or a
/// column (right vertex): C = swapped_coeff * swapped + residue modulo the
/// kernel. Sharing a row rewrites the right factor, moving ep into e's column;
/// the mirrored case rewrites the left factor.
inline AdjacentSwap adjacent_swap_relation(const CorrelatedTableau& C, int e, int ep) {
    int n = C.n, d = C.d, dn = n * d;
    if (e < 0 || ep < 0 || e >= dn || ep >= dn || e == ep) throw InputError("adjacent_swap: bad labels");
    if (C.cell_of[static_cast<std::size_t>(e)] == C.cell_of[static_cast<std::size_t>(ep)])
        throw InputError("adjacent_swap: labels share a cell");
    bool share_row = C.row_of(e) == C.row_of(ep);
    bool share_col = C.col_of(e) == C.col_of(ep);
    if (!share_row && !share_col) throw InputError("adjacent_swap: labels not adjacent");

    auto [S, T] = from_correlated(C);
    // rewrite the factor in which e and ep sit in different rows
    BracketMonomial& F = share_row ? T : S;
    const BracketMonomial& other = share_row ? S : T;
    int row_e = share_row ? C.col_of(e) : C.row_of(e);
    int row_ep = share_row ? C.col_of(ep) : C.row_of(ep);

    int pos_e = -1, pos_ep = -1;
    for (int j = 0; j < n; ++j) {
        if (F.at(row_e, j) == e) pos_e = j;
        if (F.at(row_ep, j) == ep) pos_ep = j;
    }
    if (pos_e < 0 || pos_ep < 0) throw InternalError("adjacent_swap: label lookup failed");

    AdjacentSwap out;
    out.residue = Expression(n, d);
    bool have_swap = false;
    for (int x = 0; x < n; ++x) {
        std::vector<std::uint8_t> raw = F.rows;
        std::uint8_t moved = raw[static_cast<std::size_t>(row_e) * n + x];
        raw[static_cast<std::size_t>(row_e) * n + x] = static_cast<std::uint8_t>(ep);
        raw[static_cast<std::size_t>(row_ep) * n + pos_ep] = moved;
        NormalizedBracket nb = normalize_bracket_rows(n, d, raw, F.sign);
        if (nb.is_zero) throw InternalError("adjacent_swap: unexpected repeat");
        auto [key, sg] = share_row ? to_correlated(other, nb.mono) : to_correlated(nb.mono, other);
        Rat coeff = Rat(sg);
        if (moved == e) {
            out.swapped = key;
            out.swapped_coeff = coeff;
            have_swap = true;
        } else {
            out.residue.add(key, coeff);
        }
    }
    if (!have_swap) throw InternalError("adjacent_swap: swap term missing");
    for (const auto& [key, c] : out.residue.terms) {
        CorrelatedDiagram D = key.shape();
        if (std::all_of(D.counts.begin(), D.counts.end(), [](int v) { return v <= 1; }))
            throw InternalError("adjacent_swap: residue term is simple");
    }
    return out;
}

/// Adjacent transpositions realizing (e ep) on a connected multigraph: BFS
/// path in edge adjacency (shared endpoint), then the palindromic product
/// along the path. Applying the pairs left to right exchanges e and ep.
inline std::vector<std::pair<int, int>> decompose_transposition(const BipartiteMultigraph& G, int e, int ep) {
    int dn = static_cast<int>(G.endpoint.size());
    if (e < 0 || ep < 0 || e >= dn || ep >= dn || e == ep) throw InputError("decompose_transposition: bad labels");
    std::vector<int> prev(static_cast<std::size_t>(dn), -2);
    std::deque<int> q;
    q.push_back(e);
    prev[static_cast<std::size_t>(e)] = -1;
    while (!q.empty() && prev[static_cast<std::size_t>(ep)] == -2) {
        int cur = q.front();
        q.pop_front();
        auto [cl, cr] = G.endpoint[static_cast<std::size_t>(cur)];
        for (int k = 0; k < dn; ++k) {
            if (prev[static_cast<std::size_t>(k)] != -2 || k == cur) continue;
            auto [l, r] = G.endpoint[static_cast<std::size_t>(k)];
            if (l == cl || r == cr) {
                prev[static_cast<std::size_t>(k)] = cur;
                q.push_back(k);
            }
        }
    }
    if (prev[static_cast<std::size_t>(ep)] == -2) throw InputError("decompose_transposition: graph not connected");
    std::vector<int> path;
    for (int v = ep; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
    std::reverse(path.begin(), path.end());  // e ... ep
    std::vector<std::pair<int, int>> seq;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) seq.emplace_back(path[i], path[i + 1]);
    for (std::size_t i = path.size() - 2; i >= 1; --i) seq.emplace_back(path[i - 1], path[i]);
    return seq;
}

struct TranscriptEntry {
    std::string type;         // "adjSwap" or "perm"
    std::vector<int> perm;    // for "perm": one-line images, 0-based
    int e = -1, ep = -1;      // for "adjSwap"
};

struct RewriteCertificate {
    CorrelatedTableau input;
    Expression output_terms;  // supported on disconnected or multi-edge keys
    Expression kernel_part;   // input - output_terms; canonical form zero
    std::vector<TranscriptEntry> transcript;
};

namespace detail {

/// Path between two occupied cells through occupied cells, each step sharing a
/// row or column. Deterministic BFS, neighbors in increasing cell order.
inline std::vector<int> cell_path(const CorrelatedTableau& C, int from_cell, int to_cell) {
    int d = C.d;
    std::vector<bool> occupied(static_cast<std::size_t>(d) * d, false);
    for (auto c : C.cell_of) occupied[c] = true;
    std::vector<int> prev(static_cast<std::size_t>(d) * d, -2);
    std::deque<int> q;
    q.push_back(from_cell);
    prev[static_cast<std::size_t>(from_cell)] = -1;
    while (!q.empty() && prev[static_cast<std::size_t>(to_cell)] == -2) {
        int cur = q.front();
        q.pop_front();
        int ci = cur / d, cj = cur % d;
        for (int cell = 0; cell < d * d; ++cell) {
            if (!occupied[static_cast<std::size_t>(cell)] || prev[static_cast<std::size_t>(cell)] != -2) continue;
            if (cell / d == ci || cell % d == cj) {
                prev[static_cast<std::size_t>(cell)] = cur;
                q.push_back(cell);
            }
        }
    }
    if (prev[static_cast<std::size_t>(to_cell)] == -2) throw InternalError("cell_path: disconnected");
    std::vector<int> path;
    for (int v = to_cell; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

inline int label_at_cell(const CorrelatedTableau& C, int cell) {
    for (int k = 0; k < C.n * C.d; ++k)
        if (C.cell_of[static_cast<std::size_t>(k)] == cell) return k;
    throw InternalError("label_at_cell: empty cell");
}

}  // namespace detail

/// Constructive proof object: for every permutation of the labels, chain
/// adjacent exchanges to relate C with its relabeling, collecting multi-edge
/// residues; the signed relabelings sum to a kernel element, leaving C
/// expressed over non-simple keys modulo the kernel.
inline RewriteCertificate rewrite_simple_connected(const CorrelatedTableau& C, const Guards& g = Guards{},
                                                   bool keep_transcript = true) {
    int n = C.n, d = C.d, dn = n * d;
    if (classify(C) != GraphClass::ConnectedSimple) throw InputError("rewrite: tableau must be connected and simple");
    if (d < n + 1) throw InputError("rewrite: requires d >= n+1");
    if (dn > g.max_rewrite_labels) throw GuardError("rewrite: label count exceeds guard");

    RewriteCertificate cert;
    cert.input = C;
    Expression residues(n, d);

    std::vector<std::uint8_t> sigma(static_cast<std::size_t>(dn));
    for (int i = 0; i < dn; ++i) sigma[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    do {
        // transpositions whose left-to-right application realizes sigma
        std::vector<std::pair<int, int>> transpositions;
        {
            std::vector<bool> seen(static_cast<std::size_t>(dn), false);
            std::vector<std::pair<int, int>> fwd;
            for (int s = 0; s < dn; ++s) {
                if (seen[static_cast<std::size_t>(s)]) continue;
                std::vector<int> cyc;
                int cur = s;
                while (!seen[static_cast<std::size_t>(cur)]) {
                    seen[static_cast<std::size_t>(cur)] = true;
                    cyc.push_back(cur);
                    cur = sigma[static_cast<std::size_t>(cur)];
                }
                for (std::size_t i = 0; i + 1 < cyc.size(); ++i) fwd.emplace_back(cyc[i], cyc[i + 1]);
            }
            transpositions.assign(fwd.rbegin(), fwd.rend());
        }
        if (keep_transcript && !transpositions.empty()) {
            TranscriptEntry te;
            te.type = "perm";
            te.perm.assign(sigma.begin(), sigma.end());
            cert.transcript.push_back(std::move(te));
        }

        CorrelatedTableau cur = C;
        Rat sign = 1;
        for (auto [a, b] : transpositions) {
            std::vector<int> path = detail::cell_path(cur, cur.cell_of[static_cast<std::size_t>(a)],
                                                      cur.cell_of[static_cast<std::size_t>(b)]);
            std::vector<std::pair<int, int>> cellpairs;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) cellpairs.emplace_back(path[i], path[i + 1]);
            for (std::size_t i = path.size() - 2; i >= 1; --i) cellpairs.emplace_back(path[i - 1], path[i]);
            for (auto [cu, cv] : cellpairs) {
                int x = detail::label_at_cell(cur, cu);
                int y = detail::label_at_cell(cur, cv);
                AdjacentSwap sw = adjacent_swap_relation(cur, x, y);
                Expression r = sw.residue;
                r *= sign;
                residues += r;
                sign *= sw.swapped_coeff;
                cur = sw.swapped;
                if (keep_transcript) {
                    TranscriptEntry te;
                    te.type = "adjSwap";
                    te.e = x;
                    te.ep = y;
                    cert.transcript.push_back(std::move(te));
                }
            }
        }
        // sanity: the chain must land on the relabeled tableau with sgn(sigma)
        int inv = 0;
        for (int x = 0; x < dn; ++x)
            for (int y = x + 1; y < dn; ++y)
                if (sigma[static_cast<std::size_t>(x)] > sigma[static_cast<std::size_t>(y)]) ++inv;
        auto [img, dsg] = diagonal_action(C, sigma);
        (void)dsg;
        if (!(cur == img) || sign != Rat((inv % 2) ? -1 : 1))
            throw InternalError("rewrite: swap chain disagrees with diagonal action");
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    Rat inv_fact = Rat(1) / Rat(factorial(dn));
    residues *= inv_fact;
    cert.output_terms = residues;
    Expression kern(n, d);
    kern.add(C, 1);
    kern = kern - residues;
    cert.kernel_part = kern;
    return cert;
}

/// Exact check of the three certificate invariants.
inline bool verify_certificate(const RewriteCertificate& cert, StraightenContext& ctx, std::string* why = nullptr) {
    Expression sum = cert.output_terms;
    sum += cert.kernel_part;
    Expression inp(cert.input.n, cert.input.d);
    inp.add(cert.input, 1);
    if (!(inp - sum).is_zero()) {
        if (why) *why = "input != outputTerms + kernelPart";
        return false;
    }
    for (const auto& [key, c] : cert.output_terms.terms)
        if (classify(key) == GraphClass::ConnectedSimple) {
            if (why) *why = "outputTerms contains a connected simple key";
            return false;
        }
    if (!ctx.canonical_form(cert.kernel_part).is_zero()) {
        if (why) *why = "kernelPart has nonzero canonical form";
        return false;
    }
    return true;
}

}  // namespace semiq
