#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "semiq/core.hpp"
#include "semiq/partition.hpp"

namespace semiq {

/// d x d grid of nonnegative cell sizes with all row and column sums equal to n.
struct CorrelatedDiagram {
    int n = 0;
    int d = 0;
    std::vector<int> counts;  // row-major, size d*d

    CorrelatedDiagram() = default;
    CorrelatedDiagram(int n_, int d_, std::vector<int> c) : n(n_), d(d_), counts(std::move(c)) {
        if (n < 1 || d < 1 || counts.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d))
            throw InputError("correlated diagram: bad dimensions");
        for (int i = 0; i < d; ++i) {
            long rs = 0, cs = 0;
            for (int j = 0; j < d; ++j) {
                if (at(i, j) < 0 || at(j, i) < 0) throw InputError("correlated diagram: negative entry");
                rs += at(i, j);
                cs += at(j, i);
            }
            if (rs != n || cs != n) throw InputError("correlated diagram: row/column sum != n");
        }
    }

    int at(int i, int j) const { return counts[static_cast<std::size_t>(i) * d + j]; }

    bool operator==(const CorrelatedDiagram& o) const { return n == o.n && d == o.d && counts == o.counts; }
};

/// Entries of D sorted non-increasingly, zeros dropped: a partition of d*n.
inline Partition diagonal_partition(const CorrelatedDiagram& D) {
    std::vector<int> e;
    for (int v : D.counts)
        if (v > 0) e.push_back(v);
    std::sort(e.rbegin(), e.rend());
    return Partition(std::move(e));
}

/// Support graph connectivity (union-find over the 2d vertices).
inline bool diagram_connected(const CorrelatedDiagram& D) {
    int d = D.d;
    std::vector<int> up(static_cast<std::size_t>(2 * d));
    for (int i = 0; i < 2 * d; ++i) up[static_cast<std::size_t>(i)] = i;
    std::function<int(int)> find = [&](int x) {
        while (up[static_cast<std::size_t>(x)] != x) x = up[static_cast<std::size_t>(x)] = up[static_cast<std::size_t>(up[static_cast<std::size_t>(x)])];
        return x;
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (D.at(i, j) > 0) up[static_cast<std::size_t>(find(i))] = find(d + j);
    int root = find(0);
    for (int v = 1; v < 2 * d; ++v)
        if (find(v) != root) return false;
    return true;
}

/// All (d,n)-correlated diagrams, row-major descending-lex order. Deterministic.
inline void enumerate_diagrams(int n, int d, const std::function<bool(const CorrelatedDiagram&)>& visit) {
    std::vector<int> grid(static_cast<std::size_t>(d) * d, 0);
    std::vector<int> colleft(static_cast<std::size_t>(d), n);
    bool stop = false;

    std::function<void(int, int, int)> rec = [&](int i, int j, int rowleft) {
        if (stop) return;
        if (i == d) {
            CorrelatedDiagram D;
            D.n = n;
            D.d = d;
            D.counts = grid;
            if (!visit(D)) stop = true;
            return;
        }
        if (j == d) {
            if (rowleft == 0) rec(i + 1, 0, n);
            return;
        }
        if (j == d - 1) {
            // forced value
            int v = rowleft;
            if (v <= colleft[static_cast<std::size_t>(j)]) {
                grid[static_cast<std::size_t>(i) * d + j] = v;
                colleft[static_cast<std::size_t>(j)] -= v;
                rec(i, j + 1, 0);
                colleft[static_cast<std::size_t>(j)] += v;
                grid[static_cast<std::size_t>(i) * d + j] = 0;
            }
            return;
        }
        for (int v = std::min(rowleft, colleft[static_cast<std::size_t>(j)]); v >= 0 && !stop; --v) {
            grid[static_cast<std::size_t>(i) * d + j] = v;
            colleft[static_cast<std::size_t>(j)] -= v;
            rec(i, j + 1, rowleft - v);
            colleft[static_cast<std::size_t>(j)] += v;
            grid[static_cast<std::size_t>(i) * d + j] = 0;
        }
    };
    rec(0, 0, n);
}

/// Count of (d,n)-correlated diagrams by dynamic programming on remaining
/// column sums (stored as a sorted multiset, so symmetric states merge).
inline Int diagram_count(int n, int d) {
    std::map<std::vector<int>, Int> cur;
    cur[std::vector<int>(static_cast<std::size_t>(d), n)] = 1;
    for (int row = 0; row < d; ++row) {
        std::map<std::vector<int>, Int> next;
        for (const auto& [cols, ways] : cur) {
            // distribute n among d cells bounded by cols
            std::vector<int> take(static_cast<std::size_t>(d), 0);
            std::function<void(int, int)> rec = [&](int j, int left) {
                if (j == d) {
                    if (left != 0) return;
                    std::vector<int> rem(cols);
                    for (int t = 0; t < d; ++t) rem[static_cast<std::size_t>(t)] -= take[static_cast<std::size_t>(t)];
                    std::sort(rem.begin(), rem.end());
                    next[rem] += ways;
                    return;
                }
                for (int v = std::min(left, cols[static_cast<std::size_t>(j)]); v >= 0; --v) {
                    take[static_cast<std::size_t>(j)] = v;
                    rec(j + 1, left - v);
                    take[static_cast<std::size_t>(j)] = 0;
                }
            };
            rec(0, n);
        }
        cur = std::move(next);
    }
    Int total = 0;
    for (const auto& [cols, ways] : cur) {
        for (int c : cols)
            if (c != 0) return 0;
        total += ways;
    }
    return total;
}

/// Knuth's RSK on a nonnegative integer matrix: biword in lexicographic order,
/// row insertion of the bottom letter, top letter recorded.
inline std::pair<SemistandardTableau, SemistandardTableau> rsk(const CorrelatedDiagram& D) {
    SemistandardTableau P, Q;
    auto insert = [&](int x, int rec) {
        int row = 0;
        while (true) {
            if (row == static_cast<int>(P.rows.size())) {
                P.rows.push_back({x});
                if (row == static_cast<int>(Q.rows.size())) Q.rows.push_back({});
                Q.rows[static_cast<std::size_t>(row)].push_back(rec);
                return;
            }
            auto& r = P.rows[static_cast<std::size_t>(row)];
            auto it = std::upper_bound(r.begin(), r.end(), x);
            if (it == r.end()) {
                r.push_back(x);
                if (row == static_cast<int>(Q.rows.size())) Q.rows.push_back({});
                Q.rows[static_cast<std::size_t>(row)].push_back(rec);
                return;
            }
            std::swap(*it, x);
            ++row;
        }
    };
    for (int i = 0; i < D.d; ++i)
        for (int j = 0; j < D.d; ++j)
            for (int k = 0; k < D.at(i, j); ++k) insert(j + 1, i + 1);
    return {P, Q};
}

/// Inverse RSK; requires equal shapes and contents summing to the same grid.
inline CorrelatedDiagram rsk_inverse(const SemistandardTableau& P, const SemistandardTableau& Q, int n, int d) {
    if (!P.valid() || !Q.valid()) throw InputError("rsk_inverse: not semistandard");
    if (!(P.shape() == Q.shape())) throw InputError("rsk_inverse: shape mismatch");
    std::vector<int> expected(static_cast<std::size_t>(d), n);
    if (P.content(d) != expected || Q.content(d) != expected)
        throw InputError("rsk_inverse: content must be n^d");

    SemistandardTableau p = P, q = Q;
    std::vector<int> grid(static_cast<std::size_t>(d) * d, 0);
    long total = static_cast<long>(n) * d;
    for (long step = 0; step < total; ++step) {
        // find the largest recording entry; rightmost occurrence = last inserted
        int bi = -1, bj = -1, best = 0;
        for (int i = 0; i < static_cast<int>(q.rows.size()); ++i) {
            const auto& r = q.rows[static_cast<std::size_t>(i)];
            if (r.empty()) continue;
            int j = static_cast<int>(r.size()) - 1;
            if (r[static_cast<std::size_t>(j)] > best || (r[static_cast<std::size_t>(j)] == best && j > bj)) {
                best = r[static_cast<std::size_t>(j)];
                bi = i;
                bj = j;
            }
        }
        if (bi < 0) throw InternalError("rsk_inverse: exhausted early");
        q.rows[static_cast<std::size_t>(bi)].pop_back();
        int x = p.rows[static_cast<std::size_t>(bi)].back();
        p.rows[static_cast<std::size_t>(bi)].pop_back();
        for (int row = bi - 1; row >= 0; --row) {
            auto& r = p.rows[static_cast<std::size_t>(row)];
            // rightmost entry strictly smaller than x
            auto it = std::lower_bound(r.begin(), r.end(), x);
            if (it == r.begin()) throw InputError("rsk_inverse: not an insertion tableau");
            --it;
            std::swap(*it, x);
        }
        ++grid[static_cast<std::size_t>(best - 1) * d + (x - 1)];
        if (!p.rows.empty() && p.rows.back().empty()) p.rows.pop_back();
        if (!q.rows.empty() && q.rows.back().empty()) q.rows.pop_back();
    }
    return CorrelatedDiagram(n, d, std::move(grid));
}

}  // namespace semiq
