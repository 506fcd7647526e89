#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "semiq/core.hpp"

namespace semiq {

/// Integer partition: strictly positive, non-increasing parts. No trailing zeros
/// are stored; height and width are derived.
struct Partition {
    std::vector<int> parts;

    Partition() = default;
    explicit Partition(std::vector<int> p) : parts(std::move(p)) {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i] <= 0) throw InputError("partition parts must be positive");
            if (i > 0 && parts[i] > parts[i - 1]) throw InputError("partition parts must be non-increasing");
        }
    }

    static Partition rectangle(int width, int height) {
        return Partition(std::vector<int>(static_cast<std::size_t>(height), width));
    }

    long size() const { return std::accumulate(parts.begin(), parts.end(), 0L); }
    int height() const { return static_cast<int>(parts.size()); }
    int width() const { return parts.empty() ? 0 : parts[0]; }
    int part(int i) const { return i < height() ? parts[static_cast<std::size_t>(i)] : 0; }

    bool operator==(const Partition& o) const { return parts == o.parts; }
    auto operator<=>(const Partition& o) const { return parts <=> o.parts; }
};

inline Partition conjugate(const Partition& p) {
    std::vector<int> c(static_cast<std::size_t>(p.width()), 0);
    for (int part : p.parts)
        for (int j = 0; j < part; ++j) ++c[static_cast<std::size_t>(j)];
    return Partition(std::move(c));
}

/// Dominance order: nu >= lambda by prefix sums. Requires equal sizes.
inline bool dominates(const Partition& nu, const Partition& lambda) {
    if (nu.size() != lambda.size()) throw InputError("dominates: partitions must have equal size");
    long a = 0, b = 0;
    int h = std::max(nu.height(), lambda.height());
    for (int i = 0; i < h; ++i) {
        a += nu.part(i);
        b += lambda.part(i);
        if (a < b) return false;
    }
    return true;
}

inline int hook_length(const Partition& p, int i, int j) {
    Partition c = conjugate(p);
    return (p.part(i) - j) + (c.part(j) - i) - 1;
}

/// Number of standard Young tableaux of this shape (hook length formula).
inline Int syt_count(const Partition& p) {
    if (p.parts.empty()) return 1;
    Int num = factorial(p.size());
    Partition c = conjugate(p);
    Int hooks = 1;
    for (int i = 0; i < p.height(); ++i)
        for (int j = 0; j < p.part(i); ++j)
            hooks *= (p.part(i) - j) + (c.part(j) - i) - 1;
    return num / hooks;
}

inline std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rem, int maxp) {
        if (rem == 0) {
            out.emplace_back(Partition(cur));
            return;
        }
        for (int p = std::min(rem, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(rem - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

/// Semistandard tableau: rows weakly increasing, columns strictly increasing.
struct SemistandardTableau {
    std::vector<std::vector<int>> rows;

    Partition shape() const {
        std::vector<int> p;
        p.reserve(rows.size());
        for (const auto& r : rows) p.push_back(static_cast<int>(r.size()));
        return Partition(std::move(p));
    }

    bool valid() const {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].empty()) return false;
            if (i > 0 && rows[i].size() > rows[i - 1].size()) return false;
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                if (rows[i][j] < 1) return false;
                if (j > 0 && rows[i][j - 1] > rows[i][j]) return false;
                if (i > 0 && rows[i - 1][j] >= rows[i][j]) return false;
            }
        }
        return true;
    }

    /// Entry multiplicities, index m-1 counts entries equal to m.
    std::vector<int> content(int max_entry) const {
        std::vector<int> c(static_cast<std::size_t>(max_entry), 0);
        for (const auto& r : rows)
            for (int v : r) {
                if (v < 1 || v > max_entry) throw InputError("tableau entry out of range");
                ++c[static_cast<std::size_t>(v - 1)];
            }
        return c;
    }

    bool operator==(const SemistandardTableau& o) const { return rows == o.rows; }
};

/// Kostka number: semistandard tableaux of shape `lambda` and content `mu`,
/// counted by direct enumeration with prefix pruning.
inline Int kostka(const Partition& lambda, const std::vector<int>& mu) {
    long musum = std::accumulate(mu.begin(), mu.end(), 0L);
    if (lambda.size() != musum) throw InputError("kostka: |lambda| != |mu|");
    if (lambda.parts.empty()) return 1;

    int h = lambda.height();
    std::vector<std::vector<int>> t(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i) t[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(lambda.part(i)), 0);
    std::vector<int> left(mu.begin(), mu.end());
    int maxv = static_cast<int>(mu.size());
    Int count = 0;

    std::function<void(int, int)> fill = [&](int i, int j) {
        if (i == h) {
            ++count;
            return;
        }
        int ni = i, nj = j + 1;
        if (nj == lambda.part(i)) {
            ni = i + 1;
            nj = 0;
        }
        int lo = 1;
        if (j > 0) lo = std::max(lo, t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)]);
        if (i > 0) lo = std::max(lo, t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] + 1);
        // column strictness forces entry >= i+1
        lo = std::max(lo, i + 1);
        for (int v = lo; v <= maxv; ++v) {
            if (left[static_cast<std::size_t>(v - 1)] == 0) continue;
            --left[static_cast<std::size_t>(v - 1)];
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            fill(ni, nj);
            ++left[static_cast<std::size_t>(v - 1)];
        }
    };
    fill(0, 0);
    return count;
}

}  // namespace semiq
