#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "semiq/core.hpp"

namespace semiq {

/// Sparse integer row over abstract column indices, ascending by column.
using SparseRow = std::vector<std::pair<std::uint64_t, Int>>;

namespace detail {

constexpr std::uint64_t kRankPrime = 2147483647ULL;  // 2^31 - 1

inline std::uint64_t modpow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

using ModRow = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

}  // namespace detail

/// Incremental exact rank of a stream of sparse rows over Q, by fraction-free
/// elimination on integer rows (callers clear denominators). Pivots sit at
/// each row's maximal column. An optional mod-p mirror cheaply skips rows that
/// are almost surely dependent; a skip can only under-count, never over-count,
/// so the exact echelon remains a sound rank certificate.
class RankBuilder {
public:
    explicit RankBuilder(bool use_filter = false) : filter_(use_filter) {}

    long rank() const { return static_cast<long>(rows_.size()); }

    /// Echelon rows; each row's lead is its last (maximal-column) entry.
    const std::vector<SparseRow>& echelon() const { return rows_; }

    /// Returns true iff the row was independent (rank grew).
    bool submit(SparseRow r) {
        strip(r);
        if (r.empty()) return false;
        if (filter_) {
            detail::ModRow rp = to_mod(r);
            reduce_mod(rp);
            if (rp.empty()) return false;  // dependent with overwhelming probability
        }
        if (!reduce_exact(r)) return false;
        strip(r);
        detail::ModRow rp = to_mod(r);
        reduce_mod(rp);
        if (!rp.empty()) insert_mod(std::move(rp));
        pivot_[r.back().first] = rows_.size();
        rows_.push_back(std::move(r));
        return true;
    }

    /// Exact membership probe without inserting.
    bool reduces_to_zero(SparseRow r) const {
        strip(r);
        return !reduce_exact(r);
    }

private:
    static void strip(SparseRow& r) {
        std::size_t w = 0;
        for (auto& [c, v] : r)
            if (v != 0) r[w++] = {c, std::move(v)};
        r.resize(w);
        if (r.empty()) return;
        Int g = 0;
        for (auto& [c, v] : r) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            if (g == 1) break;
        }
        if (g > 1)
            for (auto& [c, v] : r) v /= g;
        if (r.back().second < 0)
            for (auto& [c, v] : r) v = -v;
    }

    /// r := r * (piv_lead/g) - piv * (r_lead/g); cancels the lead column.
    static void combine(SparseRow& r, const SparseRow& piv) {
        const Int& a = piv.back().second;
        const Int& b = r.back().second;
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Int ma = a / g, mb = b / g;
        SparseRow out;
        out.reserve(r.size() + piv.size());
        std::size_t i = 0, j = 0;
        while (i < r.size() || j < piv.size()) {
            if (j == piv.size() || (i < r.size() && r[i].first < piv[j].first)) {
                Int v = r[i].second * ma;
                if (v != 0) out.emplace_back(r[i].first, std::move(v));
                ++i;
            } else if (i == r.size() || piv[j].first < r[i].first) {
                Int v = piv[j].second * -mb;
                if (v != 0) out.emplace_back(piv[j].first, std::move(v));
                ++j;
            } else {
                Int v = r[i].second * ma - piv[j].second * mb;
                if (v != 0) out.emplace_back(r[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        r = std::move(out);
    }

    /// Cancel against existing pivots; true iff a nonzero residual remains.
    bool reduce_exact(SparseRow& r) const {
        int steps = 0;
        while (!r.empty()) {
            auto it = pivot_.find(r.back().first);
            if (it == pivot_.end()) return true;
            combine(r, rows_[it->second]);
            if (++steps % 16 == 0) strip(r);
        }
        return false;
    }

    static detail::ModRow to_mod(const SparseRow& r) {
        detail::ModRow out;
        out.reserve(r.size());
        for (const auto& [c, v] : r) {
            std::uint64_t m = mpz_fdiv_ui(v.get_mpz_t(), detail::kRankPrime);
            if (m) out.emplace_back(c, m);
        }
        return out;
    }

    void reduce_mod(detail::ModRow& r) const {
        constexpr std::uint64_t p = detail::kRankPrime;
        while (!r.empty()) {
            auto it = mod_pivot_.find(r.back().first);
            if (it == mod_pivot_.end()) return;
            const detail::ModRow& piv = mod_rows_[it->second];
            std::uint64_t f = r.back().second;  // pivot rows are normalized, lead = 1
            detail::ModRow out;
            out.reserve(r.size() + piv.size());
            std::size_t i = 0, j = 0;
            while (i < r.size() || j < piv.size()) {
                if (j == piv.size() || (i < r.size() && r[i].first < piv[j].first)) {
                    out.push_back(r[i]);
                    ++i;
                } else if (i == r.size() || piv[j].first < r[i].first) {
                    std::uint64_t v = (p - piv[j].second * f % p) % p;
                    if (v) out.emplace_back(piv[j].first, v);
                    ++j;
                } else {
                    std::uint64_t v = (r[i].second + p - piv[j].second * f % p) % p;
                    if (v) out.emplace_back(r[i].first, v);
                    ++i;
                    ++j;
                }
            }
            r = std::move(out);
        }
    }

    void insert_mod(detail::ModRow r) {
        constexpr std::uint64_t p = detail::kRankPrime;
        std::uint64_t inv = detail::modpow(r.back().second, p - 2, p);
        for (auto& [c, v] : r) v = v * inv % p;
        mod_pivot_[r.back().first] = mod_rows_.size();
        mod_rows_.push_back(std::move(r));
    }

    bool filter_;
    std::unordered_map<std::uint64_t, std::size_t> pivot_;
    std::vector<SparseRow> rows_;
    std::unordered_map<std::uint64_t, std::size_t> mod_pivot_;
    std::vector<detail::ModRow> mod_rows_;
};

/// Dense row-echelon rank modulo a prime, over a small column space (used for
/// canonical coordinates). Since a nonzero minor mod p is nonzero over Q, the
/// reported rank is a certified lower bound for the rational rank; when it
/// reaches the ambient dimension the rational rank equals it exactly.
class DenseModRank {
public:
    explicit DenseModRank(std::size_t cols) : cols_(cols), pivot_row_(cols, SIZE_MAX) {}

    long rank() const { return static_cast<long>(rows_.size()); }

    /// Returns true iff the row was independent mod p.
    bool submit(const SparseRow& sparse) {
        constexpr std::uint64_t p = detail::kRankPrime;
        std::vector<std::uint64_t> r(cols_, 0);
        bool any = false;
        for (const auto& [c, v] : sparse) {
            std::uint64_t m = mpz_fdiv_ui(v.get_mpz_t(), p);
            r[static_cast<std::size_t>(c)] = m;
            any |= m != 0;
        }
        if (!any) return false;
        for (std::size_t c = cols_; c-- > 0;) {
            if (r[c] == 0) continue;
            std::size_t pr = pivot_row_[c];
            if (pr == SIZE_MAX) {
                std::uint64_t inv = detail::modpow(r[c], p - 2, p);
                for (std::size_t j = 0; j <= c; ++j) r[j] = r[j] * inv % p;
                pivot_row_[c] = rows_.size();
                lead_.push_back(c);
                rows_.push_back(std::move(r));
                return true;
            }
            const auto& piv = rows_[pr];
            std::uint64_t f = r[c];
            for (std::size_t j = 0; j <= c; ++j)
                if (piv[j]) r[j] = (r[j] + (p - f) * piv[j]) % p;
        }
        return false;
    }

private:
    std::size_t cols_;
    std::vector<std::size_t> pivot_row_;
    std::vector<std::size_t> lead_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

/// Clear denominators of a rational sparse vector into an integer row.
inline SparseRow clear_denominators(const std::vector<std::pair<std::uint64_t, Rat>>& v) {
    Int lcm = 1;
    for (const auto& [c, q] : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
    SparseRow out;
    out.reserve(v.size());
    for (const auto& [c, q] : v) {
        Int val = q.get_num() * (lcm / q.get_den());
        if (val != 0) out.emplace_back(c, std::move(val));
    }
    return out;
}

}  // namespace semiq
