#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semiq/bracket.hpp"
#include "semiq/correlated.hpp"
#include "semiq/core.hpp"
#include "semiq/partition.hpp"

namespace semiq {

/// Exact coordinates in the standard (x) standard basis for fixed (n, d).
/// Index = left_position * #standard + right_position, both ranked by
/// lexicographic row-word order.
struct CanonicalVector {
    int n = 0;
    int d = 0;
    std::vector<std::pair<std::uint64_t, Rat>> coords;  // sorted by index, no zeros

    bool is_zero() const { return coords.empty(); }

    bool operator==(const CanonicalVector& o) const { return n == o.n && d == o.d && coords == o.coords; }
};

namespace detail {

inline std::vector<std::uint8_t> row_canonical(int n, int d, const std::vector<std::uint8_t>& rows) {
    std::vector<const std::uint8_t*> ptr(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) ptr[static_cast<std::size_t>(i)] = rows.data() + static_cast<std::ptrdiff_t>(i) * n;
    std::sort(ptr.begin(), ptr.end(), [n](const std::uint8_t* a, const std::uint8_t* b) {
        return std::lexicographical_compare(a, a + n, b, b + n);
    });
    std::vector<std::uint8_t> out;
    out.reserve(rows.size());
    for (auto p : ptr) out.insert(out.end(), p, p + n);
    return out;
}

}  // namespace detail

/// Straightening engine for one (n, d): standard-monomial basis, memoized
/// standard expansions, and everything built on top of them.
///
/// Bracket products commute (row order is a free rewrite), so monomials are
/// first put in row-lexicographic order. A column violation between adjacent
/// rows is resolved by the classical two-row exchange identity: redistributing
/// the head of the lower row and the tail of the upper row in all ways, with
/// shuffle signs, sums to zero. Every non-original term is strictly smaller in
/// row-word order, which gives termination; expansions have integer
/// coefficients throughout.
class StraightenContext {
public:
    StraightenContext(int n, int d) : n_(n), d_(d), dn_(n * d) {
        if (n < 1 || d < 1 || dn_ > 64) throw InputError("straighten context: unsupported dimensions");
        enumerate_standard();
    }

    int n() const { return n_; }
    int d() const { return d_; }
    std::size_t standard_count() const { return std_monos_.size(); }
    const std::vector<std::uint8_t>& standard_mono(std::size_t i) const { return std_monos_[i]; }

    std::uint64_t pair_count() const {
        return static_cast<std::uint64_t>(std_monos_.size()) * std_monos_.size();
    }

    std::uint64_t pair_index(std::uint32_t left, std::uint32_t right) const {
        return static_cast<std::uint64_t>(left) * std_monos_.size() + right;
    }

    /// Standard expansion of a sorted-row monomial, memoized; integer coeffs.
    const std::vector<std::pair<std::uint32_t, Int>>& straighten_key(const std::vector<std::uint8_t>& rows) {
        std::vector<std::uint8_t> key = detail::row_canonical(n_, d_, rows);
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        std::map<std::uint32_t, Int> acc;
        expand(key, 1, acc, 0);
        std::vector<std::pair<std::uint32_t, Int>> vec;
        vec.reserve(acc.size());
        for (auto& [i, c] : acc)
            if (c != 0) vec.emplace_back(i, c);
        std::lock_guard<std::mutex> lk(mu_);
        return memo_.emplace(std::move(key), std::move(vec)).first->second;
    }

    FactorExpression straighten(const BracketMonomial& m) {
        if (m.n != n_ || m.d != d_) throw InputError("straighten: dimension mismatch");
        FactorExpression out(n_, d_);
        const auto& exp = straighten_key(m.rows);
        for (const auto& [idx, c] : exp) out.add_key(std_monos_[idx], Rat(c) * m.sign);
        return out;
    }

    /// Exchange the first k elements of row j+1 (0-based j) with every choice
    /// of k positions in row j; the relation T = pi_jk(T) holds modulo the
    /// kernel. Terms with an in-row repeat would vanish, but cannot occur on
    /// repetition-free monomials.
    FactorExpression pi_jk(const BracketMonomial& m, int j, int k) const {
        if (m.n != n_ || m.d != d_) throw InputError("pi_jk: dimension mismatch");
        if (j < 0 || j >= d_ - 1 || k < 1 || k > n_) throw InputError("pi_jk: index out of range");
        FactorExpression out(n_, d_);
        std::vector<int> pos(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(i)] = i;
        while (true) {
            std::vector<std::uint8_t> raw = m.rows;
            for (int t = 0; t < k; ++t)
                std::swap(raw[static_cast<std::size_t>(j) * n_ + pos[static_cast<std::size_t>(t)]],
                          raw[static_cast<std::size_t>(j + 1) * n_ + t]);
            NormalizedBracket nb = normalize_bracket_rows(n_, d_, raw, m.sign);
            if (!nb.is_zero) out.add(nb.mono, 1);
            // next k-combination of [n]
            int i = k - 1;
            while (i >= 0 && pos[static_cast<std::size_t>(i)] == n_ - k + i) --i;
            if (i < 0) break;
            ++pos[static_cast<std::size_t>(i)];
            for (int t = i + 1; t < k; ++t) pos[static_cast<std::size_t>(t)] = pos[static_cast<std::size_t>(t - 1)] + 1;
        }
        return out;
    }

    /// T - pi_jk(T) over all monomials T and all (j, k); spans the single
    /// factor kernel.
    void kernel_generators(const std::function<bool(const FactorExpression&)>& visit) const {
        bool stop = false;
        enumerate_monomials(n_, d_, [&](const BracketMonomial& m) {
            for (int j = 0; j < d_ - 1 && !stop; ++j)
                for (int k = 1; k <= n_ && !stop; ++k) {
                    FactorExpression g(n_, d_);
                    g.add(m, 1);
                    FactorExpression p = pi_jk(m, j, k);
                    p *= Rat(-1);
                    g += p;
                    if (!visit(g)) stop = true;
                }
            return !stop;
        });
    }

    /// Unsigned column symmetrizer: sum of S over all permutations of the
    /// entries within each column of its grid.
    FactorExpression column_symmetrize(const BracketMonomial& m) const {
        if (m.n != n_ || m.d != d_) throw InputError("column_symmetrize: dimension mismatch");
        FactorExpression out(n_, d_);
        // one permutation of rows per column, applied to that column's entries
        std::vector<std::vector<int>> perms(static_cast<std::size_t>(n_));
        std::vector<int> ident(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) ident[static_cast<std::size_t>(i)] = i;
        std::function<void(int, std::vector<std::uint8_t>&)> rec = [&](int col, std::vector<std::uint8_t>& raw) {
            if (col == n_) {
                NormalizedBracket nb = normalize_bracket_rows(n_, d_, raw, m.sign);
                if (!nb.is_zero) out.add(nb.mono, 1);
                return;
            }
            std::vector<int> p = ident;
            do {
                for (int i = 0; i < d_; ++i)
                    raw[static_cast<std::size_t>(i) * n_ + col] =
                        m.rows[static_cast<std::size_t>(p[static_cast<std::size_t>(i)]) * n_ + col];
                rec(col + 1, raw);
            } while (std::next_permutation(p.begin(), p.end()));
            for (int i = 0; i < d_; ++i)
                raw[static_cast<std::size_t>(i) * n_ + col] = m.rows[static_cast<std::size_t>(i) * n_ + col];
        };
        std::vector<std::uint8_t> raw = m.rows;
        rec(0, raw);
        return out;
    }

    /// Straighten both factors of every term and read coordinates in the
    /// standard (x) standard basis. Linear; zero exactly on the kernel.
    CanonicalVector canonical_form(const Expression& e) {
        if (e.n != n_ || e.d != d_) throw InputError("canonical_form: dimension mismatch");
        std::map<std::uint64_t, Rat> acc;
        for (const auto& [C, coeff] : e.terms) {
            auto [S, T] = from_correlated(C);
            const auto& le = straighten_key(S.rows);
            const auto& re = straighten_key(T.rows);
            Rat base = coeff * (S.sign * T.sign);
            for (const auto& [li, lc] : le)
                for (const auto& [ri, rc] : re) {
                    Rat v = base * (lc * rc);
                    auto [it, fresh] = acc.emplace(pair_index(li, ri), v);
                    if (!fresh) it->second += v;
                }
        }
        CanonicalVector out;
        out.n = n_;
        out.d = d_;
        for (auto& [i, c] : acc)
            if (c != 0) out.coords.emplace_back(i, c);
        return out;
    }

    /// Single-factor standard expansion as a sparse integer vector over the
    /// standard index, including the monomial's sign.
    std::vector<std::pair<std::uint32_t, Int>> standard_coords(const BracketMonomial& m) {
        auto vec = straighten_key(m.rows);
        if (m.sign < 0)
            for (auto& [i, c] : vec) c = -c;
        return vec;
    }

    std::uint32_t standard_index_of(const std::vector<std::uint8_t>& rows) const {
        auto it = std_index_.find(rows);
        if (it == std_index_.end()) throw InputError("not a standard monomial");
        return it->second;
    }

private:
    void enumerate_standard() {
        enumerate_monomials(n_, d_, [&](const BracketMonomial& m) {
            if (is_standard(m)) std_monos_.push_back(m.rows);
            return true;
        });
        std::sort(std_monos_.begin(), std_monos_.end());
        for (std::uint32_t i = 0; i < std_monos_.size(); ++i) std_index_.emplace(std_monos_[i], i);
        Int expect = syt_count(Partition::rectangle(n_, d_));
        if (Int(static_cast<long>(std_monos_.size())) != expect)
            throw InternalError("standard monomial count disagrees with hook formula");
    }

    int first_violation(const std::vector<std::uint8_t>& rows, int& vi) const {
        for (int i = 0; i + 1 < d_; ++i)
            for (int c = 0; c < n_; ++c)
                if (rows[static_cast<std::size_t>(i) * n_ + c] > rows[static_cast<std::size_t>(i + 1) * n_ + c]) {
                    vi = i;
                    return c;
                }
        return -1;
    }

    /// key must be row-canonical. Accumulates coeff * expansion(key) into acc.
    void expand(const std::vector<std::uint8_t>& key, const Int& coeff, std::map<std::uint32_t, Int>& acc, int depth) {
        if (depth > 4096) throw InternalError("straightening recursion too deep");
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) {
                for (const auto& [i, c] : it->second) acc[i] += coeff * c;
                return;
            }
        }
        int vi = 0;
        int c0 = first_violation(key, vi);
        std::vector<std::pair<std::uint32_t, Int>> expansion;
        if (c0 < 0) {
            expansion.emplace_back(std_index_.at(key), 1);
        } else {
            std::map<std::uint32_t, Int> sub;
            // moving set: head of the lower row up to c0, tail of the upper row from c0
            const std::uint8_t* alpha = key.data() + static_cast<std::ptrdiff_t>(vi) * n_;
            const std::uint8_t* beta = key.data() + static_cast<std::ptrdiff_t>(vi + 1) * n_;
            std::vector<std::uint8_t> gamma;
            gamma.insert(gamma.end(), beta, beta + c0 + 1);
            gamma.insert(gamma.end(), alpha + c0, alpha + n_);
            std::sort(gamma.begin(), gamma.end());
            int gsz = static_cast<int>(gamma.size());  // n + 1
            int tail_sz = n_ - c0;

            // identify the original split to solve for the input term
            std::vector<int> orig_pos;
            for (int t = c0; t < n_; ++t)
                orig_pos.push_back(static_cast<int>(std::lower_bound(gamma.begin(), gamma.end(), alpha[t]) - gamma.begin()));
            int orig_par = 0;
            for (int t = 0; t < tail_sz; ++t) orig_par += orig_pos[static_cast<std::size_t>(t)] - t;
            int sign_orig = (orig_par % 2 == 0) ? 1 : -1;

            std::vector<int> pos(static_cast<std::size_t>(tail_sz));
            for (int t = 0; t < tail_sz; ++t) pos[static_cast<std::size_t>(t)] = t;
            while (true) {
                bool is_orig = true;
                for (int t = 0; t < tail_sz; ++t)
                    if (pos[static_cast<std::size_t>(t)] != orig_pos[static_cast<std::size_t>(t)]) {
                        is_orig = false;
                        break;
                    }
                if (!is_orig) {
                    int par = 0;
                    std::vector<bool> in_tail(static_cast<std::size_t>(gsz), false);
                    for (int t = 0; t < tail_sz; ++t) {
                        par += pos[static_cast<std::size_t>(t)] - t;
                        in_tail[static_cast<std::size_t>(pos[static_cast<std::size_t>(t)])] = true;
                    }
                    int sign_w = (par % 2 == 0) ? 1 : -1;
                    std::vector<std::uint8_t> raw = key;
                    int wr = vi * n_ + c0;
                    for (int g = 0; g < gsz; ++g)
                        if (in_tail[static_cast<std::size_t>(g)]) raw[static_cast<std::size_t>(wr++)] = gamma[static_cast<std::size_t>(g)];
                    wr = (vi + 1) * n_;
                    for (int g = 0; g < gsz; ++g)
                        if (!in_tail[static_cast<std::size_t>(g)]) raw[static_cast<std::size_t>(wr++)] = gamma[static_cast<std::size_t>(g)];
                    NormalizedBracket nb = normalize_bracket_rows(n_, d_, raw, 1);
                    if (!nb.is_zero) {
                        std::vector<std::uint8_t> sub_key = detail::row_canonical(n_, d_, nb.mono.rows);
                        if (!(sub_key < key)) throw InternalError("straightening order did not decrease");
                        expand(sub_key, Int(-sign_orig * sign_w * nb.mono.sign), sub, depth + 1);
                    }
                }
                int i = tail_sz - 1;
                while (i >= 0 && pos[static_cast<std::size_t>(i)] == gsz - tail_sz + i) --i;
                if (i < 0) break;
                ++pos[static_cast<std::size_t>(i)];
                for (int t = i + 1; t < tail_sz; ++t) pos[static_cast<std::size_t>(t)] = pos[static_cast<std::size_t>(t - 1)] + 1;
            }
            expansion.reserve(sub.size());
            for (auto& [i, c] : sub)
                if (c != 0) expansion.emplace_back(i, c);
        }
        for (const auto& [i, c] : expansion) acc[i] += coeff * c;
        std::lock_guard<std::mutex> lk(mu_);
        memo_.emplace(key, std::move(expansion));
    }

    int n_, d_, dn_;
    std::vector<std::vector<std::uint8_t>> std_monos_;
    std::unordered_map<std::vector<std::uint8_t>, std::uint32_t, ByteVecHash> std_index_;
    std::unordered_map<std::vector<std::uint8_t>, std::vector<std::pair<std::uint32_t, Int>>, ByteVecHash> memo_;
    std::mutex mu_;
};

}  // namespace semiq
