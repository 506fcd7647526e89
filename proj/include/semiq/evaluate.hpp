#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "semiq/core.hpp"
#include "semiq/correlated.hpp"

namespace semiq {

/// dn rational n x n matrices (row-major entries).
struct MatrixTuple {
    int n = 0;
    int d = 0;
    std::vector<std::vector<Rat>> mats;  // mats[k] has n*n entries

    void validate() const {
        if (static_cast<int>(mats.size()) != n * d) throw InputError("matrix tuple: expected dn matrices");
        for (const auto& m : mats)
            if (static_cast<int>(m.size()) != n * n) throw InputError("matrix tuple: matrices must be n x n");
    }
};

/// dn pairs of rational vectors in Q^n.
struct VectorTuple {
    int n = 0;
    int d = 0;
    std::vector<std::vector<Rat>> vs, ws;  // each entry has n coordinates
};

/// Exact determinant by rational Gaussian elimination.
inline Rat det(std::vector<Rat> a, int n) {
    Rat result = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a[static_cast<std::size_t>(r) * n + c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(piv) * n + j], a[static_cast<std::size_t>(c) * n + j]);
            result = -result;
        }
        Rat lead = a[static_cast<std::size_t>(c) * n + c];
        result *= lead;
        for (int r = c + 1; r < n; ++r) {
            Rat f = a[static_cast<std::size_t>(r) * n + c] / lead;
            if (f == 0) continue;
            for (int j = c; j < n; ++j)
                a[static_cast<std::size_t>(r) * n + j] -= f * a[static_cast<std::size_t>(c) * n + j];
        }
    }
    return result;
}

/// det of the n x n matrix whose columns are vectors[labels[i]].
inline Rat det_of_selection(const std::vector<std::vector<Rat>>& vectors, const std::vector<std::uint8_t>& labels, int n) {
    std::vector<Rat> a(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        const auto& v = vectors[labels[static_cast<std::size_t>(j)]];
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + j] = v[static_cast<std::size_t>(i)];
    }
    return det(std::move(a), n);
}

/// Product over the rows of M of the bracket determinants, times the sign.
inline Rat eval_bracket_product(const BracketMonomial& m, const std::vector<std::vector<Rat>>& vectors) {
    Rat prod = m.sign;
    std::vector<std::uint8_t> row(static_cast<std::size_t>(m.n));
    for (int i = 0; i < m.d && prod != 0; ++i) {
        std::copy(m.rows.begin() + static_cast<std::ptrdiff_t>(i) * m.n,
                  m.rows.begin() + static_cast<std::ptrdiff_t>(i + 1) * m.n, row.begin());
        prod *= det_of_selection(vectors, row, m.n);
    }
    return prod;
}

/// Value of the invariant at a decomposable point: per term, the product of
/// the left bracket determinants on the v's and the right ones on the w's.
inline Rat eval_phi_decomposable(const Expression& e, const VectorTuple& vt) {
    if (vt.n != e.n || vt.d != e.d) throw InputError("eval: dimension mismatch");
    Rat total = 0;
    for (const auto& [C, coeff] : e.terms) {
        auto [S, T] = from_correlated(C);
        Rat v = eval_bracket_product(S, vt.vs);
        if (v == 0) continue;
        v *= eval_bracket_product(T, vt.ws);
        total += coeff * v;
    }
    return total;
}

namespace detail {

/// phi on one tableau at a matrix tuple. Each B_k expands as the sum over a of
/// col_a(B_k) (x) e_a; the right bracket of column class j vanishes unless the
/// a-values of its labels are a permutation, which contributes its parity. The
/// sum therefore runs over one permutation per column class.
inline Rat eval_phi_tableau(const CorrelatedTableau& C, const MatrixTuple& B) {
    int n = C.n, d = C.d;
    std::vector<std::vector<std::uint8_t>> col_words(static_cast<std::size_t>(d));
    std::vector<std::vector<std::uint8_t>> row_words(static_cast<std::size_t>(d));
    std::vector<std::uint8_t> w;
    for (int j = 0; j < d; ++j) {
        read_col_word(C, j, w);
        col_words[static_cast<std::size_t>(j)] = w;
    }
    for (int i = 0; i < d; ++i) {
        read_row_word(C, i, w);
        row_words[static_cast<std::size_t>(i)] = w;
    }

    std::vector<int> a(static_cast<std::size_t>(n) * d, 0);  // column index drawn for each label
    std::vector<std::vector<Rat>> cols(static_cast<std::size_t>(n) * d, std::vector<Rat>(static_cast<std::size_t>(n)));
    Rat total = 0;

    std::function<void(int, int)> rec = [&](int j, int parity) {
        if (j == d) {
            Rat prod = parity;
            for (int i = 0; i < d && prod != 0; ++i) {
                for (auto label : row_words[static_cast<std::size_t>(i)])
                    for (int r = 0; r < n; ++r)
                        cols[label][static_cast<std::size_t>(r)] =
                            B.mats[label][static_cast<std::size_t>(r) * n + a[label]];
                prod *= det_of_selection(cols, row_words[static_cast<std::size_t>(i)], n);
            }
            total += prod;
            return;
        }
        // assign a permutation of [n] along the reading word of column class j
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        do {
            int inv = 0;
            for (int x = 0; x < n; ++x)
                for (int y = x + 1; y < n; ++y)
                    if (perm[static_cast<std::size_t>(x)] > perm[static_cast<std::size_t>(y)]) ++inv;
            const auto& word = col_words[static_cast<std::size_t>(j)];
            for (int t = 0; t < n; ++t) a[word[static_cast<std::size_t>(t)]] = perm[static_cast<std::size_t>(t)];
            rec(j + 1, (inv % 2) ? -parity : parity);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    rec(0, 1);
    return total;
}

}  // namespace detail

/// Multilinear invariant evaluated on concrete matrices, exactly.
inline Rat eval_phi(const Expression& e, const MatrixTuple& B, const Guards& g = Guards{}) {
    if (B.n != e.n || B.d != e.d) throw InputError("eval: dimension mismatch");
    B.validate();
    Int terms = 1;
    for (int i = 0; i < e.n * e.d; ++i) {
        terms *= e.n;
        if (terms > g.max_eval_terms) throw GuardError("eval_phi: term limit exceeded");
    }
    Rat total = 0;
    for (const auto& [C, coeff] : e.terms) total += coeff * detail::eval_phi_tableau(C, B);
    return total;
}

/// mdisc(A_1..A_s) = sum over permutations of det of the column-mixed matrix.
inline Rat mixed_discriminant(const std::vector<std::vector<Rat>>& mats, int s, const Guards& g = Guards{}) {
    if (static_cast<int>(mats.size()) != s) throw InputError("mdisc: expected s matrices");
    for (const auto& m : mats)
        if (static_cast<int>(m.size()) != static_cast<std::size_t>(s) * s) throw InputError("mdisc: matrices must be s x s");
    if (s > g.max_mdisc_size) throw GuardError("mdisc: size limit exceeded");
    std::vector<int> perm(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) perm[static_cast<std::size_t>(i)] = i;
    Rat total = 0;
    do {
        std::vector<Rat> a(static_cast<std::size_t>(s) * s);
        for (int col = 0; col < s; ++col)
            for (int row = 0; row < s; ++row)
                a[static_cast<std::size_t>(row) * s + col] = mats[static_cast<std::size_t>(perm[static_cast<std::size_t>(col)])][static_cast<std::size_t>(row) * s + col];
        total += det(std::move(a), s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// phi of a single tableau through the block-matrix mixed discriminant.
/// Y_label carries B_label in block (row, col) of the label's cell. Only
/// block-consistent permutations survive, one bijection per column class.
/// The reading-word parities relate the tableau's basis orientation to the
/// block construction.
inline Rat phi_via_mdisc(const CorrelatedTableau& C, const MatrixTuple& B, const Guards& g = Guards{}) {
    int n = C.n, d = C.d, dn = n * d;
    if (B.n != n || B.d != d) throw InputError("phi_via_mdisc: dimension mismatch");
    B.validate();
    if (dn > g.max_mdisc_size) throw GuardError("phi_via_mdisc: size limit exceeded");

    // labels grouped by column class, ascending
    std::vector<std::vector<int>> by_col(static_cast<std::size_t>(d));
    for (int k = 0; k < dn; ++k) by_col[static_cast<std::size_t>(C.col_of(k))].push_back(k);

    // assignment of labels to the n slots of their block column
    std::vector<int> label_at(static_cast<std::size_t>(dn), -1);
    Rat total = 0;
    std::function<void(int)> rec = [&](int j) {
        if (j == d) {
            std::vector<Rat> Y(static_cast<std::size_t>(dn) * dn, Rat(0));
            for (int t = 0; t < dn; ++t) {
                int label = label_at[static_cast<std::size_t>(t)];
                int bi = C.row_of(label), bj = t / n, within = t % n;
                if (bj != C.col_of(label)) throw InternalError("phi_via_mdisc: inconsistent slot");
                for (int r = 0; r < n; ++r)
                    Y[static_cast<std::size_t>(bi * n + r) * dn + t] =
                        B.mats[static_cast<std::size_t>(label)][static_cast<std::size_t>(r) * n + within];
            }
            total += det(std::move(Y), dn);
            return;
        }
        std::vector<int> perm = by_col[static_cast<std::size_t>(j)];
        std::sort(perm.begin(), perm.end());
        do {
            for (int t = 0; t < n; ++t) label_at[static_cast<std::size_t>(j * n + t)] = perm[static_cast<std::size_t>(t)];
            rec(j + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    rec(0);

    std::vector<std::uint8_t> word, full;
    int sign = 1;
    for (int i = 0; i < d; ++i) {
        detail::read_row_word(C, i, word);
        full.insert(full.end(), word.begin(), word.end());
    }
    sign *= sort_sign(full);
    full.clear();
    for (int j = 0; j < d; ++j) {
        detail::read_col_word(C, j, word);
        full.insert(full.end(), word.begin(), word.end());
    }
    sign *= sort_sign(full);
    return total * sign;
}

struct KernelTestResult {
    bool probably_in_kernel = false;
    int witness_trial = -1;
    Rat witness_value = 0;
};

inline VectorTuple random_vector_tuple(int n, int d, Rng& rng) {
    VectorTuple vt;
    vt.n = n;
    vt.d = d;
    for (int k = 0; k < n * d; ++k) {
        std::vector<Rat> v(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = Rat(rng.range(-10, 10));
            w[static_cast<std::size_t>(i)] = Rat(rng.range(-10, 10));
        }
        vt.vs.push_back(std::move(v));
        vt.ws.push_back(std::move(w));
    }
    return vt;
}

inline MatrixTuple random_matrix_tuple(int n, int d, Rng& rng) {
    MatrixTuple B;
    B.n = n;
    B.d = d;
    for (int k = 0; k < n * d; ++k) {
        std::vector<Rat> m(static_cast<std::size_t>(n) * n);
        for (auto& x : m) x = Rat(rng.range(-10, 10));
        B.mats.push_back(std::move(m));
    }
    return B;
}

/// Random 2x2 rational matrix with determinant exactly 1, as a product of
/// elementary shears.
inline std::vector<Rat> random_sl2(Rng& rng, int factors = 6) {
    std::vector<Rat> m{1, 0, 0, 1};
    auto mul = [&](const std::vector<Rat>& f) {
        std::vector<Rat> r(4);
        r[0] = m[0] * f[0] + m[1] * f[2];
        r[1] = m[0] * f[1] + m[1] * f[3];
        r[2] = m[2] * f[0] + m[3] * f[2];
        r[3] = m[2] * f[1] + m[3] * f[3];
        m = std::move(r);
    };
    for (int i = 0; i < factors; ++i) {
        Rat a = Rat(rng.range(-3, 3));
        if (i % 2 == 0)
            mul({1, a, 0, 1});
        else
            mul({1, 0, a, 1});
    }
    return m;
}

/// Schwartz-Zippel style probe: evaluate at seeded random decomposable points;
/// a nonzero value is a witness, all-zero is ProbablyInKernel.
inline KernelTestResult kernel_test_random(const Expression& e, int trials, std::uint64_t seed) {
    if (trials < 1) throw InputError("kernel_test_random: trials must be >= 1");
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        VectorTuple vt = random_vector_tuple(e.n, e.d, rng);
        Rat v = eval_phi_decomposable(e, vt);
        if (v != 0) return {false, t, v};
    }
    return {true, -1, 0};
}

}  // namespace semiq
