#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiq/core.hpp"
#include "semiq/correlated.hpp"
#include "semiq/diagram.hpp"
#include "semiq/evaluate.hpp"
#include "semiq/rank.hpp"
#include "semiq/straighten.hpp"

namespace semiq {

/// Number of repetition-free monomials on one side: (dn)!/(n!)^d.
inline Int monomial_count(int n, int d) {
    Int c = factorial(static_cast<long>(n) * d);
    Int nf = factorial(n);
    for (int i = 0; i < d; ++i) c /= nf;
    return c;
}

inline Int d1_dimension(int n, int d) {
    Int m = monomial_count(n, d);
    return m * m;
}

inline Int d2_dimension(int n, int d) {
    Int s = syt_count(Partition::rectangle(n, d));
    return s * s;
}

namespace detail {

inline SparseRow canonical_row(StraightenContext& ctx, const CorrelatedTableau& C) {
    auto [S, T] = from_correlated(C);
    const auto& le = ctx.straighten_key(S.rows);
    const auto& re = ctx.straighten_key(T.rows);
    int sg = S.sign * T.sign;
    SparseRow row;
    row.reserve(le.size() * re.size());
    for (const auto& [li, lc] : le)
        for (const auto& [ri, rc] : re) {
            Int v = lc * rc * sg;
            if (v != 0) row.emplace_back(ctx.pair_index(li, ri), std::move(v));
        }
    return row;  // sorted: pair_index is monotone in (li, ri)
}

}  // namespace detail

enum class Side { Left, Right };

/// Kernel generators tensored with the other side: every T - pi_jk(T) against
/// every monomial (full mode) or against standard monomials only (economical).
inline void relation_generators(StraightenContext& ctx, Side side, bool economical,
                                const std::function<bool(const Expression&)>& visit) {
    int n = ctx.n(), d = ctx.d();
    std::vector<std::vector<std::uint8_t>> others;
    if (economical) {
        for (std::size_t i = 0; i < ctx.standard_count(); ++i) others.push_back(ctx.standard_mono(i));
    } else {
        enumerate_monomials(n, d, [&](const BracketMonomial& m) {
            others.push_back(m.rows);
            return true;
        });
    }
    bool stop = false;
    ctx.kernel_generators([&](const FactorExpression& g) {
        for (const auto& u : others) {
            FactorExpression unit(n, d);
            unit.add_key(u, 1);
            Expression e = side == Side::Left ? tensor_expression(g, unit) : tensor_expression(unit, g);
            if (!visit(e)) {
                stop = true;
                break;
            }
        }
        return !stop;
    });
}

enum class RankBasis { Monomial, Canonical };

/// Exact rank of a family of expressions, in tableau-key coordinates or in
/// canonical coordinates.
inline long span_rank(const std::vector<Expression>& exprs, RankBasis basis, StraightenContext& ctx) {
    RankBuilder rank;
    std::map<std::vector<std::uint8_t>, std::uint64_t> colid;
    for (const auto& e : exprs) {
        if (e.n != ctx.n() || e.d != ctx.d()) throw InputError("span_rank: dimension mismatch");
        std::vector<std::pair<std::uint64_t, Rat>> v;
        if (basis == RankBasis::Monomial) {
            for (const auto& [k, c] : e.terms) {
                auto [it, fresh] = colid.emplace(k.cell_of, colid.size());
                v.emplace_back(it->second, c);
            }
        } else {
            CanonicalVector cf = ctx.canonical_form(e);
            for (const auto& [i, c] : cf.coords) v.emplace_back(i, c);
        }
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        rank.submit(clear_denominators(v));
    }
    return rank.rank();
}

enum class SpanVerdict { Spans, FailsToSpan };

struct SpanCheckReport {
    int n = 0, d = 0;
    bool strong = false;          // true: span of all non-simple keys; false: disconnected only
    Int dim_total;                // number of correlated tableaux, closed form
    Int d2;                       // target rank
    long rank = 0;                // achieved rank of the streamed family
    SpanVerdict verdict = SpanVerdict::FailsToSpan;
    bool exhaustive = false;      // the family was enumerated in full
    long rows_streamed = 0;
    std::vector<CorrelatedTableau> witnesses;  // connected keys outside the span (when failing)
};

namespace detail {

/// Stream the canonical forms of a key family into a rank builder until the
/// target rank is reached or the family is exhausted. In exhaustive mode every
/// member is processed exactly; otherwise diagrams are cycled with doubling
/// per-diagram caps so no single orbit starves the stream.
struct SpanEngine {
    int n, d;
    StraightenContext& ctx;
    const Guards& guards;
    bool strong;

    bool keep(const CorrelatedDiagram& D) const {
        bool connected = diagram_connected(D);
        bool simple = std::all_of(D.counts.begin(), D.counts.end(), [](int v) { return v <= 1; });
        if (strong) return !(connected && simple);
        return !connected;
    }

    SpanCheckReport run() {
        SpanCheckReport rep;
        rep.n = n;
        rep.d = d;
        rep.strong = strong;
        rep.dim_total = d1_dimension(n, d);
        rep.d2 = d2_dimension(n, d);
        if (rep.d2 > guards.max_rank_dim) throw GuardError("span check: rank target exceeds guard");
        long target = static_cast<long>(rep.d2.get_si());
        bool exhaustive = rep.dim_total <= guards.max_stream_rows;
        rep.exhaustive = exhaustive;

        if (exhaustive) {
            RankBuilder rank;
            enumerate_tableaux(n, d, [&](const CorrelatedTableau& C) {
                if (!keep(C.shape())) return true;
                ++rep.rows_streamed;
                rank.submit(detail::canonical_row(ctx, C));
                return rank.rank() < target;
            });
            rep.rank = rank.rank();
            if (rep.rank == target) {
                rep.verdict = SpanVerdict::Spans;
            } else {
                rep.verdict = SpanVerdict::FailsToSpan;
                // connected keys whose canonical forms escape the span; each
                // found witness is appended so later witnesses stay independent
                enumerate_tableaux(n, d, [&](const CorrelatedTableau& C) {
                    if (keep(C.shape())) return true;
                    if (rank.submit(detail::canonical_row(ctx, C))) rep.witnesses.push_back(C);
                    return rep.witnesses.size() < 5;
                });
            }
            return rep;
        }

        // Streaming certificate: a family reaching full rank modulo a prime
        // has full rank over Q, since a nonzero minor lifts. Standard pairs
        // inside the family give unit coordinates; the rest of the stream
        // samples each diagram's relabeling orbit with a fixed seed.
        DenseModRank rank(static_cast<std::size_t>(target));
        std::size_t s = ctx.standard_count();
        for (std::uint32_t a = 0; a < s && rank.rank() < target; ++a)
            for (std::uint32_t b = 0; b < s && rank.rank() < target; ++b) {
                BracketMonomial ma{n, d, ctx.standard_mono(a), 1}, mb{n, d, ctx.standard_mono(b), 1};
                auto [C, sg] = to_correlated(ma, mb);
                if (!keep(C.shape())) continue;
                SparseRow r;
                r.emplace_back(ctx.pair_index(a, b), Int(sg));
                ++rep.rows_streamed;
                rank.submit(r);
            }

        std::vector<CorrelatedTableau> base;  // first assignment per kept diagram
        enumerate_diagrams(n, d, [&](const CorrelatedDiagram& D) {
            if (keep(D))
                enumerate_assignments(D, [&](const CorrelatedTableau& C) {
                    base.push_back(C);
                    return false;
                });
            return static_cast<long>(base.size()) <= guards.max_stream_rows;
        });

        Rng rng(0x5eedc0de);
        int dn = n * d;
        std::vector<std::uint8_t> perm(static_cast<std::size_t>(dn));
        for (int round = 0; rank.rank() < target && rep.rows_streamed < guards.max_stream_rows; ++round) {
            for (const auto& C0 : base) {
                if (rank.rank() >= target || rep.rows_streamed >= guards.max_stream_rows) break;
                CorrelatedTableau C = C0;
                if (round > 0) {
                    for (int i = 0; i < dn; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
                    for (int i = dn - 1; i > 0; --i)
                        std::swap(perm[static_cast<std::size_t>(i)],
                                  perm[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);
                    C = diagonal_action(C0, perm).first;
                }
                ++rep.rows_streamed;
                rank.submit(detail::canonical_row(ctx, C));
            }
        }

        rep.rank = rank.rank();
        if (rep.rank == target) {
            rep.verdict = SpanVerdict::Spans;
            return rep;
        }
        throw GuardError("span check: stream budget exhausted before reaching the target rank");
    }
};

}  // namespace detail

/// Do the canonical forms of disconnected tableaux span the quotient? Working
/// in canonical coordinates makes the kernel implicit.
inline SpanCheckReport span_check(int n, int d, StraightenContext& ctx, const Guards& g = Guards{}) {
    detail::SpanEngine eng{n, d, ctx, g, false};
    return eng.run();
}

/// Same with the larger family of all keys that are disconnected or carry a
/// multiple edge; requires d >= n+1.
inline SpanCheckReport strong_span_check(int n, int d, StraightenContext& ctx, const Guards& g = Guards{}) {
    if (d < n + 1) throw InputError("strong span check: requires d >= n+1");
    detail::SpanEngine eng{n, d, ctx, g, true};
    return eng.run();
}

inline std::vector<SpanCheckReport> verify_theorem_2x2(int dmax, const Guards& g = Guards{}) {
    if (dmax < 3) throw InputError("verify_theorem_2x2: dmax must be >= 3");
    std::vector<SpanCheckReport> out;
    for (int d = 3; d <= dmax; ++d) {
        StraightenContext ctx(2, d);
        out.push_back(span_check(2, d, ctx, g));
    }
    return out;
}

struct DimensionReport {
    int n = 0, d = 0;
    Int d1, d2, ker_dim;
    Int disconnected_lower, disconnected_upper;
    std::optional<Int> exact_disconnected;
    bool flag_bounds_ok = true;        // lower <= exact <= upper (when exact present)
    bool flag_upper_below_d2 = false;  // spanning provably impossible
    bool flag_counting_necessary = false;  // exact + kerDim >= D1
};

inline DimensionReport dimension_report(int n, int d, bool exact, const Guards& g = Guards{}) {
    DimensionReport rep;
    rep.n = n;
    rep.d = d;
    rep.d1 = d1_dimension(n, d);
    rep.d2 = d2_dimension(n, d);
    rep.ker_dim = rep.d1 - rep.d2;

    Int lower = monomial_count(n, d - 1);
    rep.disconnected_lower = lower * lower;

    Int upper = 0;
    long dn = static_cast<long>(d) * n;
    for (int k = 1; k <= d - 1; ++k) {
        Int bk = binomial(d, k);
        Int mk = monomial_count(n, k);
        Int mdk = monomial_count(n, d - k);
        upper += bk * bk * binomial(dn, static_cast<long>(k) * n) * mk * mk * mdk * mdk;
    }
    rep.disconnected_upper = upper;
    rep.flag_upper_below_d2 = upper < rep.d2;

    if (exact) {
        if (rep.d1 > g.max_stream_rows) throw GuardError("dimension report: enumeration exceeds guard");
        Int count = 0;
        enumerate_tableaux(n, d, [&](const CorrelatedTableau& C) {
            if (classify(C) == GraphClass::Disconnected) ++count;
            return true;
        });
        rep.exact_disconnected = count;
        rep.flag_bounds_ok = rep.disconnected_lower <= count && count <= rep.disconnected_upper;
        rep.flag_counting_necessary = count + rep.ker_dim >= rep.d1;
    }
    return rep;
}

struct SweepRow {
    int n = 0, d = 0;
    Int lhs, rhs;
    bool holds = false;  // lhs > rhs: the counting obstruction applies
    long degree = 0;     // d*n, the invariant degree at this grid size
};

/// Exact evaluation of the final inequality of the lower-bound argument:
/// (dn-n+1)...(dn) versus n^n * (2^d * (n+d-1)^C(d,2))^2.
inline std::vector<SweepRow> lower_bound_sweep(int nmax) {
    if (nmax < 4) throw InputError("lower_bound_sweep: nmax must be >= 4");
    std::vector<SweepRow> rows;
    for (int n = 4; n <= nmax; ++n) {
        int dcap = 2;
        while (static_cast<long>(dcap) * dcap < n) ++dcap;  // ceil(sqrt(n))
        for (int d = 2; d <= dcap; ++d) {
            SweepRow r;
            r.n = n;
            r.d = d;
            r.degree = static_cast<long>(d) * n;
            long dn = r.degree;
            Int lhs = 1;
            for (long t = dn - n + 1; t <= dn; ++t) lhs *= t;
            Int base = Int(n + d - 1);
            Int powed = 1;
            long exp = static_cast<long>(d) * (d - 1) / 2;
            for (long t = 0; t < exp; ++t) powed *= base;
            Int rhs = powed;
            for (int t = 0; t < d; ++t) rhs *= 2;
            rhs = rhs * rhs;
            Int nn = 1;
            for (int t = 0; t < n; ++t) nn *= n;
            rhs *= nn;
            r.lhs = lhs;
            r.rhs = rhs;
            r.holds = lhs > rhs;
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

struct AuditReport {
    int n = 0, d = 0;
    Int dim_p;                 // enumerated; equals the closed form
    Int rank_e, rank_k;        // column symmetrizer image and kernel generators
    bool orthogonal = false;   // every E generator dot every K generator is zero
    bool kostka_identity = false;
    bool rank_sum_ok = false;  // rank E + rank K = dim P
    // tensor-level cross-check of the degree-bound corollary
    Int connected_keys;
    Int ee_rank;
    Int intersection_dim;      // dim( span(connected) intersect E (x) E )
};

inline AuditReport decomposition_audit(int n, int d, StraightenContext& ctx, const Guards& g = Guards{}) {
    AuditReport rep;
    rep.n = n;
    rep.d = d;

    Int dimp_closed = monomial_count(n, d);
    if (dimp_closed > g.max_stream_rows) throw GuardError("audit: monomial count exceeds guard");

    std::vector<std::vector<std::uint8_t>> monos;
    enumerate_monomials(n, d, [&](const BracketMonomial& m) {
        monos.push_back(m.rows);
        return true;
    });
    rep.dim_p = static_cast<long>(monos.size());
    if (rep.dim_p != dimp_closed) throw InternalError("audit: enumeration disagrees with closed form");

    std::map<std::vector<std::uint8_t>, std::uint64_t> colid;
    for (const auto& m : monos) colid.emplace(m, colid.size());
    auto to_row = [&](const FactorExpression& f) {
        std::vector<std::pair<std::uint64_t, Rat>> v;
        v.reserve(f.terms.size());
        for (const auto& [k, c] : f.terms) v.emplace_back(colid.at(k), c);
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return clear_denominators(v);
    };

    std::vector<FactorExpression> e_gens;
    RankBuilder e_rank;
    for (const auto& rows : monos) {
        BracketMonomial m{n, d, rows, 1};
        e_gens.push_back(ctx.column_symmetrize(m));
        e_rank.submit(to_row(e_gens.back()));
    }
    rep.rank_e = e_rank.rank();

    std::vector<FactorExpression> k_gens;
    RankBuilder k_rank;
    ctx.kernel_generators([&](const FactorExpression& gexp) {
        k_gens.push_back(gexp);
        k_rank.submit(to_row(gexp));
        return true;
    });
    rep.rank_k = k_rank.rank();
    rep.rank_sum_ok = rep.rank_e + rep.rank_k == rep.dim_p;

    rep.orthogonal = true;
    for (const auto& e : e_gens)
        for (const auto& k : k_gens)
            if (bilinear_form_factor(e, k) != 0) {
                rep.orthogonal = false;
                break;
            }

    // Kostka/hook identity: dim P = sum over lambda dominated by d^n of
    // syt(lambda) * K(conj lambda, n^d)
    {
        Partition rect = Partition::rectangle(d, n);  // the partition d^n
        std::vector<int> content(static_cast<std::size_t>(d), n);
        Int total = 0;
        for (const auto& lam : partitions_of(n * d))
            if (dominates(rect, lam)) total += syt_count(lam) * kostka(conjugate(lam), content);
        rep.kostka_identity = total == rep.dim_p;
    }

    // Intersection of the connected span with E (x) E, via the rank of the
    // E (x) E generators projected away from the connected coordinates.
    {
        Int conn = 0;
        std::vector<std::vector<std::pair<std::uint64_t, Rat>>> tensor_rows;
        std::map<std::vector<std::uint8_t>, std::uint64_t> keyid;
        enumerate_tableaux(n, d, [&](const CorrelatedTableau& C) {
            bool connected = classify(C) != GraphClass::Disconnected;
            if (connected) ++conn;
            std::uint64_t id = keyid.size() * 2 + (connected ? 1 : 0);
            keyid.emplace(C.cell_of, id);
            return true;
        });
        rep.connected_keys = conn;
        RankBuilder full_rank, proj_rank;
        for (std::size_t a = 0; a < e_gens.size(); ++a)
            for (std::size_t b = 0; b < e_gens.size(); ++b) {
                Expression t = tensor_expression(e_gens[a], e_gens[b]);
                std::vector<std::pair<std::uint64_t, Rat>> v, vproj;
                for (const auto& [key, c] : t.terms) {
                    std::uint64_t id = keyid.at(key.cell_of);
                    v.emplace_back(id, c);
                    if ((id & 1) == 0) vproj.emplace_back(id, c);  // disconnected coordinates only
                }
                std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
                std::sort(vproj.begin(), vproj.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
                full_rank.submit(clear_denominators(v));
                proj_rank.submit(clear_denominators(vproj));
            }
        rep.ee_rank = full_rank.rank();
        rep.intersection_dim = Int(full_rank.rank()) - Int(proj_rank.rank());
    }
    return rep;
}

struct SftDimensions {
    int n = 0, d = 0;
    Int d1, d2;
    Int generator_rank;
};

/// Rank of the kernel generators in the monomial-pair basis. Small spaces get
/// a direct elimination over all tensored generators. Larger ones use the
/// sandwich: echelon bases of each factor kernel give a triangular family of
/// tensor rows with pairwise distinct leading pairs (a lower-bound
/// certificate), while the vanishing standard expansion of every single-factor
/// generator plus the unit canonical forms of the standard pairs pin the span
/// inside the canonical kernel (the matching upper bound).
inline SftDimensions sft_dimensions(int n, int d, StraightenContext& ctx, const Guards& g = Guards{}) {
    SftDimensions rep;
    rep.n = n;
    rep.d = d;
    rep.d1 = d1_dimension(n, d);
    rep.d2 = d2_dimension(n, d);

    Int monos = monomial_count(n, d);
    if (monos > g.max_stream_rows) throw GuardError("sft dimensions: monomial count exceeds guard");

    std::vector<std::vector<std::uint8_t>> all;
    enumerate_monomials(n, d, [&](const BracketMonomial& m) {
        all.push_back(m.rows);
        return true;
    });
    std::map<std::vector<std::uint8_t>, std::uint64_t> monoid;
    // standard monomials take the low indices so kernel pivots stay non-standard
    std::vector<std::vector<std::uint8_t>> ordered;
    for (const auto& m : all) {
        BracketMonomial mm{n, d, m, 1};
        if (is_standard(mm)) ordered.push_back(m);
    }
    std::size_t nstd = ordered.size();
    for (const auto& m : all) {
        BracketMonomial mm{n, d, m, 1};
        if (!is_standard(mm)) ordered.push_back(m);
    }
    for (std::size_t i = 0; i < ordered.size(); ++i) monoid.emplace(ordered[i], i);

    auto factor_row = [&](const FactorExpression& f) {
        std::vector<std::pair<std::uint64_t, Rat>> v;
        for (const auto& [k, c] : f.terms) v.emplace_back(monoid.at(k), c);
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return clear_denominators(v);
    };

    if (rep.d1 <= 2500) {
        // full honest elimination over every tensored generator
        std::uint64_t m = all.size();
        RankBuilder rank;
        ctx.kernel_generators([&](const FactorExpression& gexp) {
            SparseRow base = factor_row(gexp);
            for (std::uint64_t other = 0; other < m; ++other) {
                SparseRow left, right;
                for (const auto& [c, v] : base) {
                    left.emplace_back(c * m + other, v);
                    right.emplace_back(other * m + c, v);
                }
                std::sort(right.begin(), right.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
                rank.submit(std::move(left));
                rank.submit(std::move(right));
            }
            return true;
        });
        rep.generator_rank = rank.rank();
        return rep;
    }

    // Echelon basis of the single-factor kernel. Column order puts standard
    // monomials low, so every pivot must land on a non-standard column: a row
    // supported on standard columns alone would be a nonzero kernel element in
    // the span of the standard basis.
    RankBuilder kernel_rank;
    bool expansions_vanish = true;
    ctx.kernel_generators([&](const FactorExpression& gexp) {
        std::map<std::uint32_t, Rat> stdexp;
        for (const auto& [k, c] : gexp.terms)
            for (const auto& [i, ic] : ctx.straighten_key(k)) {
                auto [it, fresh] = stdexp.emplace(i, c * ic);
                if (!fresh) it->second += c * ic;
            }
        for (const auto& [i, c] : stdexp)
            if (c != 0) expansions_vanish = false;
        kernel_rank.submit(factor_row(gexp));
        return true;
    });
    if (!expansions_vanish) throw VerifyError("sft dimensions: a kernel generator has nonzero standard expansion");

    std::uint64_t m = all.size();
    std::uint64_t krank = static_cast<std::uint64_t>(kernel_rank.rank());
    for (const auto& row : kernel_rank.echelon())
        if (row.back().first < nstd) throw VerifyError("sft dimensions: kernel pivot on a standard column");
    if (krank + nstd != m) throw VerifyError("sft dimensions: kernel rank disagrees with the standard count");

    // Lower bound: tensoring the echelon rows with standard monomials on the
    // other side, plus echelon (x) echelon, gives rows with pairwise distinct
    // leading pairs -- a triangular family of 2*krank*nstd + krank^2 =
    // m^2 - nstd^2 independent elements of the generator span. Upper bound:
    // all generators expand to zero, so the span sits in the kernel of the
    // canonical coordinate map, whose rank is certified by the unit canonical
    // forms of the standard pairs. The two bounds meet at D1 - D2.
    for (std::uint32_t a = 0; a < nstd; ++a)
        for (std::uint32_t b = 0; b < nstd; ++b) {
            BracketMonomial ma{n, d, ctx.standard_mono(a), 1}, mb{n, d, ctx.standard_mono(b), 1};
            auto [C, sg] = to_correlated(ma, mb);
            Expression e(n, d);
            e.add(C, 1);
            CanonicalVector cf = ctx.canonical_form(e);
            bool unit = cf.coords.size() == 1 && cf.coords[0].first == ctx.pair_index(a, b) &&
                        (cf.coords[0].second == sg || cf.coords[0].second == -sg);
            if (!unit || !(cf.coords[0].second == Rat(sg)))
                throw VerifyError("sft dimensions: standard pair does not map to its unit coordinate");
        }
    rep.generator_rank = rep.d1 - rep.d2;
    if (Int(static_cast<long>(2 * krank * nstd + krank * krank)) != Int(static_cast<long>(m * m - nstd * nstd)))
        throw InternalError("sft dimensions: certificate arithmetic mismatch");
    return rep;
}

}  // namespace semiq
