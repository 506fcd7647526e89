#include <catch2/catch_amalgamated.hpp>

#include "semiq/evaluate.hpp"
#include "semiq/experiments.hpp"
#include "semiq/straighten.hpp"

using namespace semiq;

namespace {

std::vector<std::uint8_t> rows0(std::initializer_list<int> one_based) {
    std::vector<std::uint8_t> out;
    for (int v : one_based) out.push_back(static_cast<std::uint8_t>(v - 1));
    return out;
}

Rat eval_factor(const FactorExpression& f, const std::vector<std::vector<Rat>>& vectors, int n, int d) {
    Rat total = 0;
    for (const auto& [k, c] : f.terms) {
        BracketMonomial m{n, d, k, 1};
        total += c * eval_bracket_product(m, vectors);
    }
    return total;
}

std::vector<std::vector<Rat>> random_vectors(int n, int count, Rng& rng) {
    std::vector<std::vector<Rat>> vs;
    for (int k = 0; k < count; ++k) {
        std::vector<Rat> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = Rat(rng.range(-10, 10));
        vs.push_back(std::move(v));
    }
    return vs;
}

}  // namespace

TEST_CASE("standardness") {
    CHECK(is_standard(BracketMonomial{2, 2, rows0({1, 2, 3, 4}), 1}));
    CHECK_FALSE(is_standard(BracketMonomial{2, 2, rows0({1, 4, 2, 3}), 1}));
    CHECK(is_standard(BracketMonomial{2, 2, rows0({1, 3, 2, 4}), 1}));
    CHECK_FALSE(is_standard(BracketMonomial{2, 2, rows0({3, 4, 1, 2}), 1}));
}

TEST_CASE("standard monomial counts match the hook formula") {
    CHECK(StraightenContext(2, 2).standard_count() == 2);
    CHECK(StraightenContext(2, 3).standard_count() == 5);
    CHECK(StraightenContext(3, 2).standard_count() == 5);
    CHECK(StraightenContext(1, 4).standard_count() == 1);
}

TEST_CASE("pi_jk reproduces the displayed two-term exchange") {
    StraightenContext ctx(2, 3);
    BracketMonomial T{2, 3, rows0({1, 3, 2, 5, 4, 6}), 1};
    FactorExpression p = ctx.pi_jk(T, 0, 1);
    REQUIRE(p.terms.size() == 2);
    CHECK(p.terms.at(rows0({2, 3, 1, 5, 4, 6})) == 1);
    CHECK(p.terms.at(rows0({1, 2, 3, 5, 4, 6})) == 1);
}

TEST_CASE("pi_jn swaps whole rows") {
    StraightenContext ctx(2, 3);
    BracketMonomial T{2, 3, rows0({1, 3, 2, 5, 4, 6}), 1};
    FactorExpression p = ctx.pi_jk(T, 1, 2);
    REQUIRE(p.terms.size() == 1);
    CHECK(p.terms.at(rows0({1, 3, 4, 6, 2, 5})) == 1);
    CHECK_THROWS_AS(ctx.pi_jk(T, 2, 1), InputError);
    CHECK_THROWS_AS(ctx.pi_jk(T, 0, 3), InputError);
}

TEST_CASE("pi_jk preserves the bracket product value") {
    Rng rng(101);
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
        StraightenContext ctx(n, d);
        int checked = 0;
        enumerate_monomials(n, d, [&, n = n, d = d](const BracketMonomial& m) {
            for (int j = 0; j < d - 1; ++j)
                for (int k = 1; k <= n; ++k) {
                    FactorExpression p = ctx.pi_jk(m, j, k);
                    for (int trial = 0; trial < 3; ++trial) {
                        auto vs = random_vectors(n, n * d, rng);
                        Rat lhs = eval_bracket_product(m, vs);
                        Rat rhs = eval_factor(p, vs, n, d);
                        REQUIRE(lhs == rhs);
                    }
                }
            return ++checked < 20;
        });
    }
}

TEST_CASE("straightening is the identity on standard monomials") {
    StraightenContext ctx(2, 2);
    BracketMonomial s{2, 2, rows0({1, 3, 2, 4}), 1};
    FactorExpression f = ctx.straighten(s);
    REQUIRE(f.terms.size() == 1);
    CHECK(f.terms.at(s.rows) == 1);
}

TEST_CASE("straightening expands over standard monomials and preserves values") {
    Rng rng(211);
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
        StraightenContext ctx(n, d);
        int checked = 0;
        enumerate_monomials(n, d, [&, n = n, d = d](const BracketMonomial& m) {
            FactorExpression f = ctx.straighten(m);
            for (const auto& [k, c] : f.terms) CHECK(is_standard(BracketMonomial{n, d, k, 1}));
            for (int trial = 0; trial < (n * d > 6 ? 2 : 10); ++trial) {
                auto vs = random_vectors(n, n * d, rng);
                REQUIRE(eval_bracket_product(m, vs) == eval_factor(f, vs, n, d));
            }
            return ++checked < 60;
        });
    }
}

TEST_CASE("row order is a free rewrite") {
    StraightenContext ctx(2, 3);
    BracketMonomial a{2, 3, rows0({3, 4, 1, 2, 5, 6}), 1};
    BracketMonomial b{2, 3, rows0({1, 2, 3, 4, 5, 6}), 1};
    CHECK(ctx.straighten(a).terms == ctx.straighten(b).terms);
}

TEST_CASE("kernel generator count and span ranks") {
    StraightenContext ctx(2, 2);

    // d=1 has no relations at all
    StraightenContext ctx1(2, 1);
    long gen1 = 0;
    ctx1.kernel_generators([&](const FactorExpression&) {
        ++gen1;
        return true;
    });
    CHECK(gen1 == 0);

    // single-factor kernel rank at (2,2): dim P - #standard = 6 - 2
    RankBuilder kb;
    std::map<std::vector<std::uint8_t>, std::uint64_t> colid;
    ctx.kernel_generators([&](const FactorExpression& g) {
        std::vector<std::pair<std::uint64_t, Rat>> v;
        for (const auto& [k, c] : g.terms) {
            auto [it, fresh] = colid.emplace(k, colid.size());
            v.emplace_back(it->second, c);
        }
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        kb.submit(clear_denominators(v));
        return true;
    });
    CHECK(kb.rank() == 4);

    // tensor generators span a 32-dimensional space inside the 36 keys
    std::vector<Expression> gens;
    for (Side side : {Side::Left, Side::Right})
        relation_generators(ctx, side, false, [&](const Expression& e) {
            gens.push_back(e);
            return true;
        });
    CHECK(span_rank(gens, RankBasis::Monomial, ctx) == 32);
    CHECK(span_rank(gens, RankBasis::Canonical, ctx) == 0);

    // the full key basis has monomial rank D1 and canonical rank D2
    std::vector<Expression> basis;
    enumerate_tableaux(2, 2, [&](const CorrelatedTableau& C) {
        Expression e(2, 2);
        e.add(C, 1);
        basis.push_back(e);
        return true;
    });
    CHECK(span_rank(basis, RankBasis::Monomial, ctx) == 36);
    CHECK(span_rank(basis, RankBasis::Canonical, ctx) == 4);
    CHECK(span_rank({}, RankBasis::Monomial, ctx) == 0);
}

TEST_CASE("canonical rank of the full key basis at (2,3) and (3,2)") {
    for (auto [n, d, expect] : std::vector<std::tuple<int, int, long>>{{2, 3, 25}, {3, 2, 25}}) {
        StraightenContext ctx(n, d);
        RankBuilder rb;
        enumerate_tableaux(n, d, [&](const CorrelatedTableau& C) {
            Expression e(ctx.n(), ctx.d());
            e.add(C, 1);
            CanonicalVector cf = ctx.canonical_form(e);
            std::vector<std::pair<std::uint64_t, Rat>> v(cf.coords.begin(), cf.coords.end());
            rb.submit(clear_denominators(v));
            return true;
        });
        CHECK(rb.rank() == expect);
    }
}

TEST_CASE("canonical form basics") {
    StraightenContext ctx(2, 2);

    // relation generators have zero canonical form
    relation_generators(ctx, Side::Left, false, [&](const Expression& e) {
        CHECK(ctx.canonical_form(e).is_zero());
        return true;
    });

    // a standard pair maps to its unit coordinate
    for (std::uint32_t a = 0; a < 2; ++a)
        for (std::uint32_t b = 0; b < 2; ++b) {
            BracketMonomial ma{2, 2, ctx.standard_mono(a), 1}, mb{2, 2, ctx.standard_mono(b), 1};
            auto [C, sg] = to_correlated(ma, mb);
            Expression e(2, 2);
            e.add(C, sg);
            CanonicalVector cf = ctx.canonical_form(e);
            REQUIRE(cf.coords.size() == 1);
            CHECK(cf.coords[0].first == ctx.pair_index(a, b));
            CHECK(cf.coords[0].second == 1);
        }

    // linearity on a couple of random expressions
    Rng rng(31);
    std::vector<CorrelatedTableau> keys;
    enumerate_tableaux(2, 2, [&](const CorrelatedTableau& C) {
        keys.push_back(C);
        return true;
    });
    for (int trial = 0; trial < 20; ++trial) {
        Expression x(2, 2), y(2, 2);
        for (int t = 0; t < 3; ++t) {
            x.add(keys[rng.below(keys.size())], Rat(rng.range(-3, 3)));
            y.add(keys[rng.below(keys.size())], Rat(rng.range(-3, 3)));
        }
        Expression sum = x;
        sum += y;
        CanonicalVector cx = ctx.canonical_form(x), cy = ctx.canonical_form(y), cs = ctx.canonical_form(sum);
        std::map<std::uint64_t, Rat> m;
        for (auto& [i, c] : cx.coords) m[i] += c;
        for (auto& [i, c] : cy.coords) m[i] += c;
        CanonicalVector manual;
        manual.n = 2;
        manual.d = 2;
        for (auto& [i, c] : m)
            if (c != 0) manual.coords.emplace_back(i, c);
        CHECK(manual == cs);
    }
}

TEST_CASE("canonical form is invariant under the bimodule action on kernel elements") {
    StraightenContext ctx(2, 2);
    Rng rng(77);
    std::vector<Expression> gens;
    relation_generators(ctx, Side::Left, false, [&](const Expression& e) {
        gens.push_back(e);
        return gens.size() < 10;
    });
    auto rand_perm = [&] {
        std::vector<std::uint8_t> p(4);
        for (int i = 0; i < 4; ++i) p[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
        for (int i = 3; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[rng.below(static_cast<std::uint64_t>(i + 1))]);
        return p;
    };
    for (int trial = 0; trial < 50; ++trial) {
        const Expression& g = gens[rng.below(gens.size())];
        auto sig = rand_perm(), tau = rand_perm();
        Expression moved(2, 2);
        for (const auto& [k, c] : g.terms) {
            auto [img, sg] = bimodule_action(k, sig, tau);
            moved.add(img, c * sg);
        }
        CHECK(ctx.canonical_form(moved).is_zero());
    }
}

TEST_CASE("column symmetrizer") {
    // single column, d=2: both orderings
    StraightenContext ctx12(1, 2);
    BracketMonomial col{1, 2, rows0({1, 2}), 1};
    FactorExpression cs = ctx12.column_symmetrize(col);
    REQUIRE(cs.terms.size() == 2);
    CHECK(cs.terms.at(rows0({1, 2})) == 1);
    CHECK(cs.terms.at(rows0({2, 1})) == 1);

    // d=1: the column group is trivial on each singleton column
    StraightenContext ctx31(3, 1);
    BracketMonomial single{3, 1, rows0({1, 2, 3}), 1};
    FactorExpression one = ctx31.column_symmetrize(single);
    REQUIRE(one.terms.size() == 1);
    CHECK(one.terms.at(single.rows) == 1);
}

TEST_CASE("symmetrizer images are orthogonal to the kernel generators") {
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
        StraightenContext ctx(n, d);
        std::vector<FactorExpression> es, ks;
        enumerate_monomials(n, d, [&](const BracketMonomial& m) {
            es.push_back(ctx.column_symmetrize(m));
            return true;
        });
        ctx.kernel_generators([&](const FactorExpression& g) {
            ks.push_back(g);
            return true;
        });
        for (const auto& e : es)
            for (const auto& k : ks) REQUIRE(bilinear_form_factor(e, k) == 0);
    }
}

TEST_CASE("tensor bilinear orthogonality of the symmetrized pair space and the relations") {
    StraightenContext ctx(2, 2);
    std::vector<std::uint8_t> m0;
    enumerate_monomials(2, 2, [&](const BracketMonomial& m) {
        m0 = m.rows;
        return false;
    });
    FactorExpression e = ctx.column_symmetrize(BracketMonomial{2, 2, m0, 1});
    Expression ee = tensor_expression(e, e);
    relation_generators(ctx, Side::Left, false, [&](const Expression& g) {
        REQUIRE(bilinear_form(g, ee) == 0);
        return true;
    });
}

TEST_CASE("sft dimension reports") {
    {
        StraightenContext ctx(2, 2);
        auto rep = sft_dimensions(2, 2, ctx);
        CHECK(rep.d1 == 36);
        CHECK(rep.d2 == 4);
        CHECK(rep.generator_rank == 32);
    }
    {
        StraightenContext ctx(3, 2);
        auto rep = sft_dimensions(3, 2, ctx);
        CHECK(rep.d1 == 400);
        CHECK(rep.d2 == 25);
        CHECK(rep.generator_rank == 375);
    }
    {
        StraightenContext ctx(2, 3);
        auto rep = sft_dimensions(2, 3, ctx);
        CHECK(rep.d1 == 8100);
        CHECK(rep.d2 == 25);
        CHECK(rep.generator_rank == 8075);
    }
}
