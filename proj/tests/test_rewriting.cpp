#include <catch2/catch_amalgamated.hpp>

#include "semiq/rewrite.hpp"

using namespace semiq;

namespace {

std::vector<std::uint8_t> rows0(std::initializer_list<int> one_based) {
    std::vector<std::uint8_t> out;
    for (int v : one_based) out.push_back(static_cast<std::uint8_t>(v - 1));
    return out;
}

CorrelatedTableau six_cycle() {
    BracketMonomial S{2, 3, rows0({1, 2, 3, 4, 5, 6}), 1};
    BracketMonomial T{2, 3, rows0({1, 3, 2, 5, 4, 6}), 1};
    return to_correlated(S, T).first;
}

std::vector<std::uint8_t> transposition(int dn, int a, int b) {
    std::vector<std::uint8_t> p(static_cast<std::size_t>(dn));
    for (int i = 0; i < dn; ++i) p[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    std::swap(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
    return p;
}

}  // namespace

TEST_CASE("alt relation at n=1 is a two-term difference") {
    CorrelatedTableau C{1, 2, {0, 3}};  // diagonal
    Expression alt = alt_relation(C, {0, 1});
    REQUIRE(alt.terms.size() == 2);
    CHECK(alt.terms.at(C) == 1);
    auto [swapped, sg] = diagonal_action(C, transposition(2, 0, 1));
    CHECK(alt.terms.at(swapped) == -1);
    StraightenContext ctx(1, 2);
    CHECK(ctx.canonical_form(alt).is_zero());
}

TEST_CASE("alt relation on the six-cycle lands in the kernel") {
    StraightenContext ctx(2, 3);
    CorrelatedTableau C = six_cycle();
    auto I = default_alt_labels(C);
    REQUIRE(I.size() == 5);
    Expression alt = alt_relation(C, I);
    CHECK(alt.terms.size() == 120);
    CHECK(ctx.canonical_form(alt).is_zero());
}

TEST_CASE("alt relation preconditions") {
    CorrelatedTableau C = six_cycle();
    CHECK_THROWS_AS(alt_relation(C, {0, 1, 2, 3}), InputError);          // wrong size
    CHECK_THROWS_AS(alt_relation(C, {0, 1, 2, 3, 99}), InputError);      // out of range
    // two labels from the same cell
    CorrelatedTableau D{2, 3, {0, 0, 4, 4, 8, 8}};
    CHECK_THROWS_AS(alt_relation(D, {0, 1, 2, 3, 4}), InputError);
    CHECK_THROWS_AS(default_alt_labels(D), InputError);  // only three nonempty cells
}

TEST_CASE("alt relations across seeded choices stay in the kernel") {
    Rng rng(71);
    for (auto [n, d] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}}) {
        StraightenContext ctx(n, d);
        std::vector<CorrelatedTableau> keys;
        enumerate_tableaux(n, d, [&](const CorrelatedTableau& C) {
            keys.push_back(C);
            return true;
        });
        int done = 0;
        for (int attempt = 0; attempt < 400 && done < 15; ++attempt) {
            const CorrelatedTableau& C = keys[rng.below(keys.size())];
            std::vector<int> I;
            try {
                I = default_alt_labels(C);
            } catch (const InputError&) {
                continue;
            }
            Expression alt = alt_relation(C, I);
            REQUIRE(ctx.canonical_form(alt).is_zero());
            ++done;
        }
        CHECK(done == 15);
    }
}

TEST_CASE("adjacent swap matches the displayed three-graph identity") {
    StraightenContext ctx(2, 3);
    CorrelatedTableau C = six_cycle();
    AdjacentSwap sw = adjacent_swap_relation(C, 0, 1);  // labels 1 and 2 share the first left vertex

    CHECK(sw.swapped_coeff == -1);
    auto [img, dsg] = diagonal_action(C, transposition(6, 0, 1));
    CHECK(sw.swapped == img);

    REQUIRE(sw.residue.terms.size() == 1);
    const auto& [rkey, rc] = *sw.residue.terms.begin();
    CHECK(rc == 1);
    CHECK(rkey.cell(0, 0) == std::vector<int>{0, 1});  // the doubled edge

    // the identity holds in canonical coordinates
    Expression lhs(2, 3);
    lhs.add(C, 1);
    Expression rhs(2, 3);
    rhs.add(sw.swapped, sw.swapped_coeff);
    rhs += sw.residue;
    CHECK(ctx.canonical_form(lhs - rhs).is_zero());
}

TEST_CASE("adjacent swap identities across seeded triples") {
    StraightenContext ctx(2, 3);
    Rng rng(73);
    std::vector<CorrelatedTableau> keys;
    enumerate_tableaux(2, 3, [&](const CorrelatedTableau& C) {
        keys.push_back(C);
        return true;
    });
    int done = 0;
    while (done < 50) {
        const CorrelatedTableau& C = keys[rng.below(keys.size())];
        int e = static_cast<int>(rng.below(6)), ep = static_cast<int>(rng.below(6));
        if (e == ep || C.cell_of[static_cast<std::size_t>(e)] == C.cell_of[static_cast<std::size_t>(ep)]) continue;
        if (C.row_of(e) != C.row_of(ep) && C.col_of(e) != C.col_of(ep)) continue;
        AdjacentSwap sw = adjacent_swap_relation(C, e, ep);
        for (const auto& [key, c] : sw.residue.terms) {
            CorrelatedDiagram D = key.shape();
            REQUIRE_FALSE(std::all_of(D.counts.begin(), D.counts.end(), [](int v) { return v <= 1; }));
        }
        Expression diff(2, 3);
        diff.add(C, 1);
        diff.add(sw.swapped, -sw.swapped_coeff);
        diff = diff - sw.residue;
        REQUIRE(ctx.canonical_form(diff).is_zero());
        ++done;
    }
}

TEST_CASE("adjacent swap rejects non-adjacent or same-cell labels") {
    CorrelatedTableau C = six_cycle();
    // labels 1 and 6 (cells (0,0) and (2,2)) share nothing
    CHECK_THROWS_AS(adjacent_swap_relation(C, 0, 5), InputError);
    CorrelatedTableau D{2, 3, {0, 0, 4, 4, 8, 8}};
    CHECK_THROWS_AS(adjacent_swap_relation(D, 0, 1), InputError);
}

TEST_CASE("transposition decomposition along graph paths") {
    CorrelatedTableau C = six_cycle();
    BipartiteMultigraph g = graph_of(C);

    // adjacent labels: a single swap
    auto seq = decompose_transposition(g, 0, 1);
    REQUIRE(seq.size() == 1);
    CHECK(seq[0] == std::make_pair(0, 1));

    // the identity (e e') = product over the path, for every pair
    for (int e = 0; e < 6; ++e)
        for (int ep = 0; ep < 6; ++ep) {
            if (e == ep) continue;
            auto s = decompose_transposition(g, e, ep);
            std::vector<int> perm(6);
            for (int i = 0; i < 6; ++i) perm[static_cast<std::size_t>(i)] = i;
            for (auto [a, b] : s) std::swap(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
            for (int i = 0; i < 6; ++i) {
                int expect = i == e ? ep : (i == ep ? e : i);
                REQUIRE(perm[static_cast<std::size_t>(i)] == expect);
            }
            CHECK(s.size() % 2 == 1);
        }

    // disconnected graphs are rejected
    CorrelatedTableau blockdiag{2, 2, {0, 0, 3, 3}};
    CHECK_THROWS_AS(decompose_transposition(graph_of(blockdiag), 0, 2), InputError);
}

TEST_CASE("rewrite certificate for the six-cycle") {
    StraightenContext ctx(2, 3);
    CorrelatedTableau C = six_cycle();
    RewriteCertificate cert = rewrite_simple_connected(C);
    std::string why;
    CHECK(verify_certificate(cert, ctx, &why));
    CHECK(why.empty());
    for (const auto& [key, c] : cert.output_terms.terms) CHECK(classify(key) != GraphClass::ConnectedSimple);
    CHECK_FALSE(cert.transcript.empty());
}

TEST_CASE("rewrite preconditions") {
    Guards g;
    CorrelatedTableau blockdiag{2, 2, {0, 0, 3, 3}};
    CHECK_THROWS_AS(rewrite_simple_connected(blockdiag, g), InputError);  // not simple connected

    // simple connected but d < n+1 cannot happen for n=2,d=2 (a 4-cycle is
    // simple connected); the rewrite must still refuse it
    CorrelatedTableau fourcycle{2, 2, {0, 1, 3, 2}};
    REQUIRE(classify(fourcycle) == GraphClass::ConnectedSimple);
    CHECK_THROWS_AS(rewrite_simple_connected(fourcycle, g), InputError);

    Guards tight;
    tight.max_rewrite_labels = 4;
    CHECK_THROWS_AS(rewrite_simple_connected(six_cycle(), tight), GuardError);
}

TEST_CASE("tampered certificates fail verification") {
    StraightenContext ctx(2, 3);
    RewriteCertificate cert = rewrite_simple_connected(six_cycle());
    REQUIRE(verify_certificate(cert, ctx));

    // perturb one coefficient
    RewriteCertificate bad1 = cert;
    auto it = bad1.output_terms.terms.begin();
    it->second += 1;
    std::string why;
    CHECK_FALSE(verify_certificate(bad1, ctx, &why));
    CHECK(why == "input != outputTerms + kernelPart");

    // smuggle a connected simple key into the output support, rebalancing the
    // kernel part so the expression identity still holds
    RewriteCertificate bad2 = cert;
    Expression smuggle(2, 3);
    smuggle.add(six_cycle(), Rat(1, 7));
    bad2.output_terms += smuggle;
    bad2.kernel_part = bad2.kernel_part - smuggle;
    CHECK_FALSE(verify_certificate(bad2, ctx, &why));
    CHECK(why == "outputTerms contains a connected simple key");

    // break the kernel part while keeping the sum: move a non-simple key mass
    RewriteCertificate bad3 = cert;
    Expression shift(2, 3);
    shift.add(bad3.output_terms.terms.begin()->first, Rat(1, 3));
    bad3.output_terms += shift;
    bad3.kernel_part = bad3.kernel_part - shift;
    CHECK_FALSE(verify_certificate(bad3, ctx, &why));
    CHECK(why == "kernelPart has nonzero canonical form");
}
