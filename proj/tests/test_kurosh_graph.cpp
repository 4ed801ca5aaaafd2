#include "kurosh/kurosh_graph.hpp"
#include "kurosh/oracle.hpp"
#include "kurosh/text_format.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace kurosh;

namespace {

const Presentation zz = parse_presentation("Z,Z");
const Presentation zzz = parse_presentation("Z,Z,Z");
const Presentation mixed = parse_presentation("Z,Z^2,Z");

KuroshGraph graph(const std::string& gens, const Presentation& p = zz)
{
    return build_folded(p, parse_generators(gens, p));
}

std::vector<Word> random_gens(const Presentation& p, std::mt19937_64& rng, int max_gens = 3, int len = 4, int e = 3)
{
    std::vector<Word> gens;
    const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_gens));
    for (int i = 0; i < n; ++i)
        gens.push_back(random_word(p, len, e, rng));
    return gens;
}

KuroshRank rank(int c, int betti, int kappa, int reduced) { return KuroshRank{c, betti, kappa, reduced}; }

} // namespace

TEST(KuroshGraph, RankExamples)
{
    const auto g1 = graph("a1^2");
    EXPECT_EQ(g1.num_f(), 1);
    EXPECT_EQ(g1.fvert(0).stab.basis().size(), 1u);
    EXPECT_EQ(g1.fvert(0).stab.basis()[0][0], 2);
    EXPECT_EQ(kurosh_rank(g1), rank(1, 0, 1, 0));
    EXPECT_EQ(kurosh_rank(graph("a1 ; a2")), rank(2, 0, 2, 1));
    const auto g3 = graph("a1 a2");
    EXPECT_EQ(g3.num_edges(), 4);
    EXPECT_EQ(kurosh_rank(g3), rank(0, 1, 1, 0));
    EXPECT_EQ(kurosh_rank(graph("")), rank(0, 0, 0, 0));
    EXPECT_EQ(kurosh_rank(graph("a1 a1^-1")), rank(0, 0, 0, 0));
    EXPECT_EQ(graph("a1 a1^-1").warnings.size(), 1u);
}

TEST(KuroshGraph, MembershipExamples)
{
    const auto g = graph("a1^2 ; a1 a2 a1^-1");
    EXPECT_TRUE(member(g, parse_word("a1^4", zz)));
    EXPECT_TRUE(member(g, parse_word("a1 a2^5 a1^-1", zz)));
    EXPECT_TRUE(member(g, parse_word("a1^3 a2^-2 a1^-1", zz)));
    EXPECT_FALSE(member(g, parse_word("a1", zz)));
    EXPECT_FALSE(member(g, parse_word("a2", zz)));
    EXPECT_TRUE(member(g, parse_word("a1 a2 a1", zz)));
    EXPECT_FALSE(member(g, parse_word("a1 a2 a1^2", zz)));
    EXPECT_TRUE(member(g, Word{}));
    EXPECT_THROW(member(g, parse_word("a3", zzz)), PresentationMismatch);
}

TEST(KuroshGraph, DecompositionExamples)
{
    auto d = decomposition(graph("a1 ; a2"));
    ASSERT_EQ(d.parts.size(), 2u);
    EXPECT_TRUE(d.free_basis.empty());
    std::set<int> factors;
    for (const auto& part : d.parts) {
        EXPECT_TRUE(part.rep.empty());
        EXPECT_TRUE(part.stab.is_full());
        factors.insert(part.factor);
    }
    EXPECT_EQ(factors, (std::set<int>{0, 1}));

    d = decomposition(graph("a1^2 ; a1 a2 a1^-1"));
    ASSERT_EQ(d.parts.size(), 2u);
    EXPECT_TRUE(d.free_basis.empty());
    for (const auto& part : d.parts) {
        if (part.factor == 0) {
            EXPECT_TRUE(part.rep.empty());
            EXPECT_EQ(part.stab.basis()[0][0], 2);
        } else {
            // Any representative of the coset a1 A_2 works; check conjugacy.
            EXPECT_TRUE(part.stab.is_full());
            EXPECT_TRUE(member(graph("a1^2 ; a1 a2 a1^-1"), product(part.rep, power(1, 1), invert(part.rep))));
            EXPECT_EQ(format(strip_trailing(part.rep, 1)), "a1");
        }
    }

    d = decomposition(graph("a1 a2"));
    EXPECT_TRUE(d.parts.empty());
    ASSERT_EQ(d.free_basis.size(), 1u);
    const Word b = d.free_basis[0];
    EXPECT_TRUE(b == parse_word("a1 a2", zz) || b == parse_word("a2^-1 a1^-1", zz)) << format(b);
}

TEST(KuroshGraph, CanonicalFormExamples)
{
    EXPECT_EQ(canonical_form(graph("a1 ; a2")), canonical_form(graph("a2 ; a1 a2")));
    EXPECT_EQ(canonical_form(graph("a1^2 ; a1^3")), canonical_form(graph("a1")));
    EXPECT_NE(canonical_form(graph("a1^2")), canonical_form(graph("a1")));
    EXPECT_NE(canonical_form(graph("a1 a2")), canonical_form(graph("a2 a1")));
    EXPECT_EQ(canonical_form(graph("a1 a2")), canonical_form(graph("a2^-1 a1^-1")));
}

TEST(KuroshGraph, FoldScheduleConfluence)
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& p = (trial % 3 == 0) ? mixed : (trial % 3 == 1 ? zz : zzz);
        auto gens = random_gens(p, rng);
        const std::string ref = canonical_form(build_folded(p, gens));
        for (int s = 0; s < 3; ++s) {
            std::shuffle(gens.begin(), gens.end(), rng);
            std::mt19937_64 schedule(rng());
            EXPECT_EQ(canonical_form(build_folded(p, gens, &schedule)), ref) << format(gens);
        }
    }
}

TEST(KuroshGraph, FoldedInvariants)
{
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        const auto& p = (trial % 2) ? mixed : zzz;
        const auto gens = random_gens(p, rng);
        const auto g = build_folded(p, gens);
        for (int b = 0; b < g.num_b; ++b) {
            std::set<int> seen;
            for (int e : g.b_edges(b))
                EXPECT_TRUE(seen.insert(g.factor_of(e)).second);
            EXPECT_LE(g.b_edges(b).size(), static_cast<std::size_t>(p.size()));
        }
        for (int f = 0; f < g.num_f(); ++f)
            for (int e : g.f_edges(f))
                EXPECT_EQ(coset_reduce(g.fvert(f).stab, g.edge(e).label), g.edge(e).label);
        for (const auto& w : gens)
            EXPECT_TRUE(member(g, w)) << format(w);
        // Products of generators are members.
        for (int k = 0; k < 5; ++k) {
            Word x;
            for (int j = 0; j < 4; ++j) {
                const Word& y = gens[rng() % gens.size()];
                x = multiply_reduce(x, (rng() % 2) ? y : invert(y));
            }
            EXPECT_TRUE(member(g, x));
        }
    }
}

TEST(KuroshGraph, TraceIsConsistentWithMultiplication)
{
    std::mt19937_64 rng(57);
    for (int trial = 0; trial < 300; ++trial) {
        const auto g = build_folded(mixed, random_gens(mixed, rng));
        const Word u = random_word(mixed, 3, 3, rng), v = random_word(mixed, 3, 3, rng);
        const auto tu = trace(g, u);
        if (!tu)
            continue;
        const auto tuv = trace(g, multiply_reduce(u, v));
        const auto tv = trace_from(g, *tu, v);
        EXPECT_EQ(tuv.has_value(), tv.has_value());
        if (tv && tuv)
            EXPECT_EQ(*tv, *tuv);
    }
}

TEST(KuroshGraph, DecompositionRoundTrip)
{
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& p = (trial % 2) ? mixed : zzz;
        const auto g = build_folded(p, random_gens(p, rng));
        const auto d = decomposition(g);
        const auto r = kurosh_rank(g);
        EXPECT_EQ(static_cast<int>(d.parts.size()), r.c);
        EXPECT_EQ(static_cast<int>(d.free_basis.size()), r.betti);
        const auto gens = d.generators();
        for (const auto& w : gens)
            EXPECT_TRUE(member(g, w)) << format(w);
        EXPECT_EQ(canonical_form(build_folded(p, gens)), canonical_form(g)) << format(gens);
    }
}

TEST(KuroshGraph, SpurInvariance)
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& p = (trial % 2) ? mixed : zz;
        const auto g = build_folded(p, random_gens(p, rng));
        const auto r = kurosh_rank(g);
        for (int count : {1, 3, 6}) {
            KuroshGraph h = g;
            attach_hanging(h, count, rng);
            EXPECT_EQ(kurosh_rank(h), r);
        }
    }
}

TEST(KuroshGraph, AgreesWithClosureOracle)
{
    std::mt19937_64 rng(67);
    int stable = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto gens = random_gens(zz, rng, 2, 3, 2);
        const auto o = closure_graph(zz, gens, 3, 200000);
        if (!o.stable)
            continue;
        ++stable;
        EXPECT_EQ(canonical_form(o.graph), canonical_form(build_folded(zz, gens))) << format(gens);
    }
    EXPECT_GT(stable, 20);
}

TEST(Oracle, BallCounts)
{
    EXPECT_EQ(enumerate_ball(zz, 1, 1).elements.size(), 5u);
    EXPECT_EQ(enumerate_ball(zz, 2, 1).elements.size(), 13u);
    EXPECT_EQ(enumerate_ball(parse_presentation("Z^2"), 1, 1).elements.size(), 9u);
    const auto b = enumerate_ball(zz, 3, 2);
    EXPECT_EQ(b.elements.size(), 1u + 8 + 32 + 128);
    std::set<Word> distinct(b.elements.begin(), b.elements.end());
    EXPECT_EQ(distinct.size(), b.elements.size());
    for (const auto& w : b.elements)
        EXPECT_TRUE(is_normal(w));
}

TEST(Oracle, BudgetIsRespected)
{
    const auto gh = graph("a1 ; a2"), gk = graph("a1 ; a2");
    const auto o = intersection_oracle(gh, gk, 6, 3, 1000);
    EXPECT_FALSE(o.within_budget);
    EXPECT_FALSE(o.stable);
}
