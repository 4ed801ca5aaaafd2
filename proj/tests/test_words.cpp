#include "kurosh/text_format.hpp"
#include "kurosh/words.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace kurosh;

namespace {

const Presentation zz = parse_presentation("Z,Z");
const Presentation mixed = parse_presentation("Z, Z, Z^2");

Word w(const std::string& s, const Presentation& p = zz) { return parse_word(s, p); }

} // namespace

TEST(Words, MultiplyExamples)
{
    EXPECT_TRUE(multiply_reduce(w("a1^2"), w("a1^-2")).empty());
    EXPECT_EQ(multiply_reduce(w("a1 a2"), w("a2^-1 a1")), w("a1^2"));
    EXPECT_TRUE(multiply_reduce(w("a3[1,2]", mixed), w("a3[-1,-2]", mixed)).empty());
}

TEST(Words, InvertExamples)
{
    EXPECT_EQ(invert(w("a1 a2^3")), w("a2^-3 a1^-1"));
    EXPECT_TRUE(invert(Word{}).empty());
    EXPECT_EQ(invert(w("a1^2")), w("a1^-2"));
}

TEST(Words, RandomWordSupportAndDeterminism)
{
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        seen.insert(format(random_word(zz, 1, 1, seed)));
    EXPECT_EQ(seen, (std::set<std::string>{"a1", "a1^-1", "a2", "a2^-1"}));

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        EXPECT_EQ(random_word(mixed, 6, 4, seed), random_word(mixed, 6, 4, seed));
        const Word r = random_word(zz, 3, 2, seed);
        EXPECT_LE(r.length(), 3u);
        EXPECT_TRUE(is_normal(r));
        for (const auto& s : r.syllables)
            EXPECT_LE(abs(s.letter[0]), 2);
    }
}

TEST(Words, GroupAxiomsSampled)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const Word a = random_word(mixed, 4, 2, rng), b = random_word(mixed, 4, 2, rng),
                   c = random_word(mixed, 4, 2, rng);
        const Word ab = multiply_reduce(a, b);
        EXPECT_TRUE(is_normal(ab));
        EXPECT_LE(ab.length(), a.length() + b.length());
        EXPECT_EQ(multiply_reduce(ab, c), multiply_reduce(a, multiply_reduce(b, c)));
        EXPECT_EQ(multiply_reduce(a, Word{}), a);
        EXPECT_EQ(multiply_reduce(Word{}, a), a);
        EXPECT_TRUE(multiply_reduce(a, invert(a)).empty());
        EXPECT_TRUE(multiply_reduce(invert(a), a).empty());
    }
}

TEST(Grammar, ParsesPresentations)
{
    EXPECT_EQ(mixed.size(), 3);
    EXPECT_EQ(mixed.rank_of(2), 2);
    EXPECT_EQ(format(parse_presentation(" Z ,Z^3 ")), "Z,Z^3");
}

TEST(Grammar, ParsesGeneratorLists)
{
    const auto gens = parse_generators("a1^2 ; a1 a2 a1^-1", zz);
    ASSERT_EQ(gens.size(), 2u);
    EXPECT_EQ(format(gens[1]), "a1 a2 a1^-1");
    EXPECT_TRUE(parse_generators("  ", zz).empty());
    EXPECT_TRUE(parse_word("a1 a1^-1", zz).empty());
    EXPECT_EQ(format(parse_word("a3[ 1 , -2 ]a1", mixed)), "a3[1,-2] a1");
}

TEST(Grammar, ReportsLineAndColumn)
{
    try {
        parse_generators("a1 ;\n  a2 b", zz);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.column(), 6);
    }
    EXPECT_THROW(parse_word("a3", zz), ParseError);
    EXPECT_THROW(parse_word("a3^2", mixed), ParseError);
    EXPECT_THROW(parse_word("a1[1,2]", mixed), ParseError);
    EXPECT_THROW(parse_presentation("Z,Q"), ParseError);
    EXPECT_THROW(parse_presentation("Z^0"), ParseError);
    EXPECT_THROW(parse_permutation("1,1", 2), ParseError);
    EXPECT_EQ(parse_permutation("2,1", 2), (std::vector<int>{1, 0}));
}

TEST(Grammar, FormatRoundTrip)
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) {
        std::vector<Word> gens;
        const int n = static_cast<int>(rng() % 4);
        for (int j = 0; j < n; ++j)
            gens.push_back(random_word(mixed, 5, 7, rng));
        if (n > 0 && rng() % 5 == 0)
            gens.push_back(Word{});
        const std::string text = format(gens);
        EXPECT_EQ(parse_generators(text, mixed), gens) << text;
    }
    EXPECT_EQ(parse_presentation(format(mixed)), mixed);
}
