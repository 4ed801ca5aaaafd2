#include "kurosh/magnus_order.hpp"
#include "kurosh/text_format.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

using namespace kurosh;

namespace {

const Presentation f2 = Presentation::free_group(2);
const Presentation f3 = Presentation::free_group(3);

Word w(const std::string& s, const Presentation& p = f2) { return parse_word(s, p); }

// Independent oracle: expand letter by letter (a -> 1 + X, a^-1 -> sum of
// (-X)^j) with dense monomial maps, then compare mu(g) and mu(h) at the first
// graded-lex monomial where they differ.
using Dense = std::map<std::vector<int>, BigInt>;

Dense expand(const Word& g, int cap)
{
    Dense s{{{}, 1}};
    for (const auto& syl : g.syllables) {
        const int v = syl.factor;
        const long long e = static_cast<long long>(syl.letter[0]);
        for (long long step = 0; step < (e < 0 ? -e : e); ++step) {
            Dense out;
            for (const auto& [m, c] : s) {
                auto mono = m;
                for (int j = 0; static_cast<int>(mono.size()) <= cap; ++j) {
                    const BigInt coeff = (e > 0) ? (j <= 1 ? BigInt(1) : BigInt(0)) : (j % 2 ? BigInt(-1) : BigInt(1));
                    if (coeff != 0)
                        out[mono] += c * coeff;
                    mono.push_back(v);
                }
            }
            s.clear();
            for (auto& [m, c] : out)
                if (c != 0)
                    s[m] = c;
        }
    }
    return s;
}

int oracle_compare(const Word& g, const Word& h, const std::vector<int>& var_order)
{
    if (g == h)
        return 0;
    const auto rank = OrderConfig::ranks(var_order);
    const int cap = static_cast<int>(generator_length(g) + generator_length(h));
    const Dense a = expand(g, cap), b = expand(h, cap);
    std::vector<std::vector<int>> monos;
    for (const auto* d : {&a, &b})
        for (const auto& [m, c] : *d)
            monos.push_back(m);
    std::sort(monos.begin(), monos.end(), [&](const auto& x, const auto& y) {
        if (x.size() != y.size())
            return x.size() < y.size();
        for (std::size_t i = 0; i < x.size(); ++i)
            if (rank[static_cast<std::size_t>(x[i])] != rank[static_cast<std::size_t>(y[i])])
                return rank[static_cast<std::size_t>(x[i])] < rank[static_cast<std::size_t>(y[i])];
        return false;
    });
    for (const auto& m : monos) {
        const BigInt ca = a.count(m) ? a.at(m) : BigInt(0);
        const BigInt cb = b.count(m) ? b.at(m) : BigInt(0);
        if (ca != cb)
            return ca < cb ? -1 : 1;
    }
    return 0;
}

int sign(std::strong_ordering o) { return o < 0 ? -1 : (o > 0 ? 1 : 0); }

std::vector<Word> ball(const Presentation& p, int max_len)
{
    // All reduced words of generator length <= max_len.
    std::vector<Word> out{Word{}};
    std::vector<Word> frontier{Word{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& u : frontier)
            for (int f = 0; f < p.size(); ++f)
                for (int e : {-1, 1}) {
                    const Word v = multiply_reduce(u, power(f, e));
                    if (generator_length(v) == len)
                        next.push_back(v);
                }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        out.insert(out.end(), next.begin(), next.end());
        frontier = next;
    }
    return out;
}

} // namespace

TEST(MagnusOrder, CompareExamples)
{
    const std::vector<int> id{0, 1};
    EXPECT_TRUE(std::is_lt(magnus_compare(Word{}, w("a1"), id)));
    EXPECT_TRUE(std::is_eq(magnus_compare(w("a1"), w("a1"), id)));
    EXPECT_TRUE(std::is_gt(magnus_compare(w("a1 a2"), w("a2 a1"), id)));
    // Oracle agreement on the same examples.
    EXPECT_EQ(oracle_compare(Word{}, w("a1"), id), -1);
    EXPECT_EQ(oracle_compare(w("a1 a2"), w("a2 a1"), id), 1);
}

TEST(MagnusOrder, RejectsHigherRankFactors)
{
    const auto p = parse_presentation("Z,Z^2");
    EXPECT_THROW(magnus_compare(p, Word{}, Word{}, OrderConfig::identity(2)), UnsupportedOrder);
}

TEST(MagnusOrder, EdgeCompareExamples)
{
    const auto cfg = OrderConfig::identity(2);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const EdgeName e{0, random_word(f2, 4, 3, rng)}, f{1, random_word(f2, 4, 3, rng)};
        EXPECT_TRUE(std::is_lt(edge_compare(e, f, cfg)));
    }
    EXPECT_TRUE(std::is_eq(edge_compare(EdgeName{0, w("a1")}, EdgeName{0, w("a1")}, cfg)));
    EXPECT_TRUE(std::is_lt(edge_compare(EdgeName{0, w("a1^-1")}, EdgeName{0, w("a1")}, cfg)));
}

TEST(MagnusOrder, AgreesWithLetterByLetterOracle)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 1500; ++i) {
        const auto& p = (i % 2) ? f2 : f3;
        std::vector<int> vars(static_cast<std::size_t>(p.size()));
        std::iota(vars.begin(), vars.end(), 0);
        std::shuffle(vars.begin(), vars.end(), rng);
        const Word g = random_word(p, 3, 2, rng), h = random_word(p, 3, 2, rng);
        EXPECT_EQ(sign(magnus_compare(g, h, vars)), oracle_compare(g, h, vars)) << format(g) << " vs " << format(h);
    }
}

TEST(MagnusOrder, OrderLawsOnBall)
{
    const auto words = ball(f2, 4);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    const std::vector<int> id{0, 1}, rev{1, 0};
    for (int i = 0; i < 4000; ++i) {
        const auto& vars = (i % 2) ? id : rev;
        const Word& x = words[pick(rng)];
        const Word& y = words[pick(rng)];
        const Word& z = words[pick(rng)];
        const int xy = sign(magnus_compare(x, y, vars));
        EXPECT_EQ(xy == 0, x == y);
        EXPECT_EQ(sign(magnus_compare(y, x, vars)), -xy);
        const int yz = sign(magnus_compare(y, z, vars));
        if (xy < 0 && yz < 0)
            EXPECT_LT(sign(magnus_compare(x, z, vars)), 0);
        EXPECT_EQ(sign(magnus_compare(multiply_reduce(z, x), multiply_reduce(z, y), vars)), xy);
        EXPECT_EQ(sign(magnus_compare(multiply_reduce(x, z), multiply_reduce(y, z), vars)), xy);
        if (magnus_sign(x, vars) > 0)
            EXPECT_GT(magnus_sign(product(z, x, invert(z)), vars), 0);
    }
}

TEST(MagnusOrder, PowerMonotonicity)
{
    for (int f = 0; f < 3; ++f)
        for (int k = -6; k < 6; ++k)
            for (const auto& vars : {std::vector<int>{0, 1, 2}, std::vector<int>{2, 0, 1}})
                EXPECT_TRUE(std::is_lt(magnus_compare(power(f, k), power(f, k + 1), vars)));
}

TEST(MagnusOrder, TruncationSoundness)
{
    std::mt19937_64 rng(6);
    const auto rank = OrderConfig::ranks({0, 1});
    for (int i = 0; i < 300; ++i) {
        const Word g = random_word(f2, 4, 2, rng), h = random_word(f2, 4, 2, rng);
        if (g == h)
            continue;
        const Word u = multiply_reduce(invert(h), g);
        const int d = static_cast<int>(generator_length(g) + generator_length(h));
        // The leading term found at degree cap d persists at cap d + 1.
        auto lead = [&](int cap) {
            const auto s = magnus_expansion(u, cap);
            std::pair<std::string, BigInt> best{"", 0};
            bool found = false;
            for (const auto& [m, c] : s.terms())
                if (!m.empty() && (!found || detail::graded_lex_less(m, best.first, rank))) {
                    best = {m, c};
                    found = true;
                }
            return best;
        };
        EXPECT_EQ(lead(d), lead(d + 1));
    }
}
