#ifndef KUROSH_ORACLE_HPP
#define KUROSH_ORACLE_HPP

// Brute-force ground truth: bounded balls of words, subgroup graphs folded
// from explicit generating sets, and intersections filtered by membership.

#include "kurosh/kurosh_graph.hpp"

#include <cstdlib>
#include <set>
#include <string>
#include <vector>

namespace kurosh {

constexpr std::size_t default_oracle_budget = 1000000;

/// Element budget, overridable through KUROSH_ORACLE_BUDGET.
inline std::size_t oracle_budget()
{
    if (const char* env = std::getenv("KUROSH_ORACLE_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return default_oracle_budget;
}

struct Ball {
    Presentation presentation;
    int max_syllables = 0;
    int max_exponent = 0;
    std::vector<Word> elements;
};

namespace detail {

// Nonzero letters of factor f with coordinates in [-E, E], ordered
// lexicographically.
inline std::vector<FactorElement> letters_in_box(int rank, int bound)
{
    std::vector<FactorElement> out;
    FactorElement x(static_cast<std::size_t>(rank), -bound);
    for (;;) {
        if (!is_zero(x))
            out.push_back(x);
        int i = rank - 1;
        while (i >= 0 && x[static_cast<std::size_t>(i)] == bound)
            x[static_cast<std::size_t>(i--)] = -bound;
        if (i < 0)
            return out;
        ++x[static_cast<std::size_t>(i)];
    }
}

} // namespace detail

/// Every word with at most L syllables and coordinates bounded by E, in
/// order of syllable count then lexicographically.
inline Ball enumerate_ball(const Presentation& p, int max_syllables, int max_exponent)
{
    Ball ball{p, max_syllables, max_exponent, {Word{}}};
    if (max_exponent < 1)
        return ball;
    std::vector<std::vector<FactorElement>> letters;
    for (int f = 0; f < p.size(); ++f)
        letters.push_back(detail::letters_in_box(p.rank_of(f), max_exponent));
    std::vector<Word> layer{Word{}};
    for (int len = 1; len <= max_syllables; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (int f = 0; f < p.size(); ++f) {
                if (!w.empty() && w.syllables.back().factor == f)
                    continue;
                for (const auto& x : letters[static_cast<std::size_t>(f)]) {
                    Word v = w;
                    v.syllables.push_back(Syllable{f, x});
                    next.push_back(std::move(v));
                }
            }
        ball.elements.insert(ball.elements.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return ball;
}

struct OracleResult {
    KuroshGraph graph;
    bool stable = false;
    bool within_budget = true;
    std::size_t explored = 0;
};

/// Folds every product of at most L generators and their inverses.
inline OracleResult closure_graph_at(const Presentation& p, const std::vector<Word>& gens, int max_factors,
                                     std::size_t budget = oracle_budget())
{
    OracleResult r;
    r.graph = build_folded(p, {});
    std::vector<Word> letters;
    for (const auto& g : gens) {
        if (g.empty())
            continue;
        letters.push_back(g);
        letters.push_back(invert(g));
    }
    std::set<Word> seen{Word{}};
    std::vector<Word> layer{Word{}};
    for (int len = 1; len <= max_factors && !letters.empty(); ++len) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (const auto& l : letters) {
                Word v = multiply_reduce(w, l);
                if (!seen.insert(v).second)
                    continue;
                if (++r.explored > budget) {
                    r.within_budget = false;
                    return r;
                }
                if (!member(r.graph, v))
                    r.graph = extend_folded(r.graph, v);
                next.push_back(std::move(v));
            }
        layer = std::move(next);
    }
    return r;
}

/// closure_graph_at(L), marked stable when it agrees with L + 1.
inline OracleResult closure_graph(const Presentation& p, const std::vector<Word>& gens, int max_factors,
                                  std::size_t budget = oracle_budget())
{
    OracleResult a = closure_graph_at(p, gens, max_factors, budget);
    const OracleResult b = closure_graph_at(p, gens, max_factors + 1, budget);
    a.within_budget = a.within_budget && b.within_budget;
    a.stable = a.within_budget && canonical_form(a.graph) == canonical_form(b.graph);
    return a;
}

/// Folds { w in ball(L, E) : w in H and w in K }. The ball is walked depth
/// first and a prefix is abandoned as soon as it cannot be read in one of the
/// two graphs, which visits exactly the prefixes of the filtered set.
inline OracleResult intersection_oracle_at(const KuroshGraph& gh, const KuroshGraph& gk, int max_syllables,
                                           int max_exponent, std::size_t budget = oracle_budget())
{
    if (!(gh.presentation == gk.presentation))
        throw PresentationMismatch("intersection of subgroups of different groups");
    const Presentation& p = gh.presentation;
    OracleResult r;
    r.graph = build_folded(p, {});
    std::vector<std::vector<FactorElement>> letters;
    for (int f = 0; f < p.size(); ++f)
        letters.push_back(detail::letters_in_box(p.rank_of(f), max_exponent));

    struct Frame {
        Word word;
        int bh, bk;
    };
    std::vector<Frame> stack{{Word{}, gh.basepoint, gk.basepoint}};
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        if (++r.explored > budget) {
            r.within_budget = false;
            return r;
        }
        if (!fr.word.empty() && fr.bh == gh.basepoint && fr.bk == gk.basepoint && !member(r.graph, fr.word))
            r.graph = extend_folded(r.graph, fr.word);
        if (static_cast<int>(fr.word.length()) == max_syllables)
            continue;
        for (int f = p.size() - 1; f >= 0; --f) {
            if (!fr.word.empty() && fr.word.syllables.back().factor == f)
                continue;
            if (gh.edge_at(fr.bh, f) < 0 || gk.edge_at(fr.bk, f) < 0)
                continue;
            const auto& lf = letters[static_cast<std::size_t>(f)];
            for (auto it = lf.rbegin(); it != lf.rend(); ++it) {
                const Word step{{Syllable{f, *it}}};
                const auto nh = trace_from(gh, fr.bh, step);
                if (!nh)
                    continue;
                const auto nk = trace_from(gk, fr.bk, step);
                if (!nk)
                    continue;
                Word next = fr.word;
                next.syllables.push_back(Syllable{f, *it});
                stack.push_back(Frame{std::move(next), *nh, *nk});
            }
        }
    }
    return r;
}

inline OracleResult intersection_oracle(const KuroshGraph& gh, const KuroshGraph& gk, int max_syllables,
                                        int max_exponent, std::size_t budget = oracle_budget())
{
    OracleResult a = intersection_oracle_at(gh, gk, max_syllables, max_exponent, budget);
    if (!a.within_budget)
        return a;
    const OracleResult b = intersection_oracle_at(gh, gk, max_syllables + 1, max_exponent + 1, budget);
    a.within_budget = b.within_budget;
    a.stable = b.within_budget && canonical_form(a.graph) == canonical_form(b.graph);
    return a;
}

inline OracleResult intersection_oracle(const Presentation& p, const std::vector<Word>& gens_h,
                                        const std::vector<Word>& gens_k, int max_syllables, int max_exponent,
                                        std::size_t budget = oracle_budget())
{
    return intersection_oracle(build_folded(p, gens_h), build_folded(p, gens_k), max_syllables, max_exponent, budget);
}

/// Ball bounds sized from the two graphs: syllables enough to spell a loop
/// through every vertex pair twice (capped), exponents enough to reach the
/// generators of every pairwise stabiliser meet plus any label offset. The
/// exponent bound is never clamped; callers refuse instances it makes too big.
inline std::pair<int, int> auto_bounds(const KuroshGraph& gh, const KuroshGraph& gk, int max_syllables = 10)
{
    auto max_abs = [](const FactorElement& x) {
        BigInt m = 0;
        for (const auto& c : x)
            m = std::max(m, BigInt(abs(c)));
        return m;
    };
    auto max_label = [&](const KuroshGraph& g) {
        BigInt m = 0;
        for (const auto& e : g.edges)
            m = std::max(m, max_abs(e.label));
        return m;
    };
    BigInt e = 1 + max_label(gh) + max_label(gk);
    BigInt meet = 1;
    for (const auto& u : gh.fverts)
        for (const auto& v : gk.fverts)
            if (u.factor == v.factor) {
                const FactorSubgroup m = lattice_intersect(u.stab, v.stab);
                for (const auto& row : m.basis())
                    meet = std::max(meet, max_abs(row));
            }
    e += meet;
    const int pairs = gh.num_b * gk.num_b;
    const int l = std::min(max_syllables, std::max(2, 2 * pairs));
    return {l, static_cast<int>(e)};
}

} // namespace kurosh

#endif
