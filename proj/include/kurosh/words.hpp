#ifndef KUROSH_WORDS_HPP
#define KUROSH_WORDS_HPP

// Normal forms of elements of a free product A_1 * ... * A_n of free abelian
// factors. A word is a sequence of syllables with alternating factor indices
// and nonzero letters; the empty word is the identity.

#include "kurosh/factor_groups.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kurosh {

class PresentationMismatch : public std::invalid_argument {
public:
    explicit PresentationMismatch(const std::string& what)
        : std::invalid_argument("presentation mismatch: " + what)
    {
    }
};

struct Presentation {
    std::vector<FactorType> factors;

    int size() const { return static_cast<int>(factors.size()); }
    int rank_of(int factor) const { return factors.at(static_cast<std::size_t>(factor)).rank; }
    bool all_cyclic() const
    {
        for (const auto& f : factors)
            if (f.rank != 1)
                return false;
        return true;
    }

    static Presentation free_group(int n) { return {std::vector<FactorType>(static_cast<std::size_t>(n))}; }

    friend bool operator==(const Presentation&, const Presentation&) = default;
};

/// One syllable; `factor` is 0-based (the text form a1 is factor 0).
struct Syllable {
    int factor = 0;
    FactorElement letter;

    friend bool operator==(const Syllable&, const Syllable&) = default;
};

struct Word {
    std::vector<Syllable> syllables;

    bool empty() const { return syllables.empty(); }
    std::size_t length() const { return syllables.size(); }

    friend bool operator==(const Word&, const Word&) = default;
};

inline bool operator<(const Word& a, const Word& b)
{
    if (a.length() != b.length())
        return a.length() < b.length();
    for (std::size_t i = 0; i < a.length(); ++i) {
        const auto& x = a.syllables[i];
        const auto& y = b.syllables[i];
        if (x.factor != y.factor)
            return x.factor < y.factor;
        if (auto c = factor_compare(x.letter, y.letter); c != 0)
            return c < 0;
    }
    return false;
}

inline Syllable syllable(int factor, std::initializer_list<long long> coords)
{
    Syllable s{factor, {}};
    for (auto c : coords)
        s.letter.emplace_back(c);
    return s;
}

/// a_{factor+1}^exponent in a cyclic factor.
inline Word power(int factor, const BigInt& exponent)
{
    if (exponent == 0)
        return {};
    return Word{{Syllable{factor, FactorElement{exponent}}}};
}

inline void validate_word(const Presentation& p, const Word& w)
{
    for (std::size_t i = 0; i < w.syllables.size(); ++i) {
        const auto& s = w.syllables[i];
        if (s.factor < 0 || s.factor >= p.size())
            throw PresentationMismatch("factor index a" + std::to_string(s.factor + 1) + " out of range");
        if (static_cast<int>(s.letter.size()) != p.rank_of(s.factor))
            throw PresentationMismatch("letter of a" + std::to_string(s.factor + 1) + " has wrong length");
    }
}

/// True when adjacent indices differ and no letter is zero.
inline bool is_normal(const Word& w)
{
    for (std::size_t i = 0; i < w.syllables.size(); ++i) {
        if (detail::is_zero(w.syllables[i].letter))
            return false;
        if (i > 0 && w.syllables[i].factor == w.syllables[i - 1].factor)
            return false;
    }
    return true;
}

/// Appends one syllable to a word in normal form, merging and cancelling.
inline void push_reduce(Word& w, const Syllable& s)
{
    if (detail::is_zero(s.letter))
        return;
    if (!w.syllables.empty() && w.syllables.back().factor == s.factor) {
        auto& last = w.syllables.back().letter;
        if (last.size() != s.letter.size())
            throw DimensionMismatch("merging letters of different rank");
        last = last + s.letter;
        if (detail::is_zero(last))
            w.syllables.pop_back();
        return;
    }
    w.syllables.push_back(s);
}

/// Normal form of an arbitrary syllable sequence.
inline Word reduce(const std::vector<Syllable>& seq)
{
    Word w;
    for (const auto& s : seq)
        push_reduce(w, s);
    return w;
}

inline Word multiply_reduce(const Word& u, const Word& v)
{
    Word w = u;
    for (const auto& s : v.syllables)
        push_reduce(w, s);
    return w;
}

template <class... Ws>
Word product(const Word& u, const Ws&... rest)
{
    Word w = u;
    ((w = multiply_reduce(w, rest)), ...);
    return w;
}

inline Word invert(const Word& u)
{
    Word w;
    w.syllables.reserve(u.syllables.size());
    for (auto it = u.syllables.rbegin(); it != u.syllables.rend(); ++it)
        w.syllables.push_back(Syllable{it->factor, -it->letter});
    return w;
}

/// Sum of absolute coordinates over all syllables (generator length).
inline BigInt generator_length(const Word& w)
{
    BigInt n = 0;
    for (const auto& s : w.syllables)
        for (const auto& c : s.letter)
            n += abs(c);
    return n;
}

inline Word random_word(const Presentation& p, int max_syllables, int max_exponent, std::mt19937_64& rng)
{
    if (max_syllables < 1 || max_exponent < 1)
        throw std::invalid_argument("random_word: bounds must be >= 1");
    std::uniform_int_distribution<int> len_dist(1, max_syllables);
    std::uniform_int_distribution<int> coord_dist(-max_exponent, max_exponent);
    const int len = len_dist(rng);
    Word w;
    int prev = -1;
    for (int i = 0; i < len; ++i) {
        if (p.size() == 1 && prev == 0)
            break;
        int f;
        do {
            f = std::uniform_int_distribution<int>(0, p.size() - 1)(rng);
        } while (f == prev);
        Syllable s{f, FactorElement(static_cast<std::size_t>(p.rank_of(f)), 0)};
        do {
            for (auto& c : s.letter)
                c = coord_dist(rng);
        } while (detail::is_zero(s.letter));
        w.syllables.push_back(std::move(s));
        prev = f;
    }
    return w;
}

inline Word random_word(const Presentation& p, int max_syllables, int max_exponent, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return random_word(p, max_syllables, max_exponent, rng);
}

} // namespace kurosh

#endif
