#ifndef KUROSH_MAGNUS_ORDER_HPP
#define KUROSH_MAGNUS_ORDER_HPP

// Bi-invariant total order on free groups (every factor Z) from the Magnus
// embedding a_i -> 1 + X_i into integer power series in noncommuting X_i.
//
// g and h are compared through the lowest-degree homogeneous component of
// mu(g) - mu(h) = mu(h)(mu(h^-1 g) - 1), which equals that of mu(h^-1 g) - 1.
// Within that degree the first monomial in graded-lex order (variables ranked
// by the configured variable order) decides: a positive coefficient means
// g > h. Left and right multiplication by any w multiplies the difference by
// 1 + (higher terms), so the decision is bi-invariant.

#include "kurosh/words.hpp"

#include <compare>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace kurosh {

class UnsupportedOrder : public std::invalid_argument {
public:
    explicit UnsupportedOrder(const std::string& what)
        : std::invalid_argument("unsupported order: " + what)
    {
    }
};

/// Orbit order on ET/G and variable order for the Magnus expansion; both
/// list 0-based factor indices from smallest to largest.
struct OrderConfig {
    std::vector<int> orbit_order;
    std::vector<int> variable_order;

    static OrderConfig identity(int n)
    {
        OrderConfig c;
        c.orbit_order.resize(static_cast<std::size_t>(n));
        std::iota(c.orbit_order.begin(), c.orbit_order.end(), 0);
        c.variable_order = c.orbit_order;
        return c;
    }

    /// rank[i] = position of factor i in `order`.
    static std::vector<int> ranks(const std::vector<int>& order)
    {
        std::vector<int> r(order.size());
        for (std::size_t pos = 0; pos < order.size(); ++pos)
            r[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
        return r;
    }
};

inline void require_free_group(const Presentation& p)
{
    if (!p.all_cyclic())
        throw UnsupportedOrder("the Magnus order is implemented only when every factor is Z");
}

/// Truncated power series: monomials are strings of variable indices.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int degree_cap) : cap_(degree_cap) { terms_[std::string()] = 1; }

    int degree_cap() const { return cap_; }
    const std::map<std::string, BigInt>& terms() const { return terms_; }

    /// Right-multiplies by (1 + X_var)^k.
    void multiply_power(int var, const BigInt& k)
    {
        std::vector<BigInt> binom{1};
        for (int j = 1; j <= cap_; ++j) {
            // C(k, j) = C(k, j-1) * (k - j + 1) / j, exact for negative k too.
            BigInt next = binom.back() * (k - (j - 1)) / j;
            binom.push_back(next);
        }
        std::map<std::string, BigInt> out;
        for (const auto& [mono, coeff] : terms_) {
            std::string m = mono;
            for (int j = 0; j + static_cast<int>(mono.size()) <= cap_; ++j) {
                if (binom[static_cast<std::size_t>(j)] != 0) {
                    auto& slot = out[m];
                    slot += coeff * binom[static_cast<std::size_t>(j)];
                }
                m.push_back(static_cast<char>(var));
            }
        }
        terms_.clear();
        for (auto& [m, c] : out)
            if (c != 0)
                terms_.emplace(m, std::move(c));
    }

private:
    int cap_;
    std::map<std::string, BigInt> terms_;
};

inline TruncatedSeries magnus_expansion(const Word& w, int degree_cap)
{
    TruncatedSeries s(degree_cap);
    for (const auto& syl : w.syllables)
        s.multiply_power(syl.factor, syl.letter.at(0));
    return s;
}

namespace detail {

inline bool graded_lex_less(const std::string& a, const std::string& b, const std::vector<int>& var_rank)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int ra = var_rank[static_cast<std::size_t>(a[i])];
        const int rb = var_rank[static_cast<std::size_t>(b[i])];
        if (ra != rb)
            return ra < rb;
    }
    return false;
}

// Sign of the leading coefficient of mu(u) - 1 for u != identity.
inline int leading_sign(const Word& u, const std::vector<int>& var_rank)
{
    // Degree one: the exponent-sum vector.
    std::vector<BigInt> sums(var_rank.size(), 0);
    for (const auto& s : u.syllables)
        sums[static_cast<std::size_t>(s.factor)] += s.letter.at(0);
    int best = -1;
    for (std::size_t v = 0; v < sums.size(); ++v)
        if (sums[v] != 0 && (best < 0 || var_rank[v] < var_rank[static_cast<std::size_t>(best)]))
            best = static_cast<int>(v);
    if (best >= 0)
        return sums[static_cast<std::size_t>(best)] > 0 ? 1 : -1;

    const BigInt len = generator_length(u);
    for (int d = 2;; ++d) {
        if (len < d)
            throw std::logic_error("Magnus expansion of a nontrivial word vanished up to its length");
        const TruncatedSeries s = magnus_expansion(u, d);
        const std::string* lead = nullptr;
        const BigInt* coeff = nullptr;
        for (const auto& [m, c] : s.terms()) {
            if (m.empty() || c == 0)
                continue;
            if (!lead || graded_lex_less(m, *lead, var_rank)) {
                lead = &m;
                coeff = &c;
            }
        }
        if (lead)
            return *coeff > 0 ? 1 : -1;
    }
}

inline std::strong_ordering to_ordering(int sign)
{
    return sign < 0 ? std::strong_ordering::less
                    : (sign > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

} // namespace detail

inline std::strong_ordering magnus_compare(const Word& g, const Word& h, const std::vector<int>& variable_order)
{
    if (g == h)
        return std::strong_ordering::equal;
    const Word u = multiply_reduce(invert(h), g);
    return detail::to_ordering(detail::leading_sign(u, OrderConfig::ranks(variable_order)));
}

inline std::strong_ordering magnus_compare(const Presentation& p, const Word& g, const Word& h,
                                           const OrderConfig& cfg)
{
    require_free_group(p);
    return magnus_compare(g, h, cfg.variable_order);
}

/// Sign of g relative to the identity.
inline int magnus_sign(const Word& g, const std::vector<int>& variable_order)
{
    if (g.empty())
        return 0;
    return detail::leading_sign(g, OrderConfig::ranks(variable_order));
}

/// Name of a Bass-Serre tree edge: the edge joining the central vertex
/// `element` to the factor vertex element*A_index.
struct EdgeName {
    int orbit = 0;
    Word element;

    friend bool operator==(const EdgeName&, const EdgeName&) = default;
};

inline std::strong_ordering edge_compare(const EdgeName& e, const EdgeName& f, const OrderConfig& cfg)
{
    if (e.orbit != f.orbit) {
        const auto r = OrderConfig::ranks(cfg.orbit_order);
        return r[static_cast<std::size_t>(e.orbit)] <=> r[static_cast<std::size_t>(f.orbit)];
    }
    return magnus_compare(e.element, f.element, cfg.variable_order);
}

inline std::strong_ordering edge_compare(const Presentation& p, const EdgeName& e, const EdgeName& f,
                                         const OrderConfig& cfg)
{
    require_free_group(p);
    return edge_compare(e, f, cfg);
}

} // namespace kurosh

#endif
