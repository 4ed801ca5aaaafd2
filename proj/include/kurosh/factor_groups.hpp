#ifndef KUROSH_FACTOR_GROUPS_HPP
#define KUROSH_FACTOR_GROUPS_HPP

// Exact arithmetic in the abelian factors Z^k and their subgroup lattices.
//
// A subgroup of Z^k is stored by its row-style Hermite normal form: rows are
// generators, pivot columns strictly increase, pivots are positive and the
// entries above each pivot lie in [0, pivot). This basis is unique for a
// lattice, so lattices compare with ==.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kurosh {

using BigInt = boost::multiprecision::cpp_int;

class DimensionMismatch : public std::invalid_argument {
public:
    explicit DimensionMismatch(const std::string& what)
        : std::invalid_argument("dimension mismatch: " + what)
    {
    }
};

/// Rank k of a factor Z^k (k = 1 is Z).
struct FactorType {
    int rank = 1;

    friend bool operator==(const FactorType&, const FactorType&) = default;
};

/// Coordinate vector of an element of Z^k.
using FactorElement = std::vector<BigInt>;

namespace detail {

inline BigInt floor_div(const BigInt& a, const BigInt& b)
{
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline bool is_zero(const FactorElement& x)
{
    for (const auto& c : x)
        if (c != 0)
            return false;
    return true;
}

inline void axpy(FactorElement& y, const BigInt& q, const FactorElement& x)
{
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] -= q * x[i];
}

// Row echelon form on the first `pivot_cols` columns using unimodular row
// operations (the operations are applied to the full rows). Pivots are made
// positive and entries above pivots reduced into [0, pivot). Returns the
// number of pivot rows; those come first, remaining rows have zeros in the
// pivot block.
inline std::size_t echelon(std::vector<FactorElement>& rows, std::size_t pivot_cols)
{
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < pivot_cols && r < rows.size(); ++col) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i) {
                if (rows[i][col] == 0)
                    continue;
                if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))
                    best = i;
            }
            if (best == rows.size())
                break;
            std::swap(rows[r], rows[best]);
            bool others = false;
            for (std::size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0)
                    continue;
                axpy(rows[i], floor_div(rows[i][col], rows[r][col]), rows[r]);
                if (rows[i][col] != 0)
                    others = true;
            }
            if (!others)
                break;
        }
        if (r == rows.size() || rows[r][col] == 0)
            continue;
        if (rows[r][col] < 0)
            for (auto& c : rows[r])
                c = -c;
        for (std::size_t i = 0; i < r; ++i)
            axpy(rows[i], floor_div(rows[i][col], rows[r][col]), rows[r]);
        pivots.push_back(col);
        ++r;
    }
    return r;
}

inline std::size_t pivot_of(const FactorElement& row)
{
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0)
            return j;
    return row.size();
}

} // namespace detail

/// A subgroup of Z^k in Hermite normal form. The empty basis is the trivial
/// subgroup.
class FactorSubgroup {
public:
    FactorSubgroup() = default;
    explicit FactorSubgroup(int rank) : rank_(rank) {}

    /// Lattice spanned by arbitrary generators (zero rows allowed).
    static FactorSubgroup span(int rank, std::vector<FactorElement> gens)
    {
        for (const auto& g : gens)
            if (static_cast<int>(g.size()) != rank)
                throw DimensionMismatch("generator length differs from factor rank");
        FactorSubgroup s(rank);
        const std::size_t r = detail::echelon(gens, static_cast<std::size_t>(rank));
        gens.resize(r);
        s.basis_ = std::move(gens);
        return s;
    }

    static FactorSubgroup full(int rank)
    {
        std::vector<FactorElement> id(rank, FactorElement(rank, 0));
        for (int i = 0; i < rank; ++i)
            id[i][i] = 1;
        return span(rank, std::move(id));
    }

    int rank() const { return rank_; }
    const std::vector<FactorElement>& basis() const { return basis_; }
    bool trivial() const { return basis_.empty(); }
    bool is_full() const { return *this == full(rank_); }

    friend bool operator==(const FactorSubgroup&, const FactorSubgroup&) = default;

private:
    int rank_ = 1;
    std::vector<FactorElement> basis_;
};

inline void check_dim(const FactorSubgroup& s, const FactorElement& x)
{
    if (static_cast<int>(x.size()) != s.rank())
        throw DimensionMismatch("element of length " + std::to_string(x.size()) +
                                " against lattice in Z^" + std::to_string(s.rank()));
}

inline FactorSubgroup lattice_join(const FactorSubgroup& s, const FactorElement& x)
{
    check_dim(s, x);
    auto gens = s.basis();
    gens.push_back(x);
    return FactorSubgroup::span(s.rank(), std::move(gens));
}

inline FactorSubgroup lattice_join(const FactorSubgroup& s, const FactorSubgroup& t)
{
    if (s.rank() != t.rank())
        throw DimensionMismatch("joining lattices of different rank");
    auto gens = s.basis();
    gens.insert(gens.end(), t.basis().begin(), t.basis().end());
    return FactorSubgroup::span(s.rank(), std::move(gens));
}

/// S1 ∩ S2 via the kernel of the stacked relation [B1 B1; B2 0].
inline FactorSubgroup lattice_intersect(const FactorSubgroup& s1, const FactorSubgroup& s2)
{
    if (s1.rank() != s2.rank())
        throw DimensionMismatch("intersecting lattices of different rank");
    const auto k = static_cast<std::size_t>(s1.rank());
    if (s1.trivial() || s2.trivial())
        return FactorSubgroup(s1.rank());
    std::vector<FactorElement> rows;
    for (const auto& b : s1.basis()) {
        FactorElement row(b);
        row.insert(row.end(), b.begin(), b.end());
        rows.push_back(std::move(row));
    }
    for (const auto& b : s2.basis()) {
        FactorElement row(b);
        row.insert(row.end(), k, BigInt(0));
        rows.push_back(std::move(row));
    }
    const std::size_t r = detail::echelon(rows, k);
    std::vector<FactorElement> kernel;
    for (std::size_t i = r; i < rows.size(); ++i)
        kernel.emplace_back(rows[i].begin() + static_cast<std::ptrdiff_t>(k), rows[i].end());
    return FactorSubgroup::span(s1.rank(), std::move(kernel));
}

/// Canonical representative of x + S: successive reduction by pivot rows
/// leaves each pivot coordinate in [0, pivot).
inline FactorElement coset_reduce(const FactorSubgroup& s, FactorElement x)
{
    check_dim(s, x);
    for (const auto& row : s.basis()) {
        const std::size_t p = detail::pivot_of(row);
        detail::axpy(x, detail::floor_div(x[p], row[p]), row);
    }
    return x;
}

inline bool lattice_contains(const FactorSubgroup& s, const FactorElement& x)
{
    return detail::is_zero(coset_reduce(s, x));
}

/// Lexicographic order on coordinate vectors.
inline std::strong_ordering factor_compare(const FactorElement& x, const FactorElement& y)
{
    if (x.size() != y.size())
        throw DimensionMismatch("comparing elements of different rank");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < y[i])
            return std::strong_ordering::less;
        if (x[i] > y[i])
            return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

struct FactorElementLess {
    bool operator()(const FactorElement& x, const FactorElement& y) const
    {
        return factor_compare(x, y) < 0;
    }
};

/// Splits v ∈ S1 + S2 as v = s1 + s2 with s1 ∈ S1, s2 ∈ S2.
inline std::pair<FactorElement, FactorElement>
lattice_split(const FactorSubgroup& s1, const FactorSubgroup& s2, const FactorElement& v)
{
    if (s1.rank() != s2.rank())
        throw DimensionMismatch("splitting over lattices of different rank");
    check_dim(s1, v);
    const auto k = static_cast<std::size_t>(s1.rank());
    const std::size_t n1 = s1.basis().size();
    const std::size_t n = n1 + s2.basis().size();
    std::vector<FactorElement> rows;
    auto add = [&](const FactorElement& b, std::size_t slot) {
        FactorElement row(b);
        row.resize(k + n, 0);
        row[k + slot] = 1;
        rows.push_back(std::move(row));
    };
    for (std::size_t i = 0; i < n1; ++i)
        add(s1.basis()[i], i);
    for (std::size_t i = 0; i < s2.basis().size(); ++i)
        add(s2.basis()[i], n1 + i);
    const std::size_t r = detail::echelon(rows, k);

    FactorElement rest = v;
    FactorElement coeff(n, 0);
    for (std::size_t i = 0; i < r; ++i) {
        const std::size_t p = detail::pivot_of(rows[i]);
        if (rest[p] % rows[i][p] != 0)
            throw std::domain_error("lattice_split: vector not in S1 + S2");
        const BigInt c = rest[p] / rows[i][p];
        for (std::size_t j = 0; j < k; ++j)
            rest[j] -= c * rows[i][j];
        for (std::size_t j = 0; j < n; ++j)
            coeff[j] += c * rows[i][k + j];
    }
    if (!detail::is_zero(rest))
        throw std::domain_error("lattice_split: vector not in S1 + S2");
    FactorElement a(k, 0), b(k, 0);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < k; ++j)
            a[j] += coeff[i] * s1.basis()[i][j];
    for (std::size_t i = n1; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            b[j] += coeff[i] * s2.basis()[i - n1][j];
    return {a, b};
}

inline FactorElement operator+(FactorElement x, const FactorElement& y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += y[i];
    return x;
}

inline FactorElement operator-(FactorElement x, const FactorElement& y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] -= y[i];
    return x;
}

inline FactorElement operator-(FactorElement x)
{
    for (auto& c : x)
        c = -c;
    return x;
}

} // namespace kurosh

#endif
