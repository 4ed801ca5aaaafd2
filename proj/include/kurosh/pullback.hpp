#ifndef KUROSH_PULLBACK_HPP
#define KUROSH_PULLBACK_HPP

// Intersections H ∩ gKg^-1 over all double cosets H g K, read off the
// components of the product of two folded graphs.

#include "kurosh/kurosh_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace kurosh {

struct PullbackComponent {
    /// Folded, trimmed to its core plus the spur to the base pair.
    KuroshGraph graph;
    std::pair<int, int> base_pair;
    /// w_H * w_K^-1 for the words read from the basepoints to the base pair.
    /// A loop w at the base pair satisfies w_K w w_K^-1 in K and
    /// w_H w w_H^-1 = g_rep (w_K w w_K^-1) g_rep^-1 in H.
    Word g_rep;
    Word w_h;
    Word w_k;
    bool is_basepoint_component = false;
    KuroshRank rank;
};

namespace detail {

struct FClassKey {
    int u, v;
    FactorElement delta;

    bool operator<(const FClassKey& o) const
    {
        if (u != o.u)
            return u < o.u;
        if (v != o.v)
            return v < o.v;
        return factor_compare(delta, o.delta) < 0;
    }
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

} // namespace detail

/// One component per double coset H g K whose product component meets the
/// cores of both graphs, plus the basepoint component.
inline std::vector<PullbackComponent> pullback_components(const KuroshGraph& gh, const KuroshGraph& gk)
{
    if (!(gh.presentation == gk.presentation))
        throw PresentationMismatch("pullback of graphs over different presentations");
    const Presentation& p = gh.presentation;
    const int nk = gk.num_b;
    auto pair_id = [&](int b, int c) { return b * nk + c; };

    // Product graph. Product B-vertex ids are pair ids; F-vertices are created
    // per class (u, u', delta).
    KuroshGraph prod{p};
    prod.num_b = gh.num_b * nk;
    std::map<detail::FClassKey, int> fclass;
    std::vector<std::pair<int, int>> edge_origin;
    for (int eh = 0; eh < gh.num_edges(); ++eh)
        for (int ek = 0; ek < gk.num_edges(); ++ek) {
            if (gh.factor_of(eh) != gk.factor_of(ek))
                continue;
            const auto& x = gh.edge(eh);
            const auto& y = gk.edge(ek);
            const auto& su = gh.fvert(x.f).stab;
            const auto& sv = gk.fvert(y.f).stab;
            const FactorSubgroup sum = lattice_join(su, sv);
            const FactorElement diff = y.label - x.label;
            detail::FClassKey key{x.f, y.f, coset_reduce(sum, diff)};
            auto [it, fresh] = fclass.emplace(key, prod.num_f());
            const FactorSubgroup meet = lattice_intersect(su, sv);
            if (fresh)
                prod.fverts.push_back(FVertex{gh.factor_of(eh), meet});
            const auto [s, s2] = lattice_split(su, sv, diff - key.delta);
            (void)s2;
            prod.edges.push_back(GraphEdge{pair_id(x.b, y.b), it->second, coset_reduce(meet, x.label + s)});
            edge_origin.emplace_back(eh, ek);
        }
    prod.reindex();
    {
        RawGraph check(prod);
        if (check.fold_step())
            throw std::logic_error("pullback product is not folded");
    }

    // Components over B-vertices (ids < num_b) and F-vertices (offset).
    detail::UnionFind uf(prod.num_b + prod.num_f());
    for (const auto& e : prod.edges)
        uf.unite(e.b, prod.num_b + e.f);

    const CoreMask core_h = core_mask(gh), core_k = core_mask(gk);
    const SpanningTree th = spanning_tree(gh), tk = spanning_tree(gk);
    const int base = pair_id(gh.basepoint, gk.basepoint);

    std::map<int, int> root_to_base;
    std::set<int> touches_core;
    for (int b = 0; b < prod.num_b; ++b) {
        const int r = uf.find(b);
        if (!root_to_base.count(r))
            root_to_base[r] = b; // ids are increasing, so this is the least pair
        if (core_h.b[static_cast<std::size_t>(b / nk)] && core_k.b[static_cast<std::size_t>(b % nk)])
            touches_core.insert(r);
    }
    root_to_base[uf.find(base)] = base;

    // Edge injectivity: each product edge comes from a distinct pair.
    {
        std::set<std::pair<int, int>> seen(edge_origin.begin(), edge_origin.end());
        if (seen.size() != edge_origin.size())
            throw std::logic_error("pullback edge map is not injective");
    }

    std::vector<PullbackComponent> out;
    for (const auto& [root, bp] : root_to_base) {
        const bool is_base = root == uf.find(base);
        if (!is_base && !touches_core.count(root))
            continue;
        PullbackComponent c;
        c.graph = restrict_to(prod, core_mask(prod, bp), bp);
        c.rank = kurosh_rank(c.graph);
        c.w_h = th.b_word[static_cast<std::size_t>(bp / nk)];
        c.w_k = tk.b_word[static_cast<std::size_t>(bp % nk)];
        c.g_rep = multiply_reduce(c.w_h, invert(c.w_k));
        c.base_pair = {bp / nk, bp % nk};
        c.is_basepoint_component = is_base;
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const PullbackComponent& x, const PullbackComponent& y) {
        if (x.is_basepoint_component != y.is_basepoint_component)
            return x.is_basepoint_component;
        return x.base_pair < y.base_pair;
    });
    return out;
}

struct TheoremAReport {
    int kappa_reduced_h = 0;
    int kappa_reduced_k = 0;
    std::vector<std::pair<Word, int>> components; // (g_rep, kappa_reduced)
    int basepoint_kappa_reduced = 0;
    long long lhs_sum = 0;
    long long rhs_product = 0;
    bool holds_strengthened = false;
    bool holds_hn1 = false;
    bool holds_hn2 = false;

    bool holds() const { return holds_strengthened && holds_hn1 && holds_hn2; }
};

inline TheoremAReport theorem_a_report(const KuroshGraph& gh, const KuroshGraph& gk)
{
    TheoremAReport r;
    r.kappa_reduced_h = kurosh_rank(gh).kappa_reduced;
    r.kappa_reduced_k = kurosh_rank(gk).kappa_reduced;
    for (const auto& c : pullback_components(gh, gk)) {
        r.components.emplace_back(c.g_rep, c.rank.kappa_reduced);
        r.lhs_sum += c.rank.kappa_reduced;
        if (c.is_basepoint_component)
            r.basepoint_kappa_reduced = c.rank.kappa_reduced;
    }
    r.rhs_product = static_cast<long long>(r.kappa_reduced_h) * r.kappa_reduced_k;
    r.holds_strengthened = r.lhs_sum <= r.rhs_product;
    r.holds_hn1 = r.basepoint_kappa_reduced <= 2 * r.rhs_product;
    r.holds_hn2 = r.lhs_sum <= 2 * r.rhs_product;
    return r;
}

inline TheoremAReport theorem_a_report(const Presentation& p, const std::vector<Word>& gens_h,
                                       const std::vector<Word>& gens_k)
{
    return theorem_a_report(build_folded(p, gens_h), build_folded(p, gens_k));
}

} // namespace kurosh

#endif
