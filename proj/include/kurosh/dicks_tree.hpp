#ifndef KUROSH_DICKS_TREE_HPP
#define KUROSH_DICKS_TREE_HPP

// Bridges and islands of the minimal invariant subtree T_H of a subgroup of a
// free group, under the edge order (orbit rank, then Magnus order).

#include "kurosh/kurosh_graph.hpp"
#include "kurosh/magnus_order.hpp"
#include "kurosh/pullback.hpp"

#include <deque>
#include <map>
#include <optional>
#include <stdexcept>

namespace kurosh {

/// Tree edge joining the central vertex `element` and the factor vertex
/// element * A_index.
struct TreeEdge {
    Word element;
    int index = 0;

    friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

enum class Side { Central, Factor };
enum class CertificateKind { StabilizerFan, OrbitRepeat, Exhausted };

struct BridgeCertificate {
    Side side = Side::Central;
    CertificateKind kind = CertificateKind::Exhausted;
    /// Tree edges from the endpoint to the witness, all below the tested edge.
    std::vector<TreeEdge> path;
    /// StabilizerFan: the core F-vertex with nontrivial stabiliser.
    int fvertex = -1;
    /// OrbitRepeat: v2 = h * v1, both central, same image in the graph.
    Word v1, v2, h;
    /// Tree vertices visited; for Exhausted this is the size of the finite side.
    std::size_t explored = 0;
};

struct SideResult {
    bool infinite = false;
    BridgeCertificate certificate;
};

namespace detail {

/// Precomputed data shared by all bridge queries on one graph.
struct BridgeContext {
    const KuroshGraph& g;
    OrderConfig cfg;
    CoreMask core;
    SpanningTree tree;

    BridgeContext(const KuroshGraph& graph, OrderConfig order)
        : g(graph), cfg(std::move(order)), core(core_mask(graph)), tree(spanning_tree(graph))
    {
        require_free_group(g.presentation);
        if (static_cast<int>(cfg.orbit_order.size()) != g.presentation.size() ||
            static_cast<int>(cfg.variable_order.size()) != g.presentation.size())
            throw std::invalid_argument("order configuration does not match the presentation");
    }

    bool core_edge(int e) const { return e >= 0 && core.e[static_cast<std::size_t>(e)]; }

    std::strong_ordering compare(const TreeEdge& x, const TreeEdge& y) const
    {
        return edge_compare(EdgeName{x.index, x.element}, EdgeName{y.index, y.element}, cfg);
    }

    /// Graph edge that a tree edge maps to, or -1 when it is not in T_H.
    int image(const TreeEdge& t) const
    {
        const auto b = trace(g, t.element);
        if (!b)
            return -1;
        const int e = g.edge_at(*b, t.index);
        return core_edge(e) ? e : -1;
    }
};

inline Word letter(int factor, const BigInt& k)
{
    return k == 0 ? Word{} : Word{{Syllable{factor, FactorElement{k}}}};
}

inline SideResult side_search(const BridgeContext& ctx, const TreeEdge& e, Side side, std::mt19937_64* shuffle)
{
    const KuroshGraph& g = ctx.g;
    const int e_img = ctx.image(e);
    if (e_img < 0)
        throw std::invalid_argument("edge is not in the minimal invariant subtree");

    SideResult out;
    out.certificate.side = side;
    auto below = [&](const TreeEdge& t) { return std::is_lt(ctx.compare(t, e)); };

    // Search nodes. Central: element x with image B-vertex. Factor: entered
    // through tree edge (x, i), at F-vertex u with entry label p.
    struct Node {
        bool central;
        Word x;
        int index;      // factor nodes: the factor; central: arrival factor or -1
        int image;      // central: B-vertex; factor: F-vertex
        FactorElement p;
        int parent;     // node id
        std::optional<TreeEdge> via;
    };
    std::vector<Node> nodes;
    std::map<int, int> central_at; // B-vertex -> node id
    std::deque<int> frontier;

    auto path_to = [&](int id) {
        std::vector<TreeEdge> path;
        for (int n = id; n >= 0; n = nodes[static_cast<std::size_t>(n)].parent)
            if (nodes[static_cast<std::size_t>(n)].via)
                path.push_back(*nodes[static_cast<std::size_t>(n)].via);
        std::reverse(path.begin(), path.end());
        return path;
    };
    auto push = [&](Node n) {
        nodes.push_back(std::move(n));
        frontier.push_back(static_cast<int>(nodes.size()) - 1);
    };

    const auto& ed = g.edge(e_img);
    if (side == Side::Central) {
        push(Node{true, e.element, e.index, ed.b, {}, -1, std::nullopt});
    } else {
        const auto& stab = g.fvert(ed.f).stab;
        if (!stab.trivial()) {
            // t^-1 e < e for the stabiliser generator t = x a^m x^-1 with m > 0.
            const BigInt m = stab.basis()[0][0];
            out.infinite = true;
            out.certificate.kind = CertificateKind::StabilizerFan;
            out.certificate.fvertex = ed.f;
            out.certificate.path = {TreeEdge{multiply_reduce(e.element, letter(e.index, -m)), e.index}};
            out.certificate.explored = 1;
            return out;
        }
        push(Node{false, e.element, e.index, ed.f, ed.label, -1, std::nullopt});
    }

    while (!frontier.empty()) {
        if (shuffle && frontier.size() > 1)
            std::swap(frontier.front(), frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(*shuffle)]);
        const int id = frontier.front();
        frontier.pop_front();
        const Node n = nodes[static_cast<std::size_t>(id)];
        ++out.certificate.explored;
        if (n.central) {
            auto [it, fresh] = central_at.emplace(n.image, id);
            if (!fresh) {
                const Node& first = nodes[static_cast<std::size_t>(it->second)];
                out.infinite = true;
                out.certificate.kind = CertificateKind::OrbitRepeat;
                out.certificate.v1 = first.x;
                out.certificate.v2 = n.x;
                out.certificate.h = multiply_reduce(n.x, invert(first.x));
                out.certificate.path = path_to(id);
                return out;
            }
            for (int ge : g.b_edges(n.image)) {
                if (!ctx.core_edge(ge))
                    continue;
                const int j = g.factor_of(ge);
                if (j == n.index)
                    continue; // the edge we arrived through (or e itself)
                const TreeEdge t{n.x, j};
                if (!below(t))
                    continue;
                push(Node{false, n.x, j, g.edge(ge).f, g.edge(ge).label, id, t});
            }
        } else {
            if (!g.fvert(n.image).stab.trivial()) {
                out.infinite = true;
                out.certificate.kind = CertificateKind::StabilizerFan;
                out.certificate.fvertex = n.image;
                out.certificate.path = path_to(id);
                return out;
            }
            for (int ge : g.f_edges(n.image)) {
                if (!ctx.core_edge(ge))
                    continue;
                const auto& q = g.edge(ge).label;
                if (q == n.p)
                    continue;
                const Word y = multiply_reduce(n.x, letter(n.index, q[0] - n.p[0]));
                const TreeEdge t{y, n.index};
                if (!below(t))
                    continue;
                push(Node{true, y, n.index, g.edge(ge).b, {}, id, t});
            }
        }
    }
    out.certificate.kind = CertificateKind::Exhausted;
    return out;
}

} // namespace detail

inline SideResult side_infinite(const KuroshGraph& g, const TreeEdge& e, Side side, const OrderConfig& cfg,
                                std::mt19937_64* shuffle = nullptr)
{
    const detail::BridgeContext ctx(g, cfg);
    return detail::side_search(ctx, e, side, shuffle);
}

/// Representative lift of a core edge: (path word to its B-vertex, factor).
inline TreeEdge lift_edge(const KuroshGraph& g, int core_edge)
{
    const auto& ed = g.edge(core_edge);
    return TreeEdge{spanning_tree(g).b_word[static_cast<std::size_t>(ed.b)], g.factor_of(core_edge)};
}

inline bool is_bridge(const KuroshGraph& g, const TreeEdge& e, const OrderConfig& cfg,
                      std::mt19937_64* shuffle = nullptr)
{
    const detail::BridgeContext ctx(g, cfg);
    return detail::side_search(ctx, e, Side::Central, shuffle).infinite &&
           detail::side_search(ctx, e, Side::Factor, shuffle).infinite;
}

inline bool is_bridge(const KuroshGraph& g, int core_edge, const OrderConfig& cfg)
{
    const detail::BridgeContext ctx(g, cfg);
    if (!ctx.core_edge(core_edge))
        throw std::invalid_argument("edge is not in the core");
    const TreeEdge t{ctx.tree.b_word[static_cast<std::size_t>(g.edge(core_edge).b)], g.factor_of(core_edge)};
    return detail::side_search(ctx, t, Side::Central, nullptr).infinite &&
           detail::side_search(ctx, t, Side::Factor, nullptr).infinite;
}

/// Tree edges on the geodesic between two central vertices.
inline std::vector<TreeEdge> tree_path(const Word& from, const Word& to)
{
    const Word u = multiply_reduce(invert(from), to);
    std::vector<TreeEdge> out;
    Word at = from;
    for (const auto& s : u.syllables) {
        out.push_back(TreeEdge{at, s.factor});
        at = multiply_reduce(at, Word{{s}});
        out.push_back(TreeEdge{at, s.factor});
    }
    return out;
}

/// Independent re-check of an infinite-side certificate.
inline bool validate_certificate(const KuroshGraph& g, const TreeEdge& e, const BridgeCertificate& c,
                                 const OrderConfig& cfg)
{
    const detail::BridgeContext ctx(g, cfg);
    auto below = [&](const TreeEdge& t) { return std::is_lt(ctx.compare(t, e)); };
    for (const auto& t : c.path)
        if (!below(t) || ctx.image(t) < 0)
            return false;
    switch (c.kind) {
    case CertificateKind::Exhausted:
        return false;
    case CertificateKind::StabilizerFan:
        return c.fvertex >= 0 && !g.fvert(c.fvertex).stab.trivial() && !c.path.empty() &&
               g.edge(ctx.image(c.path.back())).f == c.fvertex;
    case CertificateKind::OrbitRepeat: {
        if (c.h.empty() || multiply_reduce(c.h, c.v1) != c.v2)
            return false;
        const auto t1 = trace(g, c.v1), t2 = trace(g, c.v2);
        if (!t1 || !t2 || *t1 != *t2)
            return false;
        const auto sigma = tree_path(c.v1, c.v2);
        if (sigma.empty())
            return false;
        TreeEdge m = sigma[0];
        for (const auto& t : sigma) {
            if (!below(t))
                return false;
            if (std::is_gt(ctx.compare(t, m)))
                m = t;
        }
        const TreeEdge hm{multiply_reduce(c.h, m.element), m.index};
        const Word shift = std::is_lt(ctx.compare(hm, m)) ? c.h : invert(c.h);
        Word power = shift;
        for (int k = 1; k <= 3; ++k) {
            for (const auto& t : sigma)
                if (!below(TreeEdge{multiply_reduce(power, t.element), t.index}))
                    return false;
            power = multiply_reduce(power, shift);
        }
        return true;
    }
    }
    return false;
}

struct Island {
    std::vector<int> b, f, edges;
    KuroshRank rank;
};

struct EdgeVerdict {
    int edge = -1;
    TreeEdge lift;
    bool bridge = false;
    SideResult central, factor;
};

struct TheoremMainReport {
    std::vector<EdgeVerdict> verdicts;
    std::vector<int> bridge_edges;
    std::vector<Island> islands;
    int bridge_count = 0;
    int kappa_reduced = 0;
    bool holds = false;
};

inline TheoremMainReport theorem_main_report(const KuroshGraph& g, const OrderConfig& cfg,
                                             std::mt19937_64* shuffle = nullptr)
{
    const detail::BridgeContext ctx(g, cfg);
    if (g.num_edges() == 0 && g.num_f() == 0)
        throw std::invalid_argument("the trivial subgroup has no Dicks tree");
    TheoremMainReport r;
    r.kappa_reduced = rank_of_subgraph(g, ctx.core).kappa_reduced;
    std::vector<bool> is_bridge_edge(static_cast<std::size_t>(g.num_edges()), false);
    for (int e = 0; e < g.num_edges(); ++e) {
        if (!ctx.core_edge(e))
            continue;
        EdgeVerdict v;
        v.edge = e;
        v.lift = TreeEdge{ctx.tree.b_word[static_cast<std::size_t>(g.edge(e).b)], g.factor_of(e)};
        v.central = detail::side_search(ctx, v.lift, Side::Central, shuffle);
        v.factor = detail::side_search(ctx, v.lift, Side::Factor, shuffle);
        v.bridge = v.central.infinite && v.factor.infinite;
        if (v.bridge) {
            r.bridge_edges.push_back(e);
            is_bridge_edge[static_cast<std::size_t>(e)] = true;
        }
        r.verdicts.push_back(std::move(v));
    }
    r.bridge_count = static_cast<int>(r.bridge_edges.size());

    detail::UnionFind uf(g.num_b + g.num_f());
    for (int e = 0; e < g.num_edges(); ++e)
        if (ctx.core_edge(e) && !is_bridge_edge[static_cast<std::size_t>(e)])
            uf.unite(g.edge(e).b, g.num_b + g.edge(e).f);
    std::map<int, std::size_t> island_of;
    auto island = [&](int v) -> Island& {
        auto [it, fresh] = island_of.emplace(uf.find(v), r.islands.size());
        if (fresh)
            r.islands.emplace_back();
        return r.islands[it->second];
    };
    for (int b = 0; b < g.num_b; ++b)
        if (ctx.core.b[static_cast<std::size_t>(b)])
            island(b).b.push_back(b);
    for (int f = 0; f < g.num_f(); ++f)
        if (ctx.core.f[static_cast<std::size_t>(f)])
            island(g.num_b + f).f.push_back(f);
    for (int e = 0; e < g.num_edges(); ++e)
        if (ctx.core_edge(e) && !is_bridge_edge[static_cast<std::size_t>(e)])
            island(g.edge(e).b).edges.push_back(e);

    bool islands_ok = true;
    for (auto& isl : r.islands) {
        for (int f : isl.f)
            if (!g.fvert(f).stab.trivial())
                ++isl.rank.c;
        const int v = static_cast<int>(isl.b.size() + isl.f.size());
        isl.rank.betti = static_cast<int>(isl.edges.size()) - v + 1;
        isl.rank.kappa = isl.rank.c + isl.rank.betti;
        isl.rank.kappa_reduced = std::max(0, isl.rank.kappa - 1);
        islands_ok = islands_ok && isl.rank.kappa == 1;
    }
    r.holds = r.bridge_count == r.kappa_reduced && islands_ok;
    return r;
}

} // namespace kurosh

#endif
