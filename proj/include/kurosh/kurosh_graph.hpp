#ifndef KUROSH_KUROSH_GRAPH_HPP
#define KUROSH_KUROSH_GRAPH_HPP

// Folded quotient graphs T_H/H for finitely generated subgroups H of a free
// product G = A_1 * ... * A_n of free abelian factors, acting on the left of
// the Bass-Serre tree with central vertices g and factor vertices gA_i.
//
// B-vertices are H-orbits of central vertices. F-vertices are H-orbits of
// factor vertices; each carries a chart identifying its incident tree edges
// with A_i, and the stabiliser record S <= A_i in that chart. An edge of
// factor i from B-vertex b to F-vertex u with label p means: the tree edge
// (x, i) at a lift x of b lands at chart position p of u. Labels are stored
// as canonical coset representatives of S.
//
// Reading a syllable a_i^x at b: take the factor-i edge (b, u, p), move to
// position p + x of u, and continue along the edge labelled by that coset.

#include "kurosh/factor_groups.hpp"
#include "kurosh/text_format.hpp"
#include "kurosh/words.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace kurosh {

struct FVertex {
    int factor = 0;
    FactorSubgroup stab;
};

struct GraphEdge {
    int b = 0;
    int f = 0;
    FactorElement label;
};

class KuroshGraph {
public:
    Presentation presentation;
    int num_b = 1;
    std::vector<FVertex> fverts;
    std::vector<GraphEdge> edges;
    int basepoint = 0;
    std::vector<std::string> warnings;

    KuroshGraph() = default;
    explicit KuroshGraph(Presentation p) : presentation(std::move(p)) { reindex(); }

    int num_f() const { return static_cast<int>(fverts.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    /// Edge ids at a B-vertex, ordered by factor index.
    const std::vector<int>& b_edges(int b) const { return b_adj_[static_cast<std::size_t>(b)]; }
    /// Edge ids at an F-vertex, ordered by label.
    const std::vector<int>& f_edges(int f) const { return f_adj_[static_cast<std::size_t>(f)]; }

    /// The factor-i edge at b, or -1. Folded graphs have at most one.
    int edge_at(int b, int factor) const
    {
        for (int e : b_edges(b))
            if (fverts[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].f)].factor == factor)
                return e;
        return -1;
    }

    /// The edge at F-vertex f with the given (reduced) label, or -1.
    int edge_with_label(int f, const FactorElement& label) const
    {
        const auto& m = label_index_[static_cast<std::size_t>(f)];
        auto it = m.find(label);
        return it == m.end() ? -1 : it->second;
    }

    int factor_of(int e) const { return fverts[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].f)].factor; }

    const GraphEdge& edge(int e) const { return edges[static_cast<std::size_t>(e)]; }
    const FVertex& fvert(int f) const { return fverts[static_cast<std::size_t>(f)]; }

    void reindex()
    {
        b_adj_.assign(static_cast<std::size_t>(num_b), {});
        f_adj_.assign(fverts.size(), {});
        label_index_.assign(fverts.size(), {});
        for (int e = 0; e < num_edges(); ++e) {
            const auto& ed = edges[static_cast<std::size_t>(e)];
            b_adj_[static_cast<std::size_t>(ed.b)].push_back(e);
            f_adj_[static_cast<std::size_t>(ed.f)].push_back(e);
            label_index_[static_cast<std::size_t>(ed.f)].emplace(ed.label, e);
        }
        for (auto& adj : b_adj_)
            std::stable_sort(adj.begin(), adj.end(), [&](int x, int y) { return factor_of(x) < factor_of(y); });
        for (auto& adj : f_adj_)
            std::stable_sort(adj.begin(), adj.end(), [&](int x, int y) {
                return factor_compare(edge(x).label, edge(y).label) < 0;
            });
    }

private:
    std::vector<std::vector<int>> b_adj_{1};
    std::vector<std::vector<int>> f_adj_;
    std::vector<std::map<FactorElement, int, FactorElementLess>> label_index_;
};

// ---------------------------------------------------------------------------
// Folding

/// Mutable graph used while folding; dead vertices and edges are flagged.
class RawGraph {
public:
    explicit RawGraph(Presentation p) : pres_(std::move(p)) { add_b(); }

    explicit RawGraph(const KuroshGraph& g) : pres_(g.presentation)
    {
        for (int b = 0; b < g.num_b; ++b)
            add_b();
        for (const auto& f : g.fverts)
            add_f(f.factor, f.stab);
        for (const auto& e : g.edges)
            add_edge(e.b, e.f, e.label);
        base_ = g.basepoint;
    }

    const Presentation& presentation() const { return pres_; }
    int basepoint() const { return base_; }
    void set_basepoint(int b) { base_ = b; }
    void remove_edge(int e) { e_alive_[static_cast<std::size_t>(e)] = false; }

    int add_b()
    {
        b_alive_.push_back(true);
        return static_cast<int>(b_alive_.size()) - 1;
    }

    int add_f(int factor, FactorSubgroup s)
    {
        f_.push_back(FVertex{factor, std::move(s)});
        f_alive_.push_back(true);
        return static_cast<int>(f_.size()) - 1;
    }

    int add_edge(int b, int f, FactorElement label)
    {
        e_.push_back(GraphEdge{b, f, std::move(label)});
        e_alive_.push_back(true);
        return static_cast<int>(e_.size()) - 1;
    }

    /// Appends the closed path of w at the basepoint.
    void add_loop(const Word& w)
    {
        validate_word(pres_, w);
        int cur = base_;
        for (std::size_t i = 0; i < w.syllables.size(); ++i) {
            const auto& s = w.syllables[i];
            const int rank = pres_.rank_of(s.factor);
            const int f = add_f(s.factor, FactorSubgroup(rank));
            const int next = (i + 1 == w.syllables.size()) ? base_ : add_b();
            add_edge(cur, f, FactorElement(static_cast<std::size_t>(rank), 0));
            add_edge(next, f, s.letter);
            cur = next;
        }
    }

    /// Applies fold moves until none applies. `rng` permutes the scan order.
    void fold(std::mt19937_64* rng = nullptr)
    {
        while (fold_step(rng)) {
        }
    }

    /// One fold move; false when the graph is folded.
    bool fold_step(std::mt19937_64* rng = nullptr)
    {
        for (std::size_t e = 0; e < e_.size(); ++e)
            if (e_alive_[e])
                e_[e].label = coset_reduce(f_[static_cast<std::size_t>(e_[e].f)].stab, e_[e].label);

        std::vector<int> order;
        for (std::size_t e = 0; e < e_.size(); ++e)
            if (e_alive_[e])
                order.push_back(static_cast<int>(e));
        if (rng)
            std::shuffle(order.begin(), order.end(), *rng);

        // F1/F3 at B-vertices.
        std::map<std::pair<int, int>, int> at_b;
        for (int e : order) {
            const auto& ed = e_[static_cast<std::size_t>(e)];
            const int factor = f_[static_cast<std::size_t>(ed.f)].factor;
            auto [it, fresh] = at_b.emplace(std::make_pair(ed.b, factor), e);
            if (!fresh) {
                merge_at_b(it->second, e);
                return true;
            }
        }
        // F2 at F-vertices.
        std::map<std::pair<int, FactorElement>, int, LabelKeyLess> at_f;
        for (int e : order) {
            const auto& ed = e_[static_cast<std::size_t>(e)];
            auto [it, fresh] = at_f.emplace(std::make_pair(ed.f, ed.label), e);
            if (!fresh) {
                const auto& keep = e_[static_cast<std::size_t>(it->second)];
                if (keep.b != ed.b)
                    merge_b(keep.b, ed.b);
                else
                    e_alive_[static_cast<std::size_t>(e)] = false;
                return true;
            }
        }
        return false;
    }

    /// Compacts and renumbers by breadth-first discovery from the basepoint,
    /// shifting each F-vertex chart so its discovery edge has label 0.
    KuroshGraph finalize(std::vector<std::string> warnings = {}) const
    {
        std::vector<std::vector<int>> badj(b_alive_.size()), fadj(f_.size());
        for (std::size_t e = 0; e < e_.size(); ++e) {
            if (!e_alive_[e])
                continue;
            badj[static_cast<std::size_t>(e_[e].b)].push_back(static_cast<int>(e));
            fadj[static_cast<std::size_t>(e_[e].f)].push_back(static_cast<int>(e));
        }
        std::vector<int> new_b(b_alive_.size(), -1), new_f(f_.size(), -1);
        std::vector<FactorElement> shift(f_.size());
        std::vector<bool> edge_done(e_.size(), false);

        KuroshGraph g(pres_);
        g.warnings = std::move(warnings);
        g.num_b = 0;
        std::deque<std::pair<bool, int>> queue; // (is_b, old id)
        new_b[static_cast<std::size_t>(base_)] = g.num_b++;
        queue.emplace_back(true, base_);

        auto normalized = [&](int e) {
            const auto& ed = e_[static_cast<std::size_t>(e)];
            return coset_reduce(f_[static_cast<std::size_t>(ed.f)].stab,
                                ed.label - shift[static_cast<std::size_t>(ed.f)]);
        };
        auto record = [&](int e) {
            if (edge_done[static_cast<std::size_t>(e)])
                return;
            edge_done[static_cast<std::size_t>(e)] = true;
            const auto& ed = e_[static_cast<std::size_t>(e)];
            g.edges.push_back(GraphEdge{new_b[static_cast<std::size_t>(ed.b)],
                                        new_f[static_cast<std::size_t>(ed.f)], normalized(e)});
        };

        while (!queue.empty()) {
            auto [is_b, id] = queue.front();
            queue.pop_front();
            if (is_b) {
                auto adj = badj[static_cast<std::size_t>(id)];
                std::stable_sort(adj.begin(), adj.end(), [&](int x, int y) {
                    const int fx = f_[static_cast<std::size_t>(e_[static_cast<std::size_t>(x)].f)].factor;
                    const int fy = f_[static_cast<std::size_t>(e_[static_cast<std::size_t>(y)].f)].factor;
                    if (fx != fy)
                        return fx < fy;
                    return factor_compare(e_[static_cast<std::size_t>(x)].label,
                                          e_[static_cast<std::size_t>(y)].label) < 0;
                });
                for (int e : adj) {
                    const int f = e_[static_cast<std::size_t>(e)].f;
                    if (new_f[static_cast<std::size_t>(f)] < 0) {
                        new_f[static_cast<std::size_t>(f)] = g.num_f();
                        shift[static_cast<std::size_t>(f)] = e_[static_cast<std::size_t>(e)].label;
                        g.fverts.push_back(f_[static_cast<std::size_t>(f)]);
                        queue.emplace_back(false, f);
                    }
                    record(e);
                }
            } else {
                auto adj = fadj[static_cast<std::size_t>(id)];
                std::vector<FactorElement> keys;
                for (int e : adj)
                    keys.push_back(normalized(e));
                std::vector<std::size_t> idx(adj.size());
                for (std::size_t i = 0; i < idx.size(); ++i)
                    idx[i] = i;
                std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
                    return factor_compare(keys[x], keys[y]) < 0;
                });
                for (std::size_t i : idx) {
                    const int e = adj[i];
                    const int b = e_[static_cast<std::size_t>(e)].b;
                    if (new_b[static_cast<std::size_t>(b)] < 0) {
                        new_b[static_cast<std::size_t>(b)] = g.num_b++;
                        queue.emplace_back(true, b);
                    }
                    record(e);
                }
            }
        }
        g.basepoint = 0;
        g.reindex();
        return g;
    }

private:
    struct LabelKeyLess {
        bool operator()(const std::pair<int, FactorElement>& x, const std::pair<int, FactorElement>& y) const
        {
            if (x.first != y.first)
                return x.first < y.first;
            return factor_compare(x.second, y.second) < 0;
        }
    };

    void merge_at_b(int e1, int e2)
    {
        auto& a = e_[static_cast<std::size_t>(e1)];
        auto& b = e_[static_cast<std::size_t>(e2)];
        if (a.f != b.f) {
            // Transport the chart of b.f so that b's label lands on a's.
            const FactorElement delta = a.label - b.label;
            const int keep = a.f, gone = b.f;
            auto& fk = f_[static_cast<std::size_t>(keep)];
            fk.stab = lattice_join(fk.stab, f_[static_cast<std::size_t>(gone)].stab);
            for (std::size_t e = 0; e < e_.size(); ++e) {
                if (e_alive_[e] && e_[e].f == gone) {
                    e_[e].f = keep;
                    e_[e].label = e_[e].label + delta;
                }
            }
            f_alive_[static_cast<std::size_t>(gone)] = false;
        } else if (factor_compare(a.label, b.label) == 0) {
            e_alive_[static_cast<std::size_t>(e2)] = false;
        } else {
            auto& fv = f_[static_cast<std::size_t>(a.f)];
            fv.stab = lattice_join(fv.stab, a.label - b.label);
        }
    }

    void merge_b(int keep, int gone)
    {
        for (std::size_t e = 0; e < e_.size(); ++e)
            if (e_alive_[e] && e_[e].b == gone)
                e_[e].b = keep;
        b_alive_[static_cast<std::size_t>(gone)] = false;
        if (base_ == gone)
            base_ = keep;
    }

    Presentation pres_;
    std::vector<bool> b_alive_;
    std::vector<FVertex> f_;
    std::vector<bool> f_alive_;
    std::vector<GraphEdge> e_;
    std::vector<bool> e_alive_;
    int base_ = 0;
};

/// Folded graph of the subgroup generated by `gens`. Generators equal to the
/// identity are skipped with a warning.
inline KuroshGraph build_folded(const Presentation& p, const std::vector<Word>& gens,
                                std::mt19937_64* schedule = nullptr)
{
    RawGraph raw(p);
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        validate_word(p, gens[i]);
        const Word w = reduce(gens[i].syllables);
        if (w.empty()) {
            warnings.push_back("generator " + std::to_string(i + 1) + " is the identity; skipped");
            continue;
        }
        raw.add_loop(w);
        raw.fold(schedule);
    }
    return raw.finalize(std::move(warnings));
}

/// Adds one more generator to an already folded graph.
inline KuroshGraph extend_folded(const KuroshGraph& g, const Word& w)
{
    RawGraph raw(g);
    raw.add_loop(w);
    raw.fold();
    return raw.finalize(g.warnings);
}

// ---------------------------------------------------------------------------
// Membership

/// End B-vertex of the path reading w from `start`, if every step exists.
inline std::optional<int> trace_from(const KuroshGraph& g, int start, const Word& w)
{
    int b = start;
    for (const auto& s : w.syllables) {
        if (s.factor < 0 || s.factor >= g.presentation.size() ||
            static_cast<int>(s.letter.size()) != g.presentation.rank_of(s.factor))
            throw PresentationMismatch("word does not belong to the graph's presentation");
        const int e = g.edge_at(b, s.factor);
        if (e < 0)
            return std::nullopt;
        const auto& ed = g.edge(e);
        const FactorElement q = coset_reduce(g.fvert(ed.f).stab, ed.label + s.letter);
        const int out = g.edge_with_label(ed.f, q);
        if (out < 0)
            return std::nullopt;
        b = g.edge(out).b;
    }
    return b;
}

inline std::optional<int> trace(const KuroshGraph& g, const Word& w) { return trace_from(g, g.basepoint, w); }

inline bool member(const KuroshGraph& g, const Word& w)
{
    const auto end = trace(g, w);
    return end && *end == g.basepoint;
}

// ---------------------------------------------------------------------------
// Core and Kurosh rank

struct CoreMask {
    std::vector<bool> b;
    std::vector<bool> f;
    std::vector<bool> e;

    bool empty() const
    {
        return std::none_of(b.begin(), b.end(), [](bool x) { return x; }) &&
               std::none_of(f.begin(), f.end(), [](bool x) { return x; });
    }
};

/// Iteratively deletes vertices of degree <= 1 that are B-vertices or
/// F-vertices with trivial stabiliser. `keep_b` (if >= 0) is never deleted,
/// which trims hanging trees while retaining the spur to that vertex.
inline CoreMask core_mask(const KuroshGraph& g, int keep_b = -1)
{
    CoreMask m{std::vector<bool>(static_cast<std::size_t>(g.num_b), true),
               std::vector<bool>(static_cast<std::size_t>(g.num_f()), true),
               std::vector<bool>(static_cast<std::size_t>(g.num_edges()), true)};
    std::vector<int> bdeg(static_cast<std::size_t>(g.num_b), 0), fdeg(static_cast<std::size_t>(g.num_f()), 0);
    for (const auto& e : g.edges) {
        ++bdeg[static_cast<std::size_t>(e.b)];
        ++fdeg[static_cast<std::size_t>(e.f)];
    }
    std::deque<std::pair<bool, int>> queue;
    auto removable_b = [&](int b) { return b != keep_b && m.b[static_cast<std::size_t>(b)] && bdeg[static_cast<std::size_t>(b)] <= 1; };
    auto removable_f = [&](int f) {
        return m.f[static_cast<std::size_t>(f)] && fdeg[static_cast<std::size_t>(f)] <= 1 && g.fvert(f).stab.trivial();
    };
    for (int b = 0; b < g.num_b; ++b)
        if (removable_b(b))
            queue.emplace_back(true, b);
    for (int f = 0; f < g.num_f(); ++f)
        if (removable_f(f))
            queue.emplace_back(false, f);
    while (!queue.empty()) {
        auto [is_b, v] = queue.front();
        queue.pop_front();
        if (is_b ? !removable_b(v) : !removable_f(v))
            continue;
        (is_b ? m.b : m.f)[static_cast<std::size_t>(v)] = false;
        const auto& adj = is_b ? g.b_edges(v) : g.f_edges(v);
        for (int e : adj) {
            if (!m.e[static_cast<std::size_t>(e)])
                continue;
            m.e[static_cast<std::size_t>(e)] = false;
            const auto& ed = g.edge(e);
            --bdeg[static_cast<std::size_t>(ed.b)];
            --fdeg[static_cast<std::size_t>(ed.f)];
            if (is_b && removable_f(ed.f))
                queue.emplace_back(false, ed.f);
            if (!is_b && removable_b(ed.b))
                queue.emplace_back(true, ed.b);
        }
    }
    return m;
}

/// The part of g kept by the mask that is reachable from `base`, finalized
/// with `base` as basepoint.
inline KuroshGraph restrict_to(const KuroshGraph& g, const CoreMask& m, int base)
{
    RawGraph raw(g);
    for (int e = 0; e < g.num_edges(); ++e)
        if (!m.e[static_cast<std::size_t>(e)])
            raw.remove_edge(e);
    raw.set_basepoint(base);
    return raw.finalize(g.warnings);
}

struct KuroshRank {
    int c = 0;
    int betti = 0;
    int kappa = 0;
    int kappa_reduced = 0;

    friend bool operator==(const KuroshRank&, const KuroshRank&) = default;
};

/// c + betti of a connected subgraph given by a mask (empty mask gives 0).
inline KuroshRank rank_of_subgraph(const KuroshGraph& g, const CoreMask& m)
{
    KuroshRank r;
    int v = 0, e = 0;
    for (int b = 0; b < g.num_b; ++b)
        v += m.b[static_cast<std::size_t>(b)] ? 1 : 0;
    for (int f = 0; f < g.num_f(); ++f) {
        if (!m.f[static_cast<std::size_t>(f)])
            continue;
        ++v;
        if (!g.fvert(f).stab.trivial())
            ++r.c;
    }
    for (int i = 0; i < g.num_edges(); ++i)
        e += m.e[static_cast<std::size_t>(i)] ? 1 : 0;
    r.betti = v == 0 ? 0 : e - v + 1;
    r.kappa = r.c + r.betti;
    r.kappa_reduced = std::max(0, r.kappa - 1);
    return r;
}

inline KuroshRank kurosh_rank(const KuroshGraph& g) { return rank_of_subgraph(g, core_mask(g)); }

// ---------------------------------------------------------------------------
// Spanning tree and Kurosh decomposition

struct SpanningTree {
    std::vector<Word> b_word;      // path word from the basepoint
    std::vector<int> f_parent;     // tree edge through which each F-vertex was reached
    std::vector<bool> tree_edge;
};

inline SpanningTree spanning_tree(const KuroshGraph& g)
{
    SpanningTree t;
    t.b_word.assign(static_cast<std::size_t>(g.num_b), Word{});
    t.f_parent.assign(static_cast<std::size_t>(g.num_f()), -1);
    t.tree_edge.assign(static_cast<std::size_t>(g.num_edges()), false);
    std::vector<bool> seen_b(static_cast<std::size_t>(g.num_b), false);
    std::deque<int> queue{g.basepoint};
    seen_b[static_cast<std::size_t>(g.basepoint)] = true;
    while (!queue.empty()) {
        const int b = queue.front();
        queue.pop_front();
        for (int e : g.b_edges(b)) {
            const int f = g.edge(e).f;
            if (t.f_parent[static_cast<std::size_t>(f)] >= 0)
                continue;
            t.f_parent[static_cast<std::size_t>(f)] = e;
            t.tree_edge[static_cast<std::size_t>(e)] = true;
            const auto& pl = g.edge(e).label;
            for (int e2 : g.f_edges(f)) {
                const int b2 = g.edge(e2).b;
                if (seen_b[static_cast<std::size_t>(b2)])
                    continue;
                seen_b[static_cast<std::size_t>(b2)] = true;
                t.tree_edge[static_cast<std::size_t>(e2)] = true;
                t.b_word[static_cast<std::size_t>(b2)] = multiply_reduce(
                    t.b_word[static_cast<std::size_t>(b)],
                    Word{{Syllable{g.fvert(f).factor, g.edge(e2).label - pl}}});
                queue.push_back(b2);
            }
        }
    }
    return t;
}

struct FactorPart {
    int factor = 0;
    Word rep;
    FactorSubgroup stab;
};

struct KuroshDecomposition {
    std::vector<FactorPart> parts;
    std::vector<Word> free_basis;

    /// rep * a_i^s * rep^-1 for every basis row s of every part, then the
    /// free basis.
    std::vector<Word> generators() const
    {
        std::vector<Word> out;
        for (const auto& part : parts)
            for (const auto& s : part.stab.basis())
                out.push_back(product(part.rep, Word{{Syllable{part.factor, s}}}, invert(part.rep)));
        out.insert(out.end(), free_basis.begin(), free_basis.end());
        return out;
    }
};

/// Strips a trailing syllable of the given factor.
inline Word strip_trailing(Word w, int factor)
{
    if (!w.syllables.empty() && w.syllables.back().factor == factor)
        w.syllables.pop_back();
    return w;
}

inline KuroshDecomposition decomposition(const KuroshGraph& g)
{
    KuroshDecomposition d;
    const SpanningTree t = spanning_tree(g);
    for (int f = 0; f < g.num_f(); ++f) {
        const auto& fv = g.fvert(f);
        if (fv.stab.trivial())
            continue;
        const int parent = t.f_parent[static_cast<std::size_t>(f)];
        d.parts.push_back(FactorPart{fv.factor, strip_trailing(t.b_word[static_cast<std::size_t>(g.edge(parent).b)], fv.factor), fv.stab});
    }
    for (int e = 0; e < g.num_edges(); ++e) {
        if (t.tree_edge[static_cast<std::size_t>(e)])
            continue;
        const auto& ed = g.edge(e);
        const auto& parent = g.edge(t.f_parent[static_cast<std::size_t>(ed.f)]);
        d.free_basis.push_back(product(t.b_word[static_cast<std::size_t>(ed.b)],
                                       Word{{Syllable{g.fvert(ed.f).factor, parent.label - ed.label}}},
                                       invert(t.b_word[static_cast<std::size_t>(parent.b)])));
    }
    return d;
}

// ---------------------------------------------------------------------------
// Canonical form and export

/// Serialisation of a graph produced by finalize(); equal texts mean
/// basepoint-preserving isomorphic graphs (up to chart translation).
inline std::string canonical_form(const KuroshGraph& g)
{
    const KuroshGraph c = RawGraph(g).finalize();
    std::ostringstream out;
    out << "presentation " << format(c.presentation) << "\n";
    out << "b " << c.num_b << "\n";
    for (const auto& f : c.fverts)
        out << "f a" << f.factor + 1 << " " << format(f.stab) << "\n";
    for (const auto& e : c.edges)
        out << "e " << e.b << " " << e.f << " " << format(e.label) << "\n";
    return out.str();
}

inline std::string to_dot(const KuroshGraph& g, const std::vector<bool>* highlight = nullptr,
                          const std::vector<int>* colour_b = nullptr, const std::vector<int>* colour_f = nullptr)
{
    static const char* palette[] = {"lightblue", "lightpink", "palegreen", "khaki", "plum", "lightsalmon", "lightcyan", "wheat"};
    auto colour = [&](const std::vector<int>* c, int v) -> std::string {
        if (!c || (*c)[static_cast<std::size_t>(v)] < 0)
            return "";
        return std::string(", style=filled, fillcolor=") + palette[(*c)[static_cast<std::size_t>(v)] % 8];
    };
    std::ostringstream out;
    out << "graph kurosh {\n";
    for (int b = 0; b < g.num_b; ++b)
        out << "  b" << b << " [shape=" << (b == g.basepoint ? "doublecircle" : "circle") << ", label=\"b" << b
            << "\"" << colour(colour_b, b) << "];\n";
    for (int f = 0; f < g.num_f(); ++f)
        out << "  f" << f << " [shape=box, label=\"A_" << g.fvert(f).factor + 1 << " / " << format(g.fvert(f).stab)
            << "\"" << colour(colour_f, f) << "];\n";
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto& ed = g.edge(e);
        out << "  b" << ed.b << " -- f" << ed.f << " [label=\"" << format(ed.label) << "\"";
        if (highlight && (*highlight)[static_cast<std::size_t>(e)])
            out << ", color=red, penwidth=2";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Hanging extensions

/// A coset of the F-vertex's stabiliser with no incident edge, searched in a
/// small box.
inline std::optional<FactorElement> free_coset(const KuroshGraph& g, int f)
{
    const auto& stab = g.fvert(f).stab;
    const int rank = g.presentation.rank_of(g.fvert(f).factor);
    FactorElement x(static_cast<std::size_t>(rank), -4);
    for (;;) {
        const FactorElement c = coset_reduce(stab, x);
        if (g.edge_with_label(f, c) < 0)
            return c;
        std::size_t i = 0;
        while (i < x.size() && x[i] == 4)
            x[i++] = -4;
        if (i == x.size())
            return std::nullopt;
        ++x[i];
    }
}

/// Attaches `count` hanging edges: each picks an F-vertex with a free coset
/// (or a B-vertex with a missing factor) and grows a fresh vertex there. The
/// result models the quotient of a larger H-invariant subtree. Returns the
/// number of edges actually attached.
inline int attach_hanging(KuroshGraph& g, int count, std::mt19937_64& rng)
{
    int attached = 0;
    for (int k = 0; k < count; ++k) {
        struct Slot {
            bool at_b;
            int v;
            int factor;
        };
        std::vector<Slot> slots;
        for (int b = 0; b < g.num_b; ++b)
            for (int i = 0; i < g.presentation.size(); ++i)
                if (g.edge_at(b, i) < 0)
                    slots.push_back({true, b, i});
        for (int f = 0; f < g.num_f(); ++f)
            if (free_coset(g, f))
                slots.push_back({false, f, g.fvert(f).factor});
        if (slots.empty())
            break;
        const Slot s = slots[std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(rng)];
        const int rank = g.presentation.rank_of(s.factor);
        if (s.at_b) {
            g.fverts.push_back(FVertex{s.factor, FactorSubgroup(rank)});
            g.edges.push_back(GraphEdge{s.v, g.num_f() - 1, FactorElement(static_cast<std::size_t>(rank), 0)});
        } else {
            const FactorElement label = *free_coset(g, s.v);
            g.edges.push_back(GraphEdge{g.num_b, s.v, label});
            ++g.num_b;
        }
        g.reindex();
        ++attached;
    }
    return attached;
}

} // namespace kurosh

#endif
