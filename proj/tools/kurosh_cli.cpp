// Command-line front end: rank, intersect, dicks, order-compare, fuzz,
// export-dot. Exit codes: 0 ok, 1 a holds flag is false, 2 input error.

#include "kurosh/kurosh.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace kurosh;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string presentation = "Z,Z";
    std::string generators;
    std::string generators_k;
    std::string orbit_order;
    std::string variable_order;
    std::string ball;
    std::string dot;
    std::string check = "all";
    std::string orbits;
    std::uint64_t seed = 1;
    std::size_t instances = 100;
    unsigned workers = 0;
    bool json_out = false;
    bool records = false;
};

std::string format_perm(const std::vector<int>& perm)
{
    std::string s;
    for (std::size_t i = 0; i < perm.size(); ++i)
        s += (i ? "," : "") + std::to_string(perm[i] + 1);
    return s;
}

json instance_json(const InstanceSpec& s)
{
    json j{{"presentation", format(s.presentation)}, {"generators", format(s.gens_h)}};
    if (!s.gens_k.empty())
        j["generators_k"] = format(s.gens_k);
    j["orbit_order"] = format_perm(s.order.orbit_order);
    j["variable_order"] = format_perm(s.order.variable_order);
    j["seed"] = s.seed;
    j["index"] = s.index;
    return j;
}

InstanceSpec instance_from(const Options& o)
{
    InstanceSpec s;
    s.presentation = parse_presentation(o.presentation);
    s.gens_h = parse_generators(o.generators, s.presentation);
    s.gens_k = parse_generators(o.generators_k, s.presentation);
    const int n = s.presentation.size();
    s.order = OrderConfig::identity(n);
    if (!o.orbit_order.empty())
        s.order.orbit_order = parse_permutation(o.orbit_order, n);
    if (!o.variable_order.empty())
        s.order.variable_order = parse_permutation(o.variable_order, n);
    s.seed = o.seed;
    return s;
}

std::pair<int, int> parse_ball(const std::string& text)
{
    int l = 0, e = 0;
    char comma = 0;
    std::istringstream in(text);
    if (!(in >> l >> comma >> e) || comma != ',' || l < 1 || e < 1 || !(in >> std::ws).eof())
        throw InputError("--ball expects L,E with L,E >= 1");
    return {l, e};
}

void write_dot(const std::string& path, const std::string& text)
{
    if (path.empty())
        return;
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path);
    out << text;
}

json rank_json(const KuroshRank& r)
{
    return json{{"c", r.c}, {"betti", r.betti}, {"kappa", r.kappa}, {"kappa_reduced", r.kappa_reduced}};
}

json tree_edge_json(const TreeEdge& t) { return json{{"element", format(t.element)}, {"index", t.index + 1}}; }

json side_json(const SideResult& s)
{
    static const char* kinds[] = {"stabilizer_fan", "orbit_repeat", "exhausted"};
    json j{{"infinite", s.infinite}, {"certificate", kinds[static_cast<int>(s.certificate.kind)]},
           {"explored", s.certificate.explored}};
    json path = json::array();
    for (const auto& t : s.certificate.path)
        path.push_back(tree_edge_json(t));
    j["path"] = path;
    if (s.certificate.kind == CertificateKind::StabilizerFan)
        j["fvertex"] = s.certificate.fvertex;
    if (s.certificate.kind == CertificateKind::OrbitRepeat) {
        j["v1"] = format(s.certificate.v1);
        j["v2"] = format(s.certificate.v2);
        j["h"] = format(s.certificate.h);
    }
    return j;
}

void emit(const Options& o, const json& j, const std::string& text)
{
    if (o.json_out)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_rank(const Options& o)
{
    const auto s = instance_from(o);
    const auto g = build_folded(s.presentation, s.gens_h);
    const auto r = kurosh_rank(g);
    const auto d = decomposition(g);
    json parts = json::array();
    std::ostringstream text;
    text << "c " << r.c << "\nbetti " << r.betti << "\nkappa " << r.kappa << "\nkappa_reduced " << r.kappa_reduced
         << "\n";
    for (const auto& part : d.parts) {
        parts.push_back(json{{"factor", part.factor + 1}, {"rep", format(part.rep)}, {"stabilizer", format(part.stab)}});
        text << "part a" << part.factor + 1 << " rep " << format(part.rep) << " stabilizer " << format(part.stab)
             << "\n";
    }
    json basis = json::array();
    for (const auto& w : d.free_basis) {
        basis.push_back(format(w));
        text << "free " << format(w) << "\n";
    }
    for (const auto& w : g.warnings)
        std::cerr << "warning: " << w << "\n";
    json j = rank_json(r);
    j["decomposition"] = json{{"parts", parts}, {"free_basis", basis}};
    j["warnings"] = g.warnings;
    j["instance"] = instance_json(s);
    emit(o, j, text.str());
    write_dot(o.dot, to_dot(g));
    return 0;
}

int cmd_intersect(const Options& o)
{
    const auto s = instance_from(o);
    const auto gh = build_folded(s.presentation, s.gens_h), gk = build_folded(s.presentation, s.gens_k);
    const auto comps = pullback_components(gh, gk);
    const auto r = theorem_a_report(gh, gk);
    json cs = json::array();
    std::ostringstream text;
    text << std::boolalpha;
    for (const auto& c : comps) {
        cs.push_back(json{{"g_rep", format(c.g_rep)},
                          {"basepoint", c.is_basepoint_component},
                          {"kappa", c.rank.kappa},
                          {"kappa_reduced", c.rank.kappa_reduced},
                          {"generators", format(decomposition(c.graph).generators())}});
        text << "component g " << format(c.g_rep) << (c.is_basepoint_component ? " (basepoint)" : "")
             << " kappa_reduced " << c.rank.kappa_reduced << "\n";
    }
    json j{{"kappa_reduced_h", r.kappa_reduced_h}, {"kappa_reduced_k", r.kappa_reduced_k}, {"components", cs},
           {"lhs_sum", r.lhs_sum}, {"rhs_product", r.rhs_product}, {"holds_strengthened", r.holds_strengthened},
           {"holds_hn1", r.holds_hn1}, {"holds_hn2", r.holds_hn2}};
    text << "lhs " << r.lhs_sum << " rhs " << r.rhs_product << "\nholds_strengthened " << r.holds_strengthened
         << "\nholds_hn1 " << r.holds_hn1 << "\nholds_hn2 " << r.holds_hn2 << "\n";
    bool ok = r.holds();
    if (!o.ball.empty()) {
        const auto rec = auto_bounds(gh, gk);
        const auto [l, e] = o.ball == "auto" ? rec : parse_ball(o.ball);
        const auto oracle = intersection_oracle(gh, gk, l, e);
        const bool equal = canonical_form(oracle.graph) == canonical_form(comps.front().graph);
        // Stability between (L,E) and (L+1,E+1) cannot notice exponents far above E.
        const bool sufficient = l >= rec.first && e >= rec.second;
        const bool decisive = oracle.stable && sufficient;
        j["oracle"] = json{{"L", l},
                           {"E", e},
                           {"recommended", json::array({rec.first, rec.second})},
                           {"sufficient_bounds", sufficient},
                           {"stable", oracle.stable},
                           {"within_budget", oracle.within_budget},
                           {"explored", oracle.explored},
                           {"equal", equal}};
        j["holds_oracle"] = !decisive || equal;
        ok = ok && (!decisive || equal);
        text << "oracle " << (decisive ? (equal ? "agrees" : "DISAGREES") : equal ? "agrees at these bounds" : "unconfirmed");
        if (!sufficient)
            text << " (bounds below recommended " << rec.first << "," << rec.second << ")";
        text << "\n";
    }
    j["instance"] = instance_json(s);
    emit(o, j, text.str());
    if (!comps.empty())
        write_dot(o.dot, to_dot(comps.front().graph));
    return ok ? 0 : 1;
}

std::string dicks_dot(const KuroshGraph& g, const TheoremMainReport& r)
{
    std::vector<bool> bridge(static_cast<std::size_t>(g.num_edges()), false);
    for (int e : r.bridge_edges)
        bridge[static_cast<std::size_t>(e)] = true;
    std::vector<int> cb(static_cast<std::size_t>(g.num_b), -1), cf(static_cast<std::size_t>(g.num_f()), -1);
    for (std::size_t i = 0; i < r.islands.size(); ++i) {
        for (int b : r.islands[i].b)
            cb[static_cast<std::size_t>(b)] = static_cast<int>(i);
        for (int f : r.islands[i].f)
            cf[static_cast<std::size_t>(f)] = static_cast<int>(i);
    }
    return to_dot(g, &bridge, &cb, &cf);
}

int cmd_dicks(const Options& o)
{
    const auto s = instance_from(o);
    const auto g = build_folded(s.presentation, s.gens_h);
    const auto r = theorem_main_report(g, s.order);
    json edges = json::array();
    std::ostringstream text;
    for (const auto& v : r.verdicts) {
        edges.push_back(json{{"edge", v.edge}, {"lift", tree_edge_json(v.lift)}, {"bridge", v.bridge},
                             {"central", side_json(v.central)}, {"factor", side_json(v.factor)}});
        text << "edge " << v.edge << " (" << format(v.lift.element) << ", a" << v.lift.index + 1 << ") "
             << (v.bridge ? "bridge" : "not a bridge") << "\n";
    }
    json islands = json::array();
    for (const auto& isl : r.islands) {
        islands.push_back(json{{"b", isl.b}, {"f", isl.f}, {"edges", isl.edges}, {"c", isl.rank.c},
                               {"betti", isl.rank.betti}, {"kappa", isl.rank.kappa}});
        text << "island kappa " << isl.rank.kappa << "\n";
    }
    text << "bridge_count " << r.bridge_count << "\nkappa_reduced " << r.kappa_reduced << "\nholds "
         << (r.holds ? "true" : "false") << "\n";
    json j{{"bridge_count", r.bridge_count}, {"kappa_reduced", r.kappa_reduced}, {"holds", r.holds},
           {"edges", edges}, {"islands", islands}, {"instance", instance_json(s)}};
    emit(o, j, text.str());
    write_dot(o.dot, dicks_dot(g, r));
    return r.holds ? 0 : 1;
}

int cmd_order_compare(const Options& o)
{
    const auto s = instance_from(o);
    if (s.gens_h.size() != 2)
        throw InputError("order-compare expects exactly two words: -g \"u ; v\"");
    std::strong_ordering c = std::strong_ordering::equal;
    json j;
    if (o.orbits.empty()) {
        c = magnus_compare(s.presentation, s.gens_h[0], s.gens_h[1], s.order);
    } else {
        int i = 0, k = 0;
        char comma = 0;
        std::istringstream in(o.orbits);
        if (!(in >> i >> comma >> k) || comma != ',' || i < 1 || k < 1 || i > s.presentation.size() ||
            k > s.presentation.size())
            throw InputError("--orbits expects i,j with factor indices");
        require_free_group(s.presentation);
        c = edge_compare(s.presentation, EdgeName{i - 1, s.gens_h[0]}, EdgeName{k - 1, s.gens_h[1]}, s.order);
        j["orbits"] = o.orbits;
    }
    const int sign = c < 0 ? -1 : (c > 0 ? 1 : 0);
    j["result"] = sign;
    j["instance"] = instance_json(s);
    emit(o, j, std::string(sign < 0 ? "<" : (sign > 0 ? ">" : "=")) + "\n");
    return 0;
}

struct FuzzRecord {
    json record;
    bool holds = true;
};

FuzzRecord fuzz_theorem_a(std::uint64_t seed, std::size_t i)
{
    const auto s = theorem_a_instance(seed, i);
    const auto r = theorem_a_report(s.presentation, s.gens_h, s.gens_k);
    return {json{{"instance", instance_json(s)}, {"lhs_sum", r.lhs_sum}, {"rhs_product", r.rhs_product},
                 {"holds_strengthened", r.holds_strengthened}, {"holds_hn1", r.holds_hn1}, {"holds_hn2", r.holds_hn2}},
            r.holds()};
}

FuzzRecord fuzz_theorem_main(std::uint64_t seed, std::size_t i)
{
    const auto s = theorem_main_instance(seed, i);
    const auto g = build_folded(s.presentation, s.gens_h);
    const auto r = theorem_main_report(g, s.order);
    // The bridge set under the identity order, logged to see whether it moves.
    const auto id = theorem_main_report(g, OrderConfig::identity(s.presentation.size()));
    return {json{{"instance", instance_json(s)}, {"bridge_count", r.bridge_count}, {"kappa_reduced", r.kappa_reduced},
                 {"bridges", r.bridge_edges}, {"bridges_identity_order", id.bridge_edges},
                 {"bridge_set_varies", r.bridge_edges != id.bridge_edges}, {"holds", r.holds && id.holds}},
            r.holds && id.holds};
}

int cmd_fuzz(const Options& o)
{
    std::vector<std::pair<std::string, FuzzRecord (*)(std::uint64_t, std::size_t)>> checks;
    if (o.check == "theorem-a" || o.check == "all")
        checks.emplace_back("theorem-a", fuzz_theorem_a);
    if (o.check == "theorem-main" || o.check == "all")
        checks.emplace_back("theorem-main", fuzz_theorem_main);
    if (checks.empty())
        throw InputError("--check must be theorem-a, theorem-main or all");
    json j{{"seed", o.seed}, {"instances", o.instances}, {"checks", json::object()}};
    std::ostringstream text;
    bool all = true;
    for (const auto& [name, fn] : checks) {
        const auto records = parallel_map<FuzzRecord>(
            o.instances, [&, fn = fn](std::size_t i) { return fn(o.seed, i); }, o.workers);
        std::size_t holds = 0, varies = 0;
        json failures = json::array(), all_records = json::array();
        for (const auto& r : records) {
            holds += r.holds;
            if (r.record.contains("bridge_set_varies") && r.record["bridge_set_varies"].get<bool>())
                ++varies;
            if (!r.holds)
                failures.push_back(r.record);
            if (o.records)
                all_records.push_back(r.record);
        }
        json c{{"holds", holds}, {"total", records.size()}, {"failures", failures}};
        if (name == "theorem-main")
            c["bridge_set_varies"] = varies;
        if (o.records)
            c["records"] = all_records;
        j["checks"][name] = c;
        text << name << ": " << holds << "/" << records.size() << " hold\n";
        all = all && holds == records.size();
    }
    j["holds_all"] = all;
    emit(o, j, text.str());
    return all ? 0 : 1;
}

int cmd_export_dot(const Options& o)
{
    const auto s = instance_from(o);
    const auto g = build_folded(s.presentation, s.gens_h);
    write_dot(o.dot.empty() ? "-" : o.dot, to_dot(g));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kurosh ranks, intersections and Dicks trees of subgroups of free products"};
    app.require_subcommand(1);
    Options o;

    auto add_instance = [&](CLI::App* sub, bool with_k, bool with_orders) {
        sub->add_option("-p,--presentation", o.presentation, "factors, e.g. \"Z,Z^2\"");
        sub->add_option("-g,--generators", o.generators, "generators of H, ';'-separated");
        if (with_k)
            sub->add_option("-k,--generators-k", o.generators_k, "generators of K, ';'-separated");
        if (with_orders) {
            sub->add_option("--orbit-order", o.orbit_order, "permutation of factor indices, e.g. 2,1");
            sub->add_option("--variable-order", o.variable_order, "permutation of Magnus variables");
        }
        sub->add_flag("--json", o.json_out, "JSON output");
    };

    auto* rank = app.add_subcommand("rank", "Kurosh rank and decomposition");
    add_instance(rank, false, false);
    rank->add_option("--dot", o.dot, "write the folded graph as DOT");
    auto* intersect = app.add_subcommand("intersect", "intersections over double cosets");
    add_instance(intersect, true, false);
    intersect->add_option("--ball", o.ball, "cross-check against the brute-force oracle at L,E (or auto)");
    intersect->add_option("--dot", o.dot, "write the basepoint component as DOT");
    auto* dicks = app.add_subcommand("dicks", "bridges and islands");
    add_instance(dicks, false, true);
    dicks->add_option("--dot", o.dot, "write the graph with bridges and islands as DOT");
    auto* order = app.add_subcommand("order-compare", "compare two elements, or two edges with --orbits");
    add_instance(order, false, true);
    order->add_option("--orbits", o.orbits, "edge orbits i,j of the two words");
    auto* fuzz = app.add_subcommand("fuzz", "seeded random campaigns");
    fuzz->add_option("--instances", o.instances, "number of instances");
    fuzz->add_option("--seed", o.seed, "campaign seed");
    fuzz->add_option("--check", o.check, "theorem-a, theorem-main or all");
    fuzz->add_option("--workers", o.workers, "worker threads (0: hardware concurrency)");
    fuzz->add_flag("--records", o.records, "include every instance record");
    fuzz->add_flag("--json", o.json_out, "JSON output");
    auto* dot = app.add_subcommand("export-dot", "folded graph as DOT");
    add_instance(dot, false, false);
    dot->add_option("--dot", o.dot, "output path (default stdout)");
    for (auto* sub : {rank, intersect, dicks, order, dot})
        sub->add_option("--seed", o.seed, "seed recorded in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*rank)
            return cmd_rank(o);
        if (*intersect)
            return cmd_intersect(o);
        if (*dicks)
            return cmd_dicks(o);
        if (*order)
            return cmd_order_compare(o);
        if (*fuzz)
            return cmd_fuzz(o);
        if (*dot)
            return cmd_export_dot(o);
    } catch (const ParseError& e) {
        std::cerr << "input error at " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
