#include "biquant/graphs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace bq {

std::vector<int> Graph::out_edges(int v) const {
    std::vector<int> out;
    for (size_t k = 0; k < edges.size(); ++k)
        if (edges[k].src == v) out.push_back(static_cast<int>(k));
    return out;
}

int Graph::in_degree(int v) const {
    int d = 0;
    for (const auto& e : edges)
        if (e.kind == TargetKind::Aerial && e.target == v) ++d;
    return d;
}

int Graph::edges_to_ground(int g) const {
    int d = 0;
    for (const auto& e : edges)
        if (e.kind == TargetKind::Ground && (g < 0 || e.target == g)) ++d;
    return d;
}

bool Graph::has_inf() const {
    return std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.kind == TargetKind::Inf; });
}

bool Graph::has_loop() const {
    return std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.is_loop(); });
}

bool Graph::colored() const {
    return std::any_of(edges.begin(), edges.end(), [](const Edge& e) { return e.color != '.'; });
}

int Graph::form_edge_count() const {
    return static_cast<int>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.carries_form(); }));
}

std::string to_wire(const Graph& g) {
    std::ostringstream os;
    os << "n1=" << g.n1 << " n2=" << g.n2 << " edges=";
    for (const auto& e : g.edges) {
        os << "(" << e.src + 1 << ",";
        switch (e.kind) {
            case TargetKind::Aerial: os << e.target + 1; break;
            case TargetKind::Ground: os << "F" << e.target + 1; break;
            case TargetKind::Inf: os << "inf"; break;
        }
        os << "," << e.color << ")";
    }
    return os.str();
}

Graph parse_wire(const std::string& text) {
    static const std::regex header(R"(^\s*n1=(\d+)\s+n2=(\d+)\s+edges=((?:\(\s*\d+\s*,\s*(?:F\d+|inf|\d+)\s*,\s*[-+.]\s*\))*)\s*$)");
    static const std::regex edge(R"(\(\s*(\d+)\s*,\s*(F\d+|inf|\d+)\s*,\s*([-+.])\s*\))");
    std::smatch m;
    if (!std::regex_match(text, m, header)) throw GraphError("malformed graph wire format: '" + text + "'");
    Graph g;
    g.n1 = std::stoi(m[1]);
    g.n2 = std::stoi(m[2]);
    if (g.n2 < 0 || g.n2 > 2) throw GraphError("ground vertex count must be 0, 1 or 2");
    std::string body = m[3];
    for (auto it = std::sregex_iterator(body.begin(), body.end(), edge); it != std::sregex_iterator(); ++it) {
        Edge e;
        e.src = std::stoi((*it)[1]) - 1;
        std::string t = (*it)[2];
        if (t == "inf") {
            e.kind = TargetKind::Inf;
            e.target = 0;
        } else if (t[0] == 'F') {
            e.kind = TargetKind::Ground;
            e.target = std::stoi(t.substr(1)) - 1;
            if (e.target < 0 || e.target >= g.n2) throw GraphError("ground target out of range: " + t);
        } else {
            e.kind = TargetKind::Aerial;
            e.target = std::stoi(t) - 1;
            if (e.target < 0 || e.target >= g.n1) throw GraphError("aerial target out of range: " + t);
        }
        e.color = std::string((*it)[3])[0];
        if (e.src < 0 || e.src >= g.n1) throw GraphError("edge source out of range");
        g.edges.push_back(e);
    }
    std::stable_sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) { return a.src < b.src; });
    return g;
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
    Graph r = g;
    for (auto& e : r.edges) {
        e.src = perm[static_cast<size_t>(e.src)];
        if (e.kind == TargetKind::Aerial) e.target = perm[static_cast<size_t>(e.target)];
    }
    std::stable_sort(r.edges.begin(), r.edges.end(), [](const Edge& a, const Edge& b) { return a.src < b.src; });
    return r;
}

Graph swap_pair(const Graph& g, int v) {
    Graph r = g;
    auto idx = r.out_edges(v);
    if (idx.size() != 2) throw GraphError("vertex does not have exactly two outgoing edges");
    std::swap(r.edges[static_cast<size_t>(idx[0])], r.edges[static_cast<size_t>(idx[1])]);
    return r;
}

Canonical canonicalize(const Graph& g) {
    std::vector<int> perm(static_cast<size_t>(g.n1));
    std::iota(perm.begin(), perm.end(), 0);
    Canonical best;
    bool first = true;
    do {
        Graph r = relabel(g, perm);
        std::string w = to_wire(r);
        if (first || w < best.form) {
            best.form = std::move(w);
            best.graph = std::move(r);
            best.automorphisms = 1;
            first = false;
        } else if (w == best.form) {
            ++best.automorphisms;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::string canonical_form(const Graph& g) { return canonicalize(g).form; }

std::vector<std::string> admissibility_violations(const Graph& g, const AdmissibilityRules& rules) {
    std::vector<std::string> out;
    if (g.n1 < 0 || g.n2 < 0) out.push_back("negative vertex count");
    if (g.dimension() < 0) out.push_back("dimension 2*n1+n2-2 is negative");
    int inf = 0;
    std::set<std::tuple<int, int, int, char>> seen;
    for (const auto& e : g.edges) {
        if (e.src < 0 || e.src >= g.n1) out.push_back("edge source is not an aerial vertex");
        if (e.kind == TargetKind::Aerial && (e.target < 0 || e.target >= g.n1)) out.push_back("aerial target out of range");
        if (e.kind == TargetKind::Ground && (e.target < 0 || e.target >= g.n2)) out.push_back("ground target out of range");
        if (e.is_loop() && !rules.allow_loops) out.push_back("loop at vertex " + std::to_string(e.src + 1));
        if (e.kind == TargetKind::Inf) {
            ++inf;
            if (!rules.allow_inf) out.push_back("edge to infinity not allowed here");
            if (e.color != '-') out.push_back("edge to infinity must be colored '-'");
        }
        if (rules.colored && e.color == '.') out.push_back("uncolored edge in a colored graph");
        if (!rules.colored && e.color != '.') out.push_back("colored edge in an uncolored graph");
        char key_color = (rules.colored && rules.allow_mixed_double) ? e.color : '.';
        auto key = std::make_tuple(e.src, static_cast<int>(e.kind), e.target, key_color);
        if (!seen.insert(key).second) out.push_back("double edge from vertex " + std::to_string(e.src + 1));
    }
    if (inf > 1) out.push_back("more than one edge to infinity");
    for (int v = 0; v < g.n1; ++v)
        if (g.out_edges(v).size() != 2) out.push_back("vertex " + std::to_string(v + 1) + " must have out-degree 2");
    for (size_t k = 1; k < g.edges.size(); ++k)
        if (g.edges[k].src < g.edges[k - 1].src) out.push_back("edges not grouped by source");
    return out;
}

namespace {

struct Option {
    TargetKind kind;
    int target;  // -1 marks a loop
    char color;
};

using Collector = std::map<std::string, Graph>;

template <typename Accept, typename Prune>
void generate(int n1, int n2, const std::vector<Option>& base, bool include_loops, Accept&& accept, Prune&& prune) {
    Graph g;
    g.n1 = n1;
    g.n2 = n2;
    auto options_for = [&](int v) {
        std::vector<Edge> out;
        for (const auto& o : base) {
            if (o.kind == TargetKind::Aerial) {
                if (o.target == -1) {
                    if (include_loops) out.push_back({v, TargetKind::Aerial, v, o.color});
                    continue;
                }
                for (int w = 0; w < n1; ++w)
                    if (w != v) out.push_back({v, TargetKind::Aerial, w, o.color});
            } else {
                out.push_back({v, o.kind, o.target, o.color});
            }
        }
        return out;
    };
    std::vector<std::vector<Edge>> per_vertex;
    for (int v = 0; v < n1; ++v) per_vertex.push_back(options_for(v));
    auto rec = [&](auto&& self, int v) -> void {
        if (v == n1) {
            accept(g);
            return;
        }
        const auto& opts = per_vertex[static_cast<size_t>(v)];
        for (size_t a = 0; a < opts.size(); ++a)
            for (size_t b = 0; b < opts.size(); ++b) {
                if (a == b) continue;
                const Edge& e1 = opts[a];
                const Edge& e2 = opts[b];
                bool same_target = e1.kind == e2.kind && e1.target == e2.target;
                if (same_target && (e1.color == '.' || e1.color == e2.color)) continue;
                g.edges.push_back(e1);
                g.edges.push_back(e2);
                if (!prune(g, v)) self(self, v + 1);
                g.edges.pop_back();
                g.edges.pop_back();
            }
    };
    rec(rec, 0);
}

std::vector<Graph> sorted_values(const Collector& c) {
    std::vector<Graph> out;
    for (const auto& [k, g] : c) out.push_back(g);
    return out;
}

int count_inf(const Graph& g) {
    return static_cast<int>(std::count_if(g.edges.begin(), g.edges.end(), [](const Edge& e) { return e.kind == TargetKind::Inf; }));
}

}  // namespace

std::vector<Graph> enumerate_Q_n2(int n, bool colored) {
    if (n < 0) throw GraphError("vertex count must be nonnegative");
    int cap = colored ? kColoredEnumerationCap : kUncoloredEnumerationCap;
    if (n > cap)
        throw ResourceError("enumeration of " + std::string(colored ? "colored" : "uncolored") + " graphs is capped at n=" +
                            std::to_string(cap));
    std::vector<Option> base;
    std::vector<char> colors = colored ? std::vector<char>{'+', '-'} : std::vector<char>{'.'};
    for (char c : colors) {
        base.push_back({TargetKind::Aerial, 0, c});
        base.push_back({TargetKind::Ground, 0, c});
        base.push_back({TargetKind::Ground, 1, c});
    }
    Collector found;
    generate(
        n, 2, base, false,
        [&](const Graph& g) {
            auto c = canonicalize(g);
            found.emplace(c.form, c.graph);
        },
        [](const Graph&, int) { return false; });
    return sorted_values(found);
}

FamilyClass classify(const Graph& g) {
    if (g.n2 != 1) return FamilyClass::None;
    int f = g.edges_to_ground(0);
    int inf = count_inf(g);
    if (inf == 1 && f == g.n1) return FamilyClass::B;
    if (inf == 1 && f == g.n1 - 1) return FamilyClass::BW;
    if (inf == 0 && f == g.n1) return FamilyClass::W;
    return FamilyClass::None;
}

std::string to_string(FamilyClass c) {
    switch (c) {
        case FamilyClass::B: return "B";
        case FamilyClass::W: return "W";
        case FamilyClass::BW: return "BW";
        default: return "none";
    }
}

ReductionFamily enumerate_reduction_family(int i) {
    if (i < 1) throw GraphError("family index must be positive");
    if (i > kFamilyEnumerationCap)
        throw ResourceError("reduction family enumeration is capped at i=" + std::to_string(kFamilyEnumerationCap));
    std::vector<Option> base;
    for (char c : {'+', '-'}) {
        base.push_back({TargetKind::Aerial, 0, c});
        base.push_back({TargetKind::Aerial, -1, c});
        base.push_back({TargetKind::Ground, 0, c});
    }
    base.push_back({TargetKind::Inf, 0, '-'});
    Collector b, w, bw;
    generate(
        i, 1, base, true,
        [&](const Graph& g) {
            auto cls = classify(g);
            if (cls == FamilyClass::None) return;
            if (cls != FamilyClass::W && g.has_loop()) return;
            auto c = canonicalize(g);
            (cls == FamilyClass::B ? b : cls == FamilyClass::W ? w : bw).emplace(c.form, c.graph);
        },
        [](const Graph& g, int) { return count_inf(g) > 1; });
    return {sorted_values(b), sorted_values(w), sorted_values(bw)};
}

ReductionFamily enumerate_linear_family(int i) {
    if (i < 1) throw GraphError("family index must be positive");
    if (i > kLinearFamilyCap)
        throw ResourceError("linear reduction family enumeration is capped at i=" + std::to_string(kLinearFamilyCap));
    std::vector<Option> base{{TargetKind::Aerial, 0, '+'},
                             {TargetKind::Aerial, 0, '-'},
                             {TargetKind::Ground, 0, '+'},
                             {TargetKind::Inf, 0, '-'}};
    Collector b, bw;
    generate(
        i, 1, base, false,
        [&](const Graph& g) {
            if (count_inf(g) != 1) return;
            auto cls = classify(g);
            if (cls != FamilyClass::B && cls != FamilyClass::BW) return;
            auto c = canonicalize(g);
            (cls == FamilyClass::B ? b : bw).emplace(c.form, c.graph);
        },
        [i](const Graph& g, int) {
            if (count_inf(g) > 1) return true;
            std::vector<int> indeg(static_cast<size_t>(i), 0);
            int non_ground = 0;
            for (const auto& e : g.edges) {
                if (e.kind == TargetKind::Aerial && ++indeg[static_cast<size_t>(e.target)] > 1) return true;
                if (e.kind != TargetKind::Ground) ++non_ground;
            }
            return non_ground > i + 1;
        });
    return {sorted_values(b), {}, sorted_values(bw)};
}

Graph small_loop() {
    Graph g;
    g.n1 = 1;
    g.n2 = 1;
    g.edges = {{0, TargetKind::Ground, 0, '-'}, {0, TargetKind::Aerial, 0, '.'}};
    return g;
}

Graph bernoulli_chain(int l) {
    if (l < 1) throw GraphError("Bernoulli chain needs at least one vertex");
    Graph g;
    g.n1 = l;
    g.n2 = 1;
    g.edges.push_back({0, TargetKind::Ground, 0, '+'});
    g.edges.push_back({0, TargetKind::Inf, 0, '-'});
    for (int k = 1; k < l; ++k) {
        g.edges.push_back({k, TargetKind::Ground, 0, '+'});
        g.edges.push_back({k, TargetKind::Aerial, k - 1, '+'});
    }
    return g;
}

Graph wheel(int m) {
    if (m < 1) throw GraphError("wheel needs at least one vertex");
    Graph g;
    g.n1 = m;
    g.n2 = 1;
    for (int k = 0; k < m; ++k) {
        g.edges.push_back({k, TargetKind::Ground, 0, '+'});
        g.edges.push_back({k, TargetKind::Aerial, (k + 1) % m, '+'});
    }
    return g;
}

int root_vertex(const Graph& g) {
    for (int v = 0; v < g.n1; ++v)
        if (g.in_degree(v) == 0) return v;
    return -1;
}

Graph attach_wheel(const Graph& bernoulli, const Graph& wheel_graph) {
    int root = root_vertex(bernoulli);
    if (root < 0) throw GraphError("Bernoulli graph has no root");
    Graph g;
    g.n1 = bernoulli.n1 + wheel_graph.n1;
    g.n2 = 1;
    g.edges = bernoulli.edges;
    bool redirected = false;
    for (auto e : wheel_graph.edges) {
        e.src += bernoulli.n1;
        if (e.kind == TargetKind::Aerial) e.target += bernoulli.n1;
        if (!redirected && e.src == bernoulli.n1 && e.kind == TargetKind::Ground) {
            e.kind = TargetKind::Aerial;
            e.target = root;
            redirected = true;
        }
        g.edges.push_back(e);
    }
    return g;
}

}  // namespace bq
