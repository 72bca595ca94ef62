#pragma once

#include "biquant/graphs.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

// Brute-force generate-and-filter enumeration with its own isomorphism test, sharing nothing with the
// library enumerators beyond the Graph type used for comparison.
namespace oracle {

enum Kind { Aerial = 0, Ground = 1, Inf = 2 };

struct RawEdge {
    int kind;
    int target;  // aerial index, ground index, or 0 for infinity
    char color;
};

using RawGraph = std::vector<std::pair<RawEdge, RawEdge>>;
using Key = std::vector<int>;

inline Key key_under(const RawGraph& g, const std::vector<int>& perm) {
    const int n = static_cast<int>(g.size());
    std::vector<int> inverse(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) inverse[static_cast<size_t>(perm[static_cast<size_t>(v)])] = v;
    Key key;
    auto put = [&](const RawEdge& e) {
        key.push_back(e.kind);
        key.push_back(e.kind == Aerial ? perm[static_cast<size_t>(e.target)] : e.target);
        key.push_back(e.color);
    };
    for (int w = 0; w < n; ++w) {
        const auto& [a, b] = g[static_cast<size_t>(inverse[static_cast<size_t>(w)])];
        put(a);
        put(b);
    }
    return key;
}

inline Key canonical_key(const RawGraph& g) {
    std::vector<int> perm(g.size());
    std::iota(perm.begin(), perm.end(), 0);
    Key best;
    bool first = true;
    do {
        Key k = key_under(g, perm);
        if (first || k < best) best = k;
        first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline RawGraph from_graph(const bq::Graph& g) {
    RawGraph out(static_cast<size_t>(g.n1));
    std::vector<int> filled(static_cast<size_t>(g.n1), 0);
    for (const auto& e : g.edges) {
        RawEdge r{e.kind == bq::TargetKind::Aerial ? Aerial : e.kind == bq::TargetKind::Ground ? Ground : Inf,
                  e.kind == bq::TargetKind::Inf ? 0 : e.target, e.color};
        auto& slot = out[static_cast<size_t>(e.src)];
        (filled[static_cast<size_t>(e.src)]++ == 0 ? slot.first : slot.second) = r;
    }
    return out;
}

struct Options {
    int n1 = 0;
    int grounds = 2;
    std::vector<char> colors{'.'};
    bool loops = false;
    bool inf = false;
};

// Every labelled graph with ordered edge pairs, before any filtering beyond distinctness of the two edges.
template <typename Visit>
void raw_graphs(const Options& o, Visit&& visit) {
    auto targets = [&](int v) {
        std::vector<RawEdge> out;
        for (char c : o.colors) {
            for (int w = 0; w < o.n1; ++w)
                if (w != v || o.loops) out.push_back({Aerial, w, c});
            for (int k = 0; k < o.grounds; ++k) out.push_back({Ground, k, c});
        }
        if (o.inf) out.push_back({Inf, 0, '-'});
        return out;
    };
    RawGraph g(static_cast<size_t>(o.n1));
    auto rec = [&](auto&& self, int v) -> void {
        if (v == o.n1) {
            visit(g);
            return;
        }
        auto opts = targets(v);
        for (const auto& a : opts)
            for (const auto& b : opts) {
                if (a.kind == b.kind && a.target == b.target && a.color == b.color) continue;
                g[static_cast<size_t>(v)] = {a, b};
                self(self, v + 1);
            }
    };
    rec(rec, 0);
}

inline bool no_uncolored_double(const RawGraph& g) {
    for (const auto& [a, b] : g)
        if (a.kind == b.kind && a.target == b.target && (a.color == '.' || b.color == '.')) return false;
    return true;
}

inline std::set<Key> q_classes(int n, bool colored) {
    Options o;
    o.n1 = n;
    o.colors = colored ? std::vector<char>{'+', '-'} : std::vector<char>{'.'};
    std::set<Key> out;
    raw_graphs(o, [&](const RawGraph& g) {
        if (no_uncolored_double(g)) out.insert(canonical_key(g));
    });
    return out;
}

struct FamilyClasses {
    std::set<Key> B, W, BW;
};

inline FamilyClasses family_classes(int i) {
    Options o;
    o.n1 = i;
    o.grounds = 1;
    o.colors = {'+', '-'};
    o.loops = true;
    o.inf = true;
    FamilyClasses out;
    raw_graphs(o, [&](const RawGraph& g) {
        int inf = 0, ground = 0;
        bool loop = false;
        for (int v = 0; v < i; ++v)
            for (const RawEdge* e : {&g[static_cast<size_t>(v)].first, &g[static_cast<size_t>(v)].second}) {
                inf += e->kind == Inf;
                ground += e->kind == Ground;
                loop = loop || (e->kind == Aerial && e->target == v);
            }
        if (inf == 1 && ground == i && !loop) out.B.insert(canonical_key(g));
        if (inf == 1 && ground == i - 1 && !loop) out.BW.insert(canonical_key(g));
        if (inf == 0 && ground == i) out.W.insert(canonical_key(g));
    });
    return out;
}

inline std::set<Key> keys_of(const std::vector<bq::Graph>& graphs) {
    std::set<Key> out;
    for (const auto& g : graphs) out.insert(canonical_key(from_graph(g)));
    return out;
}

}  // namespace oracle
