#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bq {

enum class TargetKind { Aerial, Ground, Inf };

// Edge from aerial vertex src (0-based) to an aerial vertex, a ground vertex or the sink at infinity.
// An aerial edge with target == src is a loop. Colors: '+', '-', or '.' for uncolored.
struct Edge {
    int src = 0;
    TargetKind kind = TargetKind::Ground;
    int target = 0;
    char color = '.';
    bool operator==(const Edge&) const = default;
    bool is_loop() const { return kind == TargetKind::Aerial && target == src; }
    bool carries_form() const { return kind != TargetKind::Inf && !is_loop(); }
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Edges are kept grouped by source in increasing order; the order within a source is semantic.
struct Graph {
    int n1 = 0;
    int n2 = 2;
    std::vector<Edge> edges;

    bool operator==(const Graph&) const = default;
    std::vector<int> out_edges(int v) const;
    int in_degree(int v) const;
    int edges_to_ground(int g = -1) const;
    bool has_inf() const;
    bool has_loop() const;
    bool colored() const;
    int dimension() const { return 2 * n1 + n2 - 2; }
    int form_edge_count() const;
};

std::string to_wire(const Graph& g);
Graph parse_wire(const std::string& text);

struct Canonical {
    std::string form;
    Graph graph;
    int automorphisms = 1;
};

// Minimum wire string over all relabelings of the aerial vertices.
Canonical canonicalize(const Graph& g);
std::string canonical_form(const Graph& g);
Graph relabel(const Graph& g, const std::vector<int>& perm);
// Swaps the two outgoing edges of vertex v.
Graph swap_pair(const Graph& g, int v);

struct AdmissibilityRules {
    bool allow_loops = false;
    bool allow_inf = false;
    bool colored = false;
    // In the colored setting edges differing only by color may share source and target.
    bool allow_mixed_double = true;
};

std::vector<std::string> admissibility_violations(const Graph& g, const AdmissibilityRules& rules);

constexpr int kUncoloredEnumerationCap = 4;
constexpr int kColoredEnumerationCap = 3;
constexpr int kFamilyEnumerationCap = 3;
constexpr int kLinearFamilyCap = 4;

// Isomorphism classes of admissible graphs with n aerial vertices of out-degree 2 and two ground vertices.
std::vector<Graph> enumerate_Q_n2(int n, bool colored);

struct ReductionFamily {
    std::vector<Graph> B;
    std::vector<Graph> W;
    std::vector<Graph> BW;
};

// Colored graphs with i aerial vertices, one ground vertex, at most one '-' edge to infinity; loops are
// admitted only in the wheel class.
ReductionFamily enumerate_reduction_family(int i);

// The part of B_i and BW_i whose operators can be nonzero for a linear Poisson structure acting on
// functions of q: every aerial vertex receives at most one edge, no loops, no '-' edge into the ground.
ReductionFamily enumerate_linear_family(int i);

enum class FamilyClass { B, W, BW, None };
FamilyClass classify(const Graph& g);
std::string to_string(FamilyClass c);

// One aerial vertex with a '-' edge to the ground function and an uncolored loop.
Graph small_loop();
Graph bernoulli_chain(int l);
Graph wheel(int m);
// Redirects the ground spoke of the first wheel vertex to the root of the Bernoulli graph.
Graph attach_wheel(const Graph& bernoulli, const Graph& wheel_graph);
int root_vertex(const Graph& g);

}  // namespace bq
