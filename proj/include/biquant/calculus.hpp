#pragma once

#include "biquant/graphs.hpp"
#include "biquant/lie.hpp"
#include "biquant/poly.hpp"
#include "biquant/weights.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bq {

// Polynomial with floating coefficients and a variance per coefficient.
struct NumPoly {
    Names names;
    std::map<Mono, std::pair<double, double>> terms;

    explicit NumPoly(Names n) : names(std::move(n)) {}
    static NumPoly from(const Poly& p);
    void add(const Mono& m, double value, double variance);
    void add_scaled(const Poly& p, double value, double variance);
    NumPoly& operator+=(const NumPoly& o);
    NumPoly operator-(const NumPoly& o) const;
    double max_abs() const;
    std::string to_string() const;
};

// A truncated series assembled from graph weights: exact when every weight used was exact.
struct Series {
    Poly exact;
    NumPoly numeric;
    bool is_exact = true;
    explicit Series(const Names& names) : exact(names), numeric(names) {}
    std::string to_string() const { return is_exact ? exact.to_string() : numeric.to_string(); }
};

// Replacement value for each h coordinate, substituted after differentiation.
using Restriction = std::vector<Poly>;

// Operator of a graph. Ground vertex k carries functions[k]. Edge labels: '+' ranges over q indices,
// '-' over h indices, '.' over all indices, the edge to infinity over h indices. The result has one entry
// per h index when the graph has an edge to infinity, otherwise a single entry.
std::vector<Poly> apply_graph(const Graph& g, const LieAlgebra& alg, int t, const std::vector<Poly>& functions,
                              const Restriction* restriction = nullptr);

Poly apply_bidiff(const Graph& g, const LieAlgebra& alg, int t, const Poly& f, const Poly& h,
                  const Restriction* restriction = nullptr);
std::vector<Poly> apply_reduction_op(const Graph& g, const SplitData& s, const Poly& f, const Restriction& restriction);

// Graph multiplicity 1 / (2^n |Aut|) in the sum over isomorphism classes.
Rational graph_multiplicity(const Graph& g);

enum class Flavor { Kontsevich, CattaneoFelder };

// f * g = fg + sum_n eps^n sum_classes w B(f, g) / (2^n |Aut|), truncated at eps^order. The
// Cattaneo-Felder flavor works on functions of q and restricts h coordinates to -lambda.
Series star_product(const Poly& f, const Poly& g, const SplitData& s, Flavor flavor, int order, WeightProvider& weights);

enum class Variant { Eps, Plain, TFixed, TFormal };
std::string to_string(Variant v);

// x_h -> -lambda (Eps, Plain), -t lambda (TFixed), -lambda * t with t stored in the eps slot (TFormal).
Restriction restriction_for(const SplitData& s, Variant v, const Rational& t = Rational(1));

struct ReductionTerm {
    Graph graph;
    int vertices = 0;
    Rational multiplicity;
};

// Graphs of B_i and BW_i, i <= order, that can act nontrivially on functions of q.
const std::vector<ReductionTerm>& reduction_terms(int order);

std::vector<Series> reduction_differential(const Poly& f, const SplitData& s, int order, WeightProvider& weights,
                                           Variant variant = Variant::Eps, const Rational& t = Rational(1));

// Violations of deg_q(B(F)) = deg_q(F) - i + 1 on q-monomials up to degree D (vector-space restriction).
std::vector<std::string> operator_degree_violations(const SplitData& s, int order, int D);

enum class Side { Left, Right };

struct CornerInsufficient : std::runtime_error {
    std::vector<std::string> graphs;
    explicit CornerInsufficient(std::vector<std::string> missing);
};

// Corner graphs: ground 1 is the axis function and ground 2 the corner function for the left action; the
// roles swap for the right action.
std::vector<Graph> enumerate_corner_graphs(int n);
std::optional<Rational> corner_weight(const Graph& g, Side side);

struct ModuleOptions {
    bool eps_formal = true;
    bool scale_rho_by_eps = false;
};

// Truncated bimodule action restricted to -lambda + h-perp at the end.
Poly module_action(Side side, const Poly& a, const Poly& b, const SplitData& s, int order);
// Contributing corner graphs (nonzero operator) for the given inputs.
std::vector<Graph> module_contributors(Side side, const Poly& a, const Poly& b, const SplitData& s, int order);

enum class TDirection { T1, T1Inv, T2 };
Poly T_truncated(TDirection direction, const Poly& f, const SplitData& s, int order);

// (H + (lambda+rho)(H)) *_1 1 restricted to -lambda + h-perp at order 1, for h basis vector i.
Poly lemma41_defect(const SplitData& s, int i, const ModuleOptions& options);

}  // namespace bq
