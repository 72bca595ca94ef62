#include "biquant/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

namespace bq {

NumPoly NumPoly::from(const Poly& p) {
    NumPoly r(p.names());
    for (const auto& [m, c] : p.terms()) r.add(m, to_double(c), 0.0);
    return r;
}

void NumPoly::add(const Mono& m, double value, double variance) {
    auto& slot = terms[m];
    slot.first += value;
    slot.second += variance;
}

void NumPoly::add_scaled(const Poly& p, double value, double variance) {
    for (const auto& [m, c] : p.terms()) {
        double x = to_double(c);
        add(m, x * value, x * x * variance);
    }
}

NumPoly& NumPoly::operator+=(const NumPoly& o) {
    for (const auto& [m, v] : o.terms) add(m, v.first, v.second);
    return *this;
}

NumPoly NumPoly::operator-(const NumPoly& o) const {
    NumPoly r = *this;
    for (const auto& [m, v] : o.terms) r.add(m, -v.first, v.second);
    return r;
}

double NumPoly::max_abs() const {
    double best = 0;
    for (const auto& [m, v] : terms) best = std::max(best, std::abs(v.first));
    return best;
}

std::string NumPoly::to_string() const {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [m, v] = *it;
        if (v.first == 0 && v.second == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << v.first << "+-" << std::sqrt(v.second) << ")";
        for (size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] == 0) continue;
            os << "*" << (*names)[i];
            if (m.e[i] > 1) os << "^" << m.e[i];
        }
        if (m.eps > 0) {
            os << "*eps";
            if (m.eps > 1) os << "^" << m.eps;
        }
    }
    return first ? "0" : os.str();
}

namespace {

Poly restrict_h(const Poly& p, int t, const Restriction* restriction) {
    if (!restriction || t == 0) return p;
    Poly r(p.names());
    for (const auto& [m, c] : p.terms()) {
        bool has_h = false;
        for (int i = 0; i < t; ++i)
            if (m.e[static_cast<size_t>(i)] != 0) has_h = true;
        if (!has_h) {
            r.add_term(m, c);
            continue;
        }
        Mono base = m;
        for (int i = 0; i < t; ++i) base.e[static_cast<size_t>(i)] = 0;
        Poly term(p.names());
        term.add_term(base, c);
        for (int i = 0; i < t; ++i)
            if (m.e[static_cast<size_t>(i)] > 0) term = term * (*restriction)[static_cast<size_t>(i)].pow(m.e[static_cast<size_t>(i)]);
        r += term;
    }
    return r;
}

struct Domain {
    int lo, hi;
};

Domain domain_of(const Edge& e, int t, int n) {
    if (e.kind == TargetKind::Inf) return {0, t};
    switch (e.color) {
        case '+': return {t, n};
        case '-': return {0, t};
        default: return {0, n};
    }
}

}  // namespace

std::vector<Poly> apply_graph(const Graph& g, const LieAlgebra& alg, int t, const std::vector<Poly>& functions,
                              const Restriction* restriction) {
    const int n = alg.dim();
    if (static_cast<int>(functions.size()) != g.n2) throw GraphError("apply_graph: one function per ground vertex required");
    Names names = functions.empty() ? coordinate_names(alg) : functions[0].names();
    for (const auto& f : functions)
        if (f.nvars() != n) throw AmbientError("apply_graph: function ring does not match the algebra");
    const bool has_inf = g.has_inf();
    std::vector<Poly> out(has_inf ? static_cast<size_t>(t) : 1, Poly(names));
    if (has_inf && t == 0) return out;
    const size_t m = g.edges.size();
    std::vector<int> labels(m, 0);
    std::vector<Domain> domains;
    for (const auto& e : g.edges) domains.push_back(domain_of(e, t, n));
    for (const auto& d : domains)
        if (d.lo >= d.hi) return out;
    std::vector<std::pair<int, int>> pair_of(static_cast<size_t>(g.n1), {-1, -1});
    for (int v = 0; v < g.n1; ++v) {
        auto idx = g.out_edges(v);
        if (idx.size() != 2) throw GraphError("apply_graph: aerial vertices need out-degree 2");
        pair_of[static_cast<size_t>(v)] = {idx[0], idx[1]};
    }
    std::vector<int> closes(m, -1);
    for (int v = 0; v < g.n1; ++v) {
        auto [a, b] = pair_of[static_cast<size_t>(v)];
        closes[static_cast<size_t>(std::max(a, b))] = v;
    }
    std::vector<std::vector<int>> incoming(static_cast<size_t>(g.n1));
    std::vector<std::vector<int>> ground_in(static_cast<size_t>(g.n2));
    int inf_edge = -1;
    for (size_t k = 0; k < m; ++k) {
        const auto& e = g.edges[k];
        if (e.kind == TargetKind::Aerial) incoming[static_cast<size_t>(e.target)].push_back(static_cast<int>(k));
        if (e.kind == TargetKind::Ground) ground_in[static_cast<size_t>(e.target)].push_back(static_cast<int>(k));
        if (e.kind == TargetKind::Inf) inf_edge = static_cast<int>(k);
    }
    for (const auto& in : incoming)
        if (in.size() > 1) return out;
    std::vector<std::map<std::vector<int>, Poly>> deriv_cache(static_cast<size_t>(g.n2));
    auto derived = [&](int k, std::vector<int> labs) -> const Poly& {
        std::sort(labs.begin(), labs.end());
        auto& cache = deriv_cache[static_cast<size_t>(k)];
        if (auto it = cache.find(labs); it != cache.end()) return it->second;
        Poly d = functions[static_cast<size_t>(k)];
        for (int l : labs) {
            if (d.is_zero()) break;
            d = d.derivative(l);
        }
        return cache.emplace(labs, restrict_h(d, t, restriction)).first->second;
    };
    auto finish = [&]() {
        Poly prod = Poly::constant(names, Rational(1));
        for (int v = 0; v < g.n1; ++v) {
            auto [a, b] = pair_of[static_cast<size_t>(v)];
            int la = labels[static_cast<size_t>(a)], lb = labels[static_cast<size_t>(b)];
            const auto& in = incoming[static_cast<size_t>(v)];
            if (in.empty()) {
                Poly p(names);
                for (const auto& [k, c] : alg.bracket(la, lb)) {
                    if (k < t && restriction)
                        p += (*restriction)[static_cast<size_t>(k)] * c;
                    else
                        p += Poly::var(names, k) * c;
                }
                if (p.is_zero()) return;
                prod = prod * p;
            } else {
                const Rational& c = alg.c(la, lb, labels[static_cast<size_t>(in[0])]);
                if (c == 0) return;
                prod *= c;
            }
        }
        for (int k = 0; k < g.n2; ++k) {
            std::vector<int> labs;
            for (int e : ground_in[static_cast<size_t>(k)]) labs.push_back(labels[static_cast<size_t>(e)]);
            const Poly& d = derived(k, labs);
            if (d.is_zero()) return;
            prod = prod * d;
        }
        int slot = inf_edge >= 0 ? labels[static_cast<size_t>(inf_edge)] : 0;
        out[static_cast<size_t>(slot)] += prod;
    };
    auto rec = [&](auto&& self, size_t k) -> void {
        if (k == m) {
            finish();
            return;
        }
        for (int l = domains[k].lo; l < domains[k].hi; ++l) {
            labels[k] = l;
            int v = closes[k];
            if (v >= 0) {
                auto [a, b] = pair_of[static_cast<size_t>(v)];
                if (alg.bracket(labels[static_cast<size_t>(a)], labels[static_cast<size_t>(b)]).empty()) continue;
            }
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    return out;
}

Poly apply_bidiff(const Graph& g, const LieAlgebra& alg, int t, const Poly& f, const Poly& h, const Restriction* restriction) {
    if (g.n2 != 2) throw GraphError("bidifferential operators need two ground vertices");
    return apply_graph(g, alg, t, {f, h}, restriction)[0];
}

std::vector<Poly> apply_reduction_op(const Graph& g, const SplitData& s, const Poly& f, const Restriction& restriction) {
    if (!g.has_inf()) throw GraphError("reduction operators need an edge to infinity");
    return apply_graph(g, *s.algebra, s.t, {f}, &restriction);
}

Rational graph_multiplicity(const Graph& g) {
    Rational pow2 = 1;
    for (int k = 0; k < g.n1; ++k) pow2 *= 2;
    return 1 / (pow2 * canonicalize(g).automorphisms);
}

namespace {

struct Accumulator {
    Series series;
    std::vector<std::string> missing;
    explicit Accumulator(const Names& names) : series(names) {}

    void add(const Poly& op, const Rational& multiplicity, const WeightValue& w, int eps_power) {
        Poly scaled = op * multiplicity;
        if (eps_power) scaled = scaled.times_eps(eps_power);
        if (w.kind == WeightValue::Kind::Exact) {
            Poly term = scaled * w.exact;
            series.exact += term;
            series.numeric.add_scaled(term, 1.0, 0.0);
        } else {
            series.is_exact = false;
            series.numeric.add_scaled(scaled, w.estimate, w.variance());
        }
    }
};

}  // namespace

Series star_product(const Poly& f, const Poly& g, const SplitData& s, Flavor flavor, int order, WeightProvider& weights) {
    const LieAlgebra& alg = *s.algebra;
    const bool cf = flavor == Flavor::CattaneoFelder;
    Restriction restriction = restriction_for(s, Variant::Plain);
    if (cf) {
        for (const auto* p : {&f, &g})
            for (const auto& [m, c] : p->terms())
                for (int i = 0; i < s.t; ++i)
                    if (m.e[static_cast<size_t>(i)]) throw AmbientError("Cattaneo-Felder inputs must be functions of q");
    }
    Accumulator acc(f.names());
    for (int n = 0; n <= order; ++n) {
        std::vector<Graph> graphs;
        if (n == 0) {
            graphs.push_back(Graph{0, 2, {}});
        } else {
            graphs = enumerate_Q_n2(n, cf);
        }
        for (const auto& gr : graphs) {
            Poly op = cf ? apply_bidiff(gr, alg, s.t, f, g, &restriction) : apply_bidiff(gr, alg, 0, f, g);
            if (op.is_zero()) continue;
            if (!weights.available(gr)) {
                acc.missing.push_back(canonical_form(gr));
                continue;
            }
            acc.add(op, graph_multiplicity(gr), weights.get(gr), n);
        }
    }
    if (!acc.missing.empty()) throw MissingWeight(acc.missing);
    if (acc.series.is_exact) acc.series.numeric = NumPoly::from(acc.series.exact);
    return acc.series;
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Eps: return "eps";
        case Variant::Plain: return "plain";
        case Variant::TFixed: return "t";
        case Variant::TFormal: return "t-formal";
    }
    return "?";
}

Restriction restriction_for(const SplitData& s, Variant v, const Rational& t) {
    Names names = coordinate_names(*s.algebra);
    Restriction r;
    for (int i = 0; i < s.t; ++i) {
        Rational lam = s.lambda[static_cast<size_t>(i)];
        switch (v) {
            case Variant::Eps:
            case Variant::Plain: r.push_back(Poly::constant(names, -lam)); break;
            case Variant::TFixed: r.push_back(Poly::constant(names, -t * lam)); break;
            case Variant::TFormal: r.push_back(Poly::eps_power(names, 1) * (-lam)); break;
        }
    }
    return r;
}

const std::vector<ReductionTerm>& reduction_terms(int order) {
    static std::mutex mutex;
    static std::map<int, std::vector<ReductionTerm>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(order); it != cache.end()) return it->second;
    std::vector<ReductionTerm> out;
    for (int i = 1; i <= order; ++i) {
        auto fam = enumerate_linear_family(i);
        for (const auto* list : {&fam.B, &fam.BW})
            for (const auto& g : *list) out.push_back({g, i, graph_multiplicity(g)});
    }
    return cache.emplace(order, std::move(out)).first->second;
}

std::vector<Series> reduction_differential(const Poly& f, const SplitData& s, int order, WeightProvider& weights,
                                           Variant variant, const Rational& t) {
    Restriction restriction = restriction_for(s, variant, t);
    std::vector<Accumulator> acc(static_cast<size_t>(s.t), Accumulator(f.names()));
    std::vector<std::string> missing;
    for (const auto& term : reduction_terms(order)) {
        auto ops = apply_reduction_op(term.graph, s, f, restriction);
        bool any = std::any_of(ops.begin(), ops.end(), [](const Poly& p) { return !p.is_zero(); });
        if (!any) continue;
        if (!weights.available(term.graph)) {
            missing.push_back(canonical_form(term.graph));
            continue;
        }
        WeightValue w = weights.get(term.graph);
        int power = variant == Variant::Eps ? term.vertices : 0;
        for (int i = 0; i < s.t; ++i)
            if (!ops[static_cast<size_t>(i)].is_zero()) acc[static_cast<size_t>(i)].add(ops[static_cast<size_t>(i)], term.multiplicity, w, power);
    }
    if (!missing.empty()) throw MissingWeight(missing);
    std::vector<Series> out;
    for (auto& a : acc) {
        if (a.series.is_exact) a.series.numeric = NumPoly::from(a.series.exact);
        out.push_back(std::move(a.series));
    }
    return out;
}

std::vector<std::string> operator_degree_violations(const SplitData& s, int order, int D) {
    std::vector<std::string> out;
    Names names = coordinate_names(*s.algebra);
    Restriction zero;
    for (int i = 0; i < s.t; ++i) zero.push_back(Poly(names));
    const int n = s.n();
    std::vector<Mono> monos;
    std::vector<int> e(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n) {
            monos.push_back({e, 0});
            return;
        }
        if (pos < s.t) {
            self(self, pos + 1, remaining);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            e[static_cast<size_t>(pos)] = k;
            self(self, pos + 1, remaining - k);
        }
        e[static_cast<size_t>(pos)] = 0;
    };
    rec(rec, 0, D);
    for (const auto& term : reduction_terms(order))
        for (const auto& mono : monos) {
            Poly f(names);
            f.add_term(mono, Rational(1));
            auto ops = apply_reduction_op(term.graph, s, f, zero);
            const int expected = mono.degree() - term.vertices + 1;
            for (const auto& p : ops)
                for (const auto& [m, c] : p.terms())
                    if (deg_q(m, s.t) != expected) {
                        out.push_back("graph " + to_wire(term.graph) + " on degree " + std::to_string(mono.degree()) +
                                      " gives degree " + std::to_string(deg_q(m, s.t)) + ", expected " + std::to_string(expected));
                        break;
                    }
        }
    return out;
}

CornerInsufficient::CornerInsufficient(std::vector<std::string> missing)
    : std::runtime_error([&] {
          std::string msg = "corner weights unavailable for " + std::to_string(missing.size()) + " graph(s):";
          for (const auto& m : missing) msg += " [" + m + "]";
          return msg;
      }()),
      graphs(std::move(missing)) {}

std::vector<Graph> enumerate_corner_graphs(int n) {
    if (n < 0) throw GraphError("vertex count must be nonnegative");
    if (n > 2) throw ResourceError("corner graphs are supported up to two aerial vertices");
    std::map<std::string, Graph> found;
    Graph g;
    g.n1 = n;
    g.n2 = 2;
    auto options = [&](int v) {
        std::vector<Edge> out;
        for (char c : {'+', '-'}) {
            for (int w = 0; w < n; ++w) out.push_back({v, TargetKind::Aerial, w, c});
            out.push_back({v, TargetKind::Ground, 0, c});
            out.push_back({v, TargetKind::Ground, 1, c});
        }
        return out;
    };
    auto rec = [&](auto&& self, int v) -> void {
        if (v == n) {
            auto c = canonicalize(g);
            found.emplace(c.form, c.graph);
            return;
        }
        auto opts = options(v);
        for (size_t a = 0; a < opts.size(); ++a)
            for (size_t b = 0; b < opts.size(); ++b) {
                if (a == b) continue;
                if (opts[a].kind == opts[b].kind && opts[a].target == opts[b].target && opts[a].color == opts[b].color) continue;
                g.edges.push_back(opts[a]);
                g.edges.push_back(opts[b]);
                self(self, v + 1);
                g.edges.pop_back();
                g.edges.pop_back();
            }
    };
    if (n == 0)
        found.emplace(to_wire(g), g);
    else
        rec(rec, 0);
    std::vector<Graph> out;
    for (const auto& [k, gr] : found) out.push_back(gr);
    return out;
}

std::optional<Rational> corner_weight(const Graph& g, Side side) {
    if (g.n1 == 0 && g.edges.empty()) return Rational(1);
    if (side == Side::Left && g.n1 == 1 && g.edges.size() == 2) {
        const Edge& a = g.edges[0];
        const Edge& b = g.edges[1];
        if (a.is_loop() && b.kind == TargetKind::Ground && b.target == 0) return Rational(-1, 2);
        if (b.is_loop() && a.kind == TargetKind::Ground && a.target == 0) return Rational(1, 2);
    }
    return std::nullopt;
}

namespace {

Poly module_part(Side side, const Poly& a, const Poly& b, const SplitData& s, int n, std::vector<std::string>& missing,
                 std::vector<Graph>* contributors) {
    Restriction restriction = restriction_for(s, Variant::Plain);
    Poly out(a.names());
    for (const auto& g : enumerate_corner_graphs(n)) {
        Poly op = apply_graph(g, *s.algebra, s.t, {a, b}, &restriction)[0];
        if (op.is_zero()) continue;
        if (contributors) contributors->push_back(g);
        auto w = corner_weight(g, side);
        if (!w) {
            missing.push_back(to_wire(g));
            continue;
        }
        out += op * (graph_multiplicity(g) * *w);
    }
    return out;
}

void check_order(int order) {
    if (order < 0 || order > 2) throw ResourceError("module actions are supported up to order 2");
}

}  // namespace

Poly module_action(Side side, const Poly& a, const Poly& b, const SplitData& s, int order) {
    check_order(order);
    std::vector<std::string> missing;
    Poly out(a.names());
    for (int n = 0; n <= order; ++n) out += module_part(side, a, b, s, n, missing, nullptr).times_eps(n);
    if (!missing.empty()) throw CornerInsufficient(missing);
    return out;
}

std::vector<Graph> module_contributors(Side side, const Poly& a, const Poly& b, const SplitData& s, int order) {
    check_order(order);
    std::vector<std::string> missing;
    std::vector<Graph> out;
    for (int n = 1; n <= order; ++n) module_part(side, a, b, s, n, missing, &out);
    return out;
}

Poly T_truncated(TDirection direction, const Poly& f, const SplitData& s, int order) {
    check_order(order);
    Poly one = Poly::constant(f.names(), Rational(1));
    switch (direction) {
        case TDirection::T1: return module_action(Side::Left, f, one, s, order);
        case TDirection::T2: return module_action(Side::Right, one, f, s, order);
        case TDirection::T1Inv: {
            std::vector<std::string> missing;
            auto A = [&](const Poly& x, int n) {
                Poly r = module_part(Side::Left, x, one, s, n, missing, nullptr);
                if (!missing.empty()) throw CornerInsufficient(missing);
                return r;
            };
            Poly out = f;
            if (order >= 1) {
                Poly a1 = A(f, 1);
                out -= a1.times_eps(1);
                if (order >= 2) out += (A(a1, 1) - A(f, 2)).times_eps(2);
            }
            return out;
        }
    }
    return f;
}

Poly lemma41_defect(const SplitData& s, int i, const ModuleOptions& options) {
    Names names = coordinate_names(*s.algebra);
    const size_t k = static_cast<size_t>(i);
    Poly f = Poly::var(names, i) + Poly::constant(names, s.lambda[k]);
    Poly rho = Poly::constant(names, s.rho[k]);
    f += options.scale_rho_by_eps ? rho.times_eps(1) : rho;
    Poly out = module_action(Side::Left, f, Poly::constant(names, Rational(1)), s, 1);
    return options.eps_formal ? out : set_eps(out, Rational(1));
}

}  // namespace bq
