#include "biquant/calculus.hpp"
#include "biquant/reduction.hpp"
#include "biquant/uea.hpp"
#include "graph_oracle.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace bq;

namespace {

struct Outcome {
    bool ok = true;
    std::string evidence;
    std::vector<std::string> failures;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            failures.push_back(what);
        }
    }
};

std::vector<Poly> generators(const Names& n) {
    std::vector<Poly> out;
    for (size_t i = 0; i < n->size(); ++i) out.push_back(Poly::var(n, static_cast<int>(i)));
    return out;
}

void expect_report(Outcome& out, const Report& r) {
    out.expect(r.passed(), r.summary);
    if (!r.passed())
        for (const auto& line : r.details) out.failures.push_back("  " + line);
}

Outcome algebra_validation() {
    Outcome out;
    for (const char* name : {"sl2", "aff1", "heisenberg"}) {
        auto v = validate(*testing::load(name).algebra);
        out.expect(v.empty(), std::string(name) + " has " + std::to_string(v.size()) + " violations");
    }
    LieAlgebra perturbed = *testing::load("sl2").algebra;
    perturbed.set_bracket(perturbed.index_of("H"), perturbed.index_of("E"), perturbed.index_of("E"), Rational(3));
    auto v = validate(perturbed);
    bool jacobi = false;
    for (const auto& x : v)
        if (x.kind == Violation::Kind::Jacobi) {
            if (!jacobi) out.evidence = "perturbed sl2: " + x.describe(perturbed);
            jacobi = true;
        }
    out.expect(jacobi, "perturbed sl2 reports no Jacobi triple");
    return out;
}

Outcome moyal_associativity() {
    Outcome out;
    std::mt19937 rng(20);
    auto n = make_names({"x", "y", "z", "w"});
    Poly one = Poly::constant(n, Rational(1));
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto pi = testing::random_bivector(rng, 4);
        Poly f = testing::random_poly(rng, n, 3, 0, 4, 3);
        Poly g = testing::random_poly(rng, n, 3, 0, 4, 3);
        Poly h = testing::random_poly(rng, n, 3, 0, 4, 3);
        bool ok = moyal_product(moyal_product(f, g, pi), h, pi) == moyal_product(f, moyal_product(g, h, pi), pi) &&
                  moyal_product(one, f, pi) == f && moyal_product(f, one, pi) == f;
        if (!ok) ++bad;
    }
    out.expect(bad == 0, std::to_string(bad) + " failing triples");
    out.evidence = "100 triples, 4 variables";
    return out;
}

Outcome poisson_laws() {
    Outcome out;
    std::mt19937 rng(21);
    const std::vector<Rational> ts{Rational(2), Rational(-1, 3), Rational(5, 7)};
    for (const char* name : {"sl2", "aff1", "heisenberg"}) {
        auto g = testing::load(name).algebra;
        auto n = coordinate_names(*g);
        const int d = g->dim();
        std::map<std::string, int> bad;
        for (int trial = 0; trial < 100; ++trial) {
            Poly p = testing::random_poly(rng, n, 3, 0, d);
            Poly q = testing::random_poly(rng, n, 3, 0, d);
            Poly r = testing::random_poly(rng, n, 2, 0, d);
            if (poisson_bracket(p, q, *g) != -poisson_bracket(q, p, *g)) ++bad["antisymmetry"];
            if (poisson_bracket(p, q * r, *g) != poisson_bracket(p, q, *g) * r + q * poisson_bracket(p, r, *g))
                ++bad["leibniz"];
            Poly jac = poisson_bracket(p, poisson_bracket(q, r, *g), *g) + poisson_bracket(q, poisson_bracket(r, p, *g), *g) +
                       poisson_bracket(r, poisson_bracket(p, q, *g), *g);
            if (!jac.is_zero()) ++bad["jacobi"];
            for (const auto& t : ts)
                if (scale_map(poisson_bracket(p, q, *g), t) != poisson_bracket(scale_map(p, t), scale_map(q, t), *g) * t)
                    ++bad["scaling"];
        }
        for (const auto& [law, count] : bad) out.expect(false, std::string(name) + " " + law + ": " + std::to_string(count));
    }
    out.evidence = "3 algebras, t in {2, -1/3, 5/7}";
    return out;
}

Outcome weight_cross_check() {
    Outcome out;
    double worst = 0, worst_stderr = 0;
    auto entries = exact_table_entries();
    for (size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        auto w = omega_numeric(e.graph, 1000000, 1000 + k);
        const double z = w.stderr_ > 0 ? std::abs(w.estimate - to_double(e.value)) / w.stderr_ : 0.0;
        worst = std::max(worst, z);
        worst_stderr = std::max(worst_stderr, w.stderr_);
        out.expect(w.stderr_ <= 0.01, to_wire(e.graph) + " stderr " + std::to_string(w.stderr_));
        out.expect(std::abs(w.estimate - to_double(e.value)) <= 3 * w.stderr_ + 1e-12,
                   to_wire(e.graph) + " estimate " + std::to_string(w.estimate) + " vs " + e.value.get_str());
    }
    auto loop = omega_exact(small_loop());
    out.expect(loop && loop->exact == Rational(1, 2), "small loop is not 1/2 in the table");
    auto loop_mc = omega_numeric(small_loop(), 1000000, 77);
    out.expect(std::abs(loop_mc.estimate - 0.5) <= 3 * loop_mc.stderr_, "small loop estimate " + std::to_string(loop_mc.estimate));
    std::ostringstream os;
    os << entries.size() << " entries, max |z| " << worst << ", max stderr " << worst_stderr << ", small loop "
       << loop_mc.estimate;
    out.evidence = os.str();
    return out;
}

Outcome star_anchor_and_transfer() {
    Outcome out;
    WeightProvider w(WeightProvider::Backend::Exact);
    for (const char* name : {"sl2", "aff1", "heisenberg"}) {
        auto s = testing::split(name);
        auto n = coordinate_names(*s.algebra);
        for (const auto& f : generators(n))
            for (const auto& g : generators(n)) {
                Poly fg = star_product(f, g, s, Flavor::Kontsevich, 2, w).exact;
                Poly gf = star_product(g, f, s, Flavor::Kontsevich, 2, w).exact;
                out.expect(keep_eps_at_most(fg - gf, 1) == poisson_bracket(f, g, *s.algebra).times_eps(1),
                           std::string(name) + " anchor fails on " + f.to_string() + ", " + g.to_string());
            }
    }
    int pairs = 0;
    for (const char* name : {"aff1", "heisenberg"}) {
        auto s = testing::split(name);
        UEA u(s, false);
        auto n = coordinate_names(*s.algebra);
        auto beta = [&](const Poly& p) {
            Poly result(u.names());
            std::map<int, Poly> parts;
            for (const auto& [m, c] : p.terms()) {
                Mono d = m;
                d.eps = 0;
                parts.try_emplace(m.eps, u.names()).first->second.add_term(d, c);
            }
            for (const auto& [k, q] : parts) result += u.symmetrize(q).p.times_eps(k);
            return UEAElem(result);
        };
        auto dq = [&](const Poly& p) { return duflo_partial(p, *s.algebra, true); };
        std::vector<Poly> inputs{Poly::constant(n, Rational(1))};
        for (int i = 0; i < s.n(); ++i) {
            inputs.push_back(Poly::var(n, i));
            for (int j = i; j < s.n(); ++j) inputs.push_back(Poly::var(n, i) * Poly::var(n, j));
        }
        for (const auto& f : inputs)
            for (const auto& g : inputs) {
                Poly fg = star_product(f, g, s, Flavor::Kontsevich, 2, w).exact;
                auto lhs = beta(dq(fg));
                auto rhs = u.mul(beta(dq(f)), beta(dq(g)));
                out.expect(keep_eps_at_most(lhs.p - rhs.p, 2).is_zero(),
                           std::string(name) + " transfer fails on " + f.to_string() + ", " + g.to_string());
                ++pairs;
            }
    }
    out.evidence = "anchor on all generator pairs, transfer on " + std::to_string(pairs) + " pairs, exact";
    return out;
}

Outcome lemma_corner() {
    Outcome out;
    for (const char* name : {"aff1", "aff1_lambda1", "sl2_borel"}) expect_report(out, verify_lemma_4_1(testing::split(name), name));
    out.evidence = "aff1 lambda in {0,1}, sl2 Borel";
    return out;
}

Outcome homogenization_and_specialization() {
    Outcome out;
    WeightProvider w(WeightProvider::Backend::Exact);
    for (const char* name : {"abelian", "aff1", "heisenberg"}) {
        expect_report(out, verify_homogenization(testing::split(name), 3, w, name));
        expect_report(out, verify_specialization(testing::split(name), 3, 2, w, name));
    }
    expect_report(out, verify_specialization(testing::split("aff1_lambda1"), 3, 2, w, "aff1_lambda1"));
    out.evidence = "abelian, aff1, heisenberg; affine reconstruction on aff1 lambda=1";
    return out;
}

Outcome dimension_equality() {
    Outcome out;
    WeightProvider exact(WeightProvider::Backend::Exact);
    WeightProvider numeric(WeightProvider::Backend::Numeric, 20000, 1);
    std::vector<std::string> sides;
    for (const char* name : {"abelian", "aff1", "aff1_lambda1", "heisenberg", "heisenberg_lambda1", "sl2"}) {
        auto s = testing::split(name);
        Report r;
        try {
            r = verify_theorem_5_1(s, 3, 2, exact, name);
        } catch (const MissingWeight&) {
            r = verify_theorem_5_1(s, 3, 2, numeric, name);
            for (const auto& line : r.details)
                if (line.rfind("numeric rank decisions", 0) == 0)
                    sides.push_back(std::string(name) + " numeric gap=" + line.substr(line.rfind(' ') + 1));
        }
        expect_report(out, r);
        out.expect(r.summary.find("verdict=MATCH") != std::string::npos, r.summary);
        auto at = r.summary.find("side_red=");
        sides.push_back(std::string(name) + " " + r.summary.substr(at, r.summary.find(' ', at) - at));
    }
    for (size_t k = 0; k < sides.size(); ++k) out.evidence += (k ? "; " : "") + sides[k];
    return out;
}

Outcome t_eps_bookkeeping() {
    Outcome out;
    WeightProvider w(WeightProvider::Backend::Exact);
    for (const char* name : {"abelian", "aff1", "aff1_lambda1", "heisenberg", "heisenberg_lambda1"})
        expect_report(out, verify_theorem_6_1(testing::split(name), 3, 2, w, name));
    out.evidence = "5 splits, t in {1, 2, -1/3}";
    return out;
}

Outcome central_extension() {
    Outcome out;
    WeightProvider w(WeightProvider::Backend::Exact);
    for (const char* name : {"abelian", "aff1", "aff1_lambda1"}) {
        auto r = verify_theorem_6_8(testing::split(name), 3, 2, w, name);
        expect_report(out, r);
        auto at = r.summary.find("side_ext=");
        out.evidence += (out.evidence.empty() ? "" : "; ") + std::string(name) + " " +
                        r.summary.substr(at, r.summary.find(' ', at) - at);
    }
    return out;
}

Outcome enumeration_oracle() {
    Outcome out;
    for (int n = 1; n <= 3; ++n)
        for (bool colored : {false, true})
            out.expect(oracle::keys_of(enumerate_Q_n2(n, colored)) == oracle::q_classes(n, colored),
                       "Q_n2 mismatch at n=" + std::to_string(n) + (colored ? " colored" : ""));
    int operators = 0;
    for (int i = 1; i <= 3; ++i) {
        auto fam = enumerate_reduction_family(i);
        auto ref = oracle::family_classes(i);
        out.expect(oracle::keys_of(fam.B) == ref.B && oracle::keys_of(fam.W) == ref.W && oracle::keys_of(fam.BW) == ref.BW,
                   "reduction family mismatch at i=" + std::to_string(i));
        for (const char* name : {"abelian", "aff1", "heisenberg", "sl2", "sl2_borel"}) {
            auto s = testing::split(name);
            auto n = coordinate_names(*s.algebra);
            Restriction zero(static_cast<size_t>(s.t), Poly(n));
            std::vector<Poly> monos;
            for (int d = 0; d <= 3; ++d) {
                std::vector<int> e(static_cast<size_t>(s.n()), 0);
                std::function<void(int, int)> rec = [&](int pos, int left) {
                    if (pos == s.n()) {
                        if (left == 0) {
                            Poly f(n);
                            f.add_term({e, 0}, Rational(1));
                            monos.push_back(f);
                        }
                        return;
                    }
                    for (int k = 0; k <= (pos < s.t ? 0 : left); ++k) {
                        e[static_cast<size_t>(pos)] = k;
                        rec(pos + 1, left - k);
                    }
                    e[static_cast<size_t>(pos)] = 0;
                };
                rec(0, d);
            }
            for (const auto* graphs : {&fam.B, &fam.BW})
                for (const auto& g : *graphs)
                    for (const auto& f : monos) {
                        ++operators;
                        const int expected = f.degree() - i + 1;
                        for (const auto& p : apply_reduction_op(g, s, f, zero))
                            for (const auto& [m, c] : p.terms())
                                out.expect(deg_q(m, s.t) == expected,
                                           std::string(name) + " " + to_wire(g) + " on " + f.to_string() + " has degree " +
                                               std::to_string(deg_q(m, s.t)));
                    }
        }
    }
    out.evidence = "n <= 3, i <= 3, " + std::to_string(operators) + " operator applications";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"algebra validation", algebra_validation},
        {"Moyal associativity and unit", moyal_associativity},
        {"Poisson and scaling laws", poisson_laws},
        {"weight backend cross-check", weight_cross_check},
        {"star-product anchor and Kontsevich transfer", star_anchor_and_transfer},
        {"corner annihilation by H + (lambda+rho)(H)", lemma_corner},
        {"homogenization roundtrip and affine reconstruction", homogenization_and_specialization},
        {"reduction algebra versus invariants dimension equality", dimension_equality},
        {"t and eps bookkeeping", t_eps_bookkeeping},
        {"central extension dual pipeline", central_extension},
        {"graph enumeration oracle and q-degree shift", enumeration_oracle},
    };
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[k].second();
        } catch (const std::exception& e) {
            out.ok = false;
            out.failures.push_back(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream time;
        time.precision(2);
        time << std::fixed << seconds;
        std::cout << "criterion " << (k + 1) << " " << (out.ok ? "PASS" : "FAIL") << " " << criteria[k].first << " ("
                  << out.evidence << "; " << time.str() << " s)" << std::endl;
        if (!out.ok) {
            ++failed;
            for (size_t f = 0; f < out.failures.size() && f < 20; ++f) std::cerr << "  " << out.failures[f] << "\n";
        }
    }
    return failed == 0 ? 0 : 1;
}
