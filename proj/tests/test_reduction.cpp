#include "biquant/reduction.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace bq;

namespace {

WeightProvider exact() { return WeightProvider(WeightProvider::Backend::Exact); }

}  // namespace

TEST_CASE("aff1 kernel is spanned by constants") {
    auto w = exact();
    auto s = testing::split("aff1");
    auto b = solve_reduction(s, {3, 0, -1, Variant::Plain, 1}, w);
    REQUIRE(b.elements.size() == 1);
    CHECK(b.elements[0] == Poly::constant(b.elements[0].names(), Rational(1)));
    CHECK(b.filtration == std::vector<int>{1, 0, 0, 0});
    auto e = solve_reduction(s, {3, 2, -1, Variant::Eps, 1}, w);
    CHECK(e.dimension == 3);
    CHECK(e.filtration == std::vector<int>{1, 0, 0, 0});
    CHECK(e.backend == "exact");
}

TEST_CASE("abelian kernel is the full ansatz") {
    auto w = exact();
    auto s = testing::split("abelian");
    auto b = solve_reduction(s, {2, 1, -1, Variant::Eps, 1}, w);
    CHECK(b.dimension == static_cast<int>(b.ansatz.size()));
    CHECK(b.filtration == std::vector<int>{1, 2, 3});
}

TEST_CASE("truncation below D+1 is refused") {
    auto w = exact();
    CHECK_THROWS_AS(solve_reduction(testing::split("aff1"), {3, 2, 3, Variant::Eps, 1}, w), OrderTooSmall);
}

TEST_CASE("t-parametric solve at t=1 equals the plain affine solve") {
    auto w = exact();
    for (const char* name : {"aff1_lambda1", "heisenberg_lambda1"}) {
        auto s = testing::split(name);
        auto a = solve_reduction(s, {3, 0, -1, Variant::TFixed, 1}, w);
        auto b = solve_reduction(s, {3, 0, -1, Variant::Plain, 1}, w);
        CHECK(a.elements == b.elements);
    }
}

TEST_CASE("kernel elements survive an independent re-assembly of the differential") {
    auto w = exact();
    auto s = testing::split("aff1_lambda1");
    auto b = solve_reduction(s, {2, 2, -1, Variant::Eps, 1}, w);
    Restriction r = restriction_for(s, Variant::Eps);
    for (const auto& f : b.elements) {
        Poly total(f.names());
        for (int i = 1; i <= 3; ++i) {
            auto fam = enumerate_reduction_family(i);
            for (const auto* list : {&fam.B, &fam.BW})
                for (const auto& g : *list) {
                    Poly op = apply_reduction_op(g, s, f, r)[0];
                    if (op.is_zero()) continue;
                    auto weight = omega_exact(g);
                    REQUIRE(weight.has_value());
                    total += op.times_eps(i) * (weight->exact * graph_multiplicity(g));
                }
        }
        CHECK(total.is_zero());
    }
}

TEST_CASE("graded solutions project to solutions") {
    auto w = exact();
    auto s = testing::split("aff1");
    auto b = solve_reduction(s, {2, 2, -1, Variant::Eps, 1}, w);
    for (const auto& f : b.elements) {
        std::map<int, Poly> parts;
        for (const auto& [m, c] : f.terms()) parts.try_emplace(deg_q(m, s.t) + m.eps, f.names()).first->second.add_term(m, c);
        for (const auto& [d, p] : parts) CHECK(in_kernel(p, s, Variant::Eps, w));
    }
}

TEST_CASE("homogenization, specialization and the negative control") {
    auto w = exact();
    for (const char* name : {"abelian", "aff1", "heisenberg"}) {
        CAPTURE(name);
        auto r = verify_homogenization(testing::split(name), 3, w, name);
        CHECK(r.passed());
        auto q = verify_specialization(testing::split(name), 3, 3, w, name);
        CHECK(q.passed());
    }
    auto aff = verify_homogenization(testing::split("aff1"), 3, w, "aff1");
    bool control = false;
    for (const auto& line : aff.details)
        if (line.find("negative control") != std::string::npos && line.rfind("ok", 0) == 0) control = true;
    CHECK(control);
    CHECK_THROWS_AS(verify_homogenization(testing::split("aff1_lambda1"), 3, w), std::invalid_argument);
    auto affine = verify_specialization(testing::split("aff1_lambda1"), 3, 2, w, "aff1_lambda1");
    CHECK(affine.passed());
}

TEST_CASE("dimension comparison with the enveloping algebra") {
    auto w = exact();
    for (const char* name : {"abelian", "aff1", "aff1_lambda1", "heisenberg", "heisenberg_lambda1"}) {
        CAPTURE(name);
        auto r = verify_theorem_5_1(testing::split(name), 3, 2, w, name);
        CHECK(r.passed());
        CHECK(r.summary.find("verdict=MATCH") != std::string::npos);
    }
    auto r = verify_theorem_5_1(testing::split("aff1_lambda1"), 3, 2, w, "aff1");
    CHECK(r.summary == "theorem=5.1 algebra=aff1 lambda=1 D=3 N=2 side_red=[1,0,0,0] side_inv=[1,0,0,0] verdict=MATCH backend=exact");
    for (const char* name : {"aff1_lambda1", "heisenberg_lambda1"}) {
        CAPTURE(name);
        auto scaled = verify_theorem_5_1(testing::split(name), 3, 2, w, name, true);
        CHECK(scaled.passed());
        CHECK(invariant_dims(testing::split(name), 3, 2, true).filtration == invariant_dims(testing::split(name), 3, 2).filtration);
    }
}

TEST_CASE("t and eps families convert into each other") {
    auto w = exact();
    auto s = testing::split("aff1_lambda1");
    auto n = coordinate_names(*s.algebra);
    Poly one = Poly::constant(n, Rational(1));
    Poly fe = t_family_to_eps({{0, one}}, s, w);
    CHECK(fe == one.times_eps(1));
    auto back = eps_to_t_family(fe, s, w);
    REQUIRE(back.size() == 1);
    CHECK(back[0].first == 1);
    CHECK_THROWS_AS(t_family_to_eps({{0, Poly::var(n, 1)}}, s, w), std::invalid_argument);
    for (const char* name : {"abelian", "aff1_lambda1", "heisenberg_lambda1"}) {
        CAPTURE(name);
        CHECK(verify_theorem_6_1(testing::split(name), 2, 2, w, name).passed());
    }
}

TEST_CASE("central extension pipeline") {
    auto w = exact();
    for (const char* name : {"abelian", "aff1", "aff1_lambda1"}) {
        CAPTURE(name);
        CHECK(verify_theorem_6_8(testing::split(name), 3, 2, w, name).passed());
    }
    CHECK(central_extension_dims(testing::split("aff1"), 3, 2) == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("truncated centers") {
    auto c = center_dims(testing::split("aff1"), 3);
    CHECK(c.poisson == std::vector<int>{1, 0, 0, 0});
    CHECK(c.associative == std::vector<int>{1, 0, 0, 0});
    auto a = center_dims(testing::split("abelian"), 2);
    CHECK(a.poisson == std::vector<int>{1, 2, 3});
    CHECK(a.associative == std::vector<int>{1, 2, 3});
}

TEST_CASE("report exit codes") {
    Report r;
    CHECK(r.exit_code() == 0);
    r.check(false, "x");
    CHECK(r.exit_code() == 1);
    Report q;
    q.insufficient("y");
    CHECK(q.exit_code() == 2);
    CHECK(format_dims({1, 0, 2}) == "[1,0,2]");
}
