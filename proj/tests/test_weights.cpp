#include "biquant/weights.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bq;

namespace {

Rational exact_value(const std::string& wire) {
    auto w = omega_exact(parse_wire(wire));
    REQUIRE(w.has_value());
    return w->exact;
}

}  // namespace

TEST_CASE("angle functions") {
    const double pi = std::numbers::pi;
    std::complex<double> i(0, 1);
    CHECK(angle(i, 0.0, AngleVariant::PhiPlus) == doctest::Approx(pi));
    CHECK(angle(i, 0.0, AngleVariant::PhiMinus) == doctest::Approx(0.0));
    CHECK(angle(i, 0.0, AngleVariant::Phi) == doctest::Approx(0.5));
    CHECK(angle(1.0 + i, 0.0, AngleVariant::PhiPlus) == doctest::Approx(pi / 2));
    CHECK_THROWS_AS(angle(i, i, AngleVariant::Phi), NumericError);
}

TEST_CASE("hand-derived weights in the exact table") {
    CHECK(exact_value("n1=1 n2=2 edges=(1,F1,.)(1,F2,.)") == Rational(1, 2));
    CHECK(exact_value("n1=1 n2=2 edges=(1,F2,.)(1,F1,.)") == Rational(-1, 2));
    CHECK(exact_value("n1=2 n2=2 edges=(1,F1,.)(1,F2,.)(2,F1,.)(2,F2,.)") == Rational(1, 4));
    CHECK(exact_value("n1=1 n2=1 edges=(1,F1,+)(1,inf,-)") == 1);
    CHECK(exact_value("n1=1 n2=1 edges=(1,F1,-)(1,1,.)") == Rational(1, 2));
    CHECK(exact_value("n1=1 n2=1 edges=(1,1,.)(1,F1,-)") == Rational(-1, 2));
    CHECK(exact_value("n1=1 n2=2 edges=(1,F1,+)(1,F2,+)") == Rational(1, 2));
}

TEST_CASE("structural zero rules") {
    CHECK(exact_value("n1=0 n2=2 edges=") == 1);
    CHECK(exact_value("n1=2 n2=1 edges=(1,F1,+)(1,2,+)(2,F1,+)(2,1,+)") == 0);
    CHECK(exact_value("n1=1 n2=2 edges=(1,F1,-)(1,F2,+)") == 0);
    CHECK(exact_value("n1=2 n2=2 edges=(1,F1,.)(1,2,.)(2,F1,.)(2,1,.)") == 0);
    CHECK(!omega_exact(parse_wire("n1=2 n2=1 edges=(1,F1,+)(1,inf,-)(2,F1,+)(2,1,+)")).has_value());
}

TEST_CASE("Monte Carlo estimates agree with every exact table entry") {
    for (const auto& e : exact_table_entries()) {
        CAPTURE(to_wire(e.graph));
        auto w = omega_numeric(e.graph, 40000, 17);
        CHECK(w.stderr_ < 0.02);
        CHECK(std::abs(w.estimate - to_double(e.value)) <= 4 * w.stderr_ + 1e-12);
    }
}

TEST_CASE("Monte Carlo runs are reproducible and independent of the worker count") {
    Graph g = parse_wire("n1=2 n2=2 edges=(1,F1,.)(1,2,.)(2,F2,.)(2,F1,.)");
    auto a = omega_numeric(g, 20000, 99, 1);
    auto b = omega_numeric(g, 20000, 99, 4);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.to_string() == b.to_string());
    auto c = omega_numeric(g, 20000, 100, 1);
    CHECK(c.estimate != a.estimate);
    auto big = omega_numeric(g, 160000, 99, 1);
    CHECK(big.stderr_ < a.stderr_);
}

TEST_CASE("weight records") {
    auto w = omega_exact(parse_wire("n1=1 n2=2 edges=(1,F1,.)(1,F2,.)"));
    REQUIRE(w);
    CHECK(w->to_string().find("kind=exact value=1/2") != std::string::npos);
    auto n = omega_numeric(parse_wire("n1=1 n2=2 edges=(1,F1,.)(1,F2,.)"), 1000, 7);
    CHECK(n.to_string().find("kind=numeric est=") != std::string::npos);
    CHECK(n.to_string().find("seed=7") != std::string::npos);
}

TEST_CASE("weight provider backends") {
    Graph untabulated = parse_wire("n1=2 n2=1 edges=(1,F1,+)(1,inf,-)(2,F1,+)(2,1,+)");
    WeightProvider exact(WeightProvider::Backend::Exact);
    CHECK(!exact.available(untabulated));
    CHECK_THROWS_AS(exact.get(untabulated), MissingWeight);
    WeightProvider numeric(WeightProvider::Backend::Numeric, 5000, 3);
    CHECK(numeric.available(untabulated));
    auto w = numeric.get(untabulated);
    CHECK(w.kind == WeightValue::Kind::Numeric);
    CHECK(numeric.get(untabulated).estimate == w.estimate);
    CHECK(numeric.get(parse_wire("n1=1 n2=1 edges=(1,F1,+)(1,inf,-)")).kind == WeightValue::Kind::Exact);
}
