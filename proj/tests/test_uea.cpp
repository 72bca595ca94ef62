#include "biquant/uea.hpp"
#include "support.hpp"

#include <doctest.h>

#include <array>

using namespace bq;

namespace {

using Mat = std::array<Rational, 4>;

Mat mul(const Mat& a, const Mat& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Defining representation of sl2 with basis H, E, F.
Mat rep_letter(int i) {
    switch (i) {
        case 0: return {Rational(1), Rational(0), Rational(0), Rational(-1)};
        case 1: return {Rational(0), Rational(1), Rational(0), Rational(0)};
        default: return {Rational(0), Rational(0), Rational(1), Rational(0)};
    }
}

// Monomials are read in the order E, F, H.
Mat rep(const UEAElem& a) {
    Mat out{Rational(0), Rational(0), Rational(0), Rational(0)};
    for (const auto& [m, c] : a.p.terms()) {
        Mat prod{Rational(1), Rational(0), Rational(0), Rational(1)};
        for (int letter : {1, 2, 0})
            for (int k = 0; k < m.e[static_cast<size_t>(letter)]; ++k) prod = mul(prod, rep_letter(letter));
        for (size_t j = 0; j < 4; ++j) out[j] += c * prod[j];
    }
    return out;
}

}  // namespace

TEST_CASE("PBW products agree with the defining representation of sl2") {
    UEA u(testing::split("sl2"), true);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> letter(0, 2), length(0, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> w1, w2;
        for (int k = length(rng); k > 0; --k) w1.push_back(letter(rng));
        for (int k = length(rng); k > 0; --k) w2.push_back(letter(rng));
        Mat direct{Rational(1), Rational(0), Rational(0), Rational(1)};
        for (int x : w1) direct = mul(direct, rep_letter(x));
        UEAElem a = u.from_word(w1);
        CHECK(rep(a) == direct);
        UEAElem b = u.from_word(w2);
        CHECK(rep(u.mul(a, b)) == mul(rep(a), rep(b)));
    }
}

TEST_CASE("eps-graded commutators") {
    UEA u(testing::split("heisenberg"), false);
    auto X = u.letter(1), Y = u.letter(2), Z = u.letter(0);
    CHECK(u.mul(X, Y) - u.mul(Y, X) == UEAElem(Z.p.times_eps(1)));
    CHECK(u.mul(Y, X) == UEAElem(u.from_word({1, 2}).p - Z.p.times_eps(1)));
    CHECK(u.symmetrize(parse_poly("X*Y", u.names())) == UEAElem(u.from_word({1, 2}).p - Z.p.times_eps(1) * Rational(1, 2)));
    CHECK(u.to_string(u.mul(Y, X)) == u.to_string(UEAElem(u.from_word({1, 2}).p - Z.p.times_eps(1))));
}

TEST_CASE("PBW order puts q letters first") {
    UEA u(testing::split("aff1"), false);
    CHECK(u.rank_of(1) == 0);
    CHECK(u.rank_of(0) == 1);
    auto HX = u.from_word({0, 1});
    CHECK(HX == UEAElem(u.from_word({1, 0}).p + u.letter(1).p.times_eps(1)));
}

TEST_CASE("ideal reduction uses the shifted character") {
    auto s = testing::split("aff1");
    UEA u(s, false);
    IdealSpec ideal = ideal_for(s);
    auto half = Poly::constant(u.names(), Rational(1, 2));
    CHECK(u.ideal_reduce(u.letter(0), ideal) == UEAElem(half));
    CHECK(u.ideal_reduce(u.from_word({1, 0}), ideal) == UEAElem(u.letter(1).p * Rational(1, 2)));
    CHECK(u.ideal_reduce(u.from_word({0, 1}), ideal) ==
          UEAElem(u.letter(1).p * Rational(1, 2) + u.letter(1).p.times_eps(1)));
    auto s1 = testing::split("aff1_lambda1");
    UEA u1(s1, true);
    CHECK(u1.ideal_reduce(u1.letter(0), ideal_for(s1)) == UEAElem(Poly::constant(u1.names(), Rational(-1, 2))));
}

TEST_CASE("invariant counts") {
    auto aff = testing::split("aff1");
    UEA ua(aff, false);
    CHECK(ua.invariants_basis(3, 0, ideal_for(aff)).size() == 1);
    auto sl2 = testing::split("sl2");
    UEA us(sl2, true);
    auto inv = us.invariants_basis(2, 0, ideal_for(sl2));
    CHECK(inv.size() == 2);
    UEA uh(testing::split("heisenberg"), false);
    CHECK(uh.invariants_basis(2, 1, ideal_for(testing::split("heisenberg"))).size() == 12);
}

TEST_CASE("adjoint action") {
    UEA u(testing::split("sl2"), false);
    CHECK(u.adjoint_action(0, u.letter(1)) == UEAElem(u.letter(1).p.times_eps(1) * Rational(2)));
    CHECK(u.adjoint_action(0, u.from_word({1, 2})).is_zero());
}

TEST_CASE("q function, square root and the Duflo operator") {
    auto g = testing::load("aff1").algebra;
    auto n = coordinate_names(*g);
    CHECK(q_function_expansion(*g, 4) == parse_poly("1 + h^2/24 + h^4/1920", n));
    CHECK(series_sqrt(parse_poly("1 + 2*x + x^2", n), 3) == parse_poly("1 + x", n));
    CHECK(duflo_partial(parse_poly("h^2", n), *g, false) == parse_poly("h^2 + 1/24", n));
    CHECK(duflo_partial(parse_poly("h^2", n), *g, true) == parse_poly("h^2 + eps^2/24", n));
    auto heis = testing::load("heisenberg").algebra;
    auto hn = coordinate_names(*heis);
    CHECK(q_function_expansion(*heis, 4) == Poly::constant(hn, Rational(1)));
}
