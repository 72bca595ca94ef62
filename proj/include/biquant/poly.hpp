#pragma once

#include "biquant/lie.hpp"
#include "biquant/rational.hpp"

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace bq {

struct Mono {
    std::vector<int> e;
    int eps = 0;
    auto operator<=>(const Mono&) const = default;
    int degree() const;
};

using Names = std::shared_ptr<const std::vector<std::string>>;

Names make_names(std::vector<std::string> names);
// Lowercase coordinate names for the basis of g.
Names coordinate_names(const LieAlgebra& g);

// Exact polynomial in n commuting coordinates and the formal parameter eps.
class Poly {
public:
    explicit Poly(Names names);
    static Poly constant(Names names, const Rational& c);
    static Poly var(Names names, int i);
    static Poly eps_power(Names names, int k);

    int nvars() const { return static_cast<int>(names_->size()); }
    const Names& names() const { return names_; }
    const std::map<Mono, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool same_ambient(const Poly& other) const;

    void add_term(const Mono& m, const Rational& c);
    Rational coeff(const Mono& m) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    Poly operator-() const;
    friend Poly operator*(const Poly& a, const Poly& b);
    bool operator==(const Poly& o) const { return same_ambient(o) && terms_ == o.terms_; }

    Poly derivative(int i) const;
    Poly times_eps(int k) const;
    Poly pow(int k) const;
    // Highest total coordinate degree (eps excluded); -1 for zero.
    int degree() const;
    int eps_degree() const;

    std::string to_string() const;

private:
    Names names_;
    std::map<Mono, Rational> terms_;
};

struct AmbientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Poly scale(const Poly& p, const Rational& c);

// {x_i, x_j} = sum_k c^k_{ij} x_k extended by Leibniz.
Poly poisson_bracket(const Poly& p, const Poly& q, const LieAlgebra& g);

// x_i -> x_i / t.
Poly scale_map(const Poly& p, const Rational& t);

// deg_q counts exponents of coordinates with index >= t.
int deg_q(const Mono& m, int t);
int deg_q(const Poly& p, int t);

Poly homogenize(const Poly& f, int N, int t);
Poly dehomogenize(const Poly& f);
Poly set_eps(const Poly& f, const Rational& value);
// Replaces coordinate i by the polynomial value.
Poly substitute(const Poly& f, int i, const Poly& value);
// Replaces coordinates 0..count-1 by constants, leaving eps untouched.
Poly restrict_coordinates(const Poly& f, const std::vector<Rational>& values);
Poly keep_eps_at_most(const Poly& f, int order);

// sum_n eps^n / n! pi^{i1 j1}..pi^{in jn} d_{i1..in} f d_{j1..jn} g, truncated at eps^order.
Poly moyal_product(const Poly& f, const Poly& g, const std::vector<std::vector<Rational>>& pi, int order);
Poly moyal_product(const Poly& f, const Poly& g, const std::vector<std::vector<Rational>>& pi);

Poly parse_poly(const std::string& text, const Names& names);

}  // namespace bq
