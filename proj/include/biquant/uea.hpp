#pragma once

#include "biquant/lie.hpp"
#include "biquant/linalg.hpp"
#include "biquant/poly.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bq {

// Element of U_(eps)(g). Each monomial is the PBW word Q^alpha H^delta (q letters first, then h letters,
// each block in increasing basis index); exponents are stored by basis index.
struct UEAElem {
    Poly p;
    explicit UEAElem(Names names) : p(std::move(names)) {}
    explicit UEAElem(Poly poly) : p(std::move(poly)) {}
    bool is_zero() const { return p.is_zero(); }
    bool operator==(const UEAElem& o) const { return p == o.p; }
    friend UEAElem operator+(const UEAElem& a, const UEAElem& b) { return UEAElem(a.p + b.p); }
    friend UEAElem operator-(const UEAElem& a, const UEAElem& b) { return UEAElem(a.p - b.p); }
    friend UEAElem operator*(const UEAElem& a, const Rational& c) { return UEAElem(a.p * c); }
};

// Generator H_i + (c0_i + c1_i eps) + coupling_i * e_{coupling_index} of the left ideal, for each active i.
struct IdealSpec {
    std::vector<bool> active;
    std::vector<Rational> c0;
    std::vector<Rational> c1;
    int coupling_index = -1;
    std::vector<Rational> coupling;
};

// Ideal generated by H + (lambda+rho)(H); for central extensions the T-coupling from the split is used.
IdealSpec ideal_for(const SplitData& s, bool scale_character_by_eps = false);

class UEA {
public:
    // eps_one = true computes in U(g) (eps set to 1, no eps exponents are produced).
    explicit UEA(SplitData split, bool eps_one = false);

    const SplitData& split() const { return split_; }
    const LieAlgebra& algebra() const { return *split_.algebra; }
    const Names& names() const { return names_; }
    bool eps_one() const { return eps_one_; }
    int rank_of(int letter) const { return rank_[static_cast<size_t>(letter)]; }
    int letter_at(int rank) const { return order_[static_cast<size_t>(rank)]; }

    UEAElem one() const;
    UEAElem letter(int i) const;
    UEAElem from_word(const std::vector<int>& letters) const;
    UEAElem mul(const UEAElem& a, const UEAElem& b) const;
    UEAElem symmetrize(const Poly& p) const;
    UEAElem ideal_reduce(const UEAElem& a, const IdealSpec& ideal) const;
    UEAElem adjoint_action(int i, const UEAElem& a) const;

    // Candidate representatives Q^alpha eps^m (|alpha| <= D, m <= N); when the ideal has a coupling
    // letter T the eps slot is replaced by T^m.
    std::vector<Mono> ansatz(int D, int N, const IdealSpec& ideal) const;
    // Basis of the invariant representatives within the span of ansatz(D, N).
    std::vector<UEAElem> invariants_basis(int D, int N, const IdealSpec& ideal) const;
    // Kernel coordinates of the invariance conditions over the given ansatz.
    std::vector<RatVec> invariant_coordinates(const std::vector<Mono>& ansatz, const IdealSpec& ideal) const;

    std::string to_string(const UEAElem& a) const;

private:
    SplitData split_;
    bool eps_one_;
    Names names_;
    std::vector<int> rank_;
    std::vector<int> order_;
    mutable std::map<std::pair<std::vector<int>, int>, Poly> memo_;

    const Poly& word_times_letter(const std::vector<int>& e, int x) const;
    Poly poly_times_letter(const Poly& a, int x) const;
};

// Truncation to total degree <= D of q(Y) = det(sinh(ad Y / 2) / (ad Y / 2)).
Poly q_function_expansion(const LieAlgebra& g, int D);
// Truncated square root of a series with constant term 1.
Poly series_sqrt(const Poly& f, int D);
// Applies the constant-coefficient operator obtained by x_i -> d/dx_i from q^{1/2}; with scaled = true
// each derivative of order k is weighted by eps^k (the q_(eps) variant).
Poly duflo_partial(const Poly& f, const LieAlgebra& g, bool scaled);

}  // namespace bq
