#pragma once

#include "biquant/lie.hpp"
#include "biquant/poly.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing {

inline bq::ParsedAlgebra load(const std::string& name) {
    return bq::load_algebra_file(std::string(BQ_DATA_DIR) + "/" + name + ".alg");
}

inline bq::SplitData split(const std::string& name) { return load(name).split(); }

inline bq::Rational small_rational(std::mt19937& rng, int range = 3) {
    std::uniform_int_distribution<int> num(-range, range), den(1, 3);
    bq::Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

// Random polynomial of total degree <= deg in the coordinates first..last-1.
inline bq::Poly random_poly(std::mt19937& rng, const bq::Names& names, int deg, int first, int last, int terms = 4) {
    bq::Poly p(names);
    std::uniform_int_distribution<int> var(first, last - 1), d(0, deg);
    for (int k = 0; k < terms; ++k) {
        bq::Mono m{std::vector<int>(names->size(), 0), 0};
        int total = d(rng);
        for (int j = 0; j < total; ++j) m.e[static_cast<size_t>(var(rng))] += 1;
        p.add_term(m, small_rational(rng));
    }
    return p;
}

inline std::vector<std::vector<bq::Rational>> random_bivector(std::mt19937& rng, int n) {
    std::vector<std::vector<bq::Rational>> pi(static_cast<size_t>(n),
                                              std::vector<bq::Rational>(static_cast<size_t>(n), bq::Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            pi[static_cast<size_t>(i)][static_cast<size_t>(j)] = small_rational(rng);
            pi[static_cast<size_t>(j)][static_cast<size_t>(i)] = -pi[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    return pi;
}

}  // namespace testing
