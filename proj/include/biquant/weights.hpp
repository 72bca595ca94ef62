#pragma once

#include "biquant/graphs.hpp"
#include "biquant/rational.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace bq {

struct WeightValue {
    enum class Kind { Exact, Numeric } kind = Kind::Exact;
    Rational exact;
    double estimate = 0;
    double stderr_ = 0;
    long samples = 0;
    std::uint64_t seed = 0;
    std::string graph;
    std::string provenance;

    double value() const { return kind == Kind::Exact ? to_double(exact) : estimate; }
    double variance() const { return kind == Kind::Exact ? 0.0 : stderr_ * stderr_; }
    bool is_zero() const { return kind == Kind::Exact && exact == 0; }
    std::string to_string() const;
};

enum class AngleVariant { Phi, PhiPlus, PhiMinus };

// Angle functions with the principal branch of arg; throws NumericError for coincident points.
double angle(std::complex<double> z1, std::complex<double> z2, AngleVariant variant);

// Monte Carlo estimate of the normalized configuration-space integral. Samples are split over eight fixed
// streams derived from the seed, so the result does not depend on the number of worker threads.
WeightValue omega_numeric(const Graph& g, long samples, std::uint64_t seed, int workers = 0);

// Curated exact values; empty when the graph is not covered.
std::optional<WeightValue> omega_exact(const Graph& g);

struct ExactEntry {
    Graph graph;
    Rational value;
    std::string provenance;
};
// Every tabulated graph, one per canonical form.
std::vector<ExactEntry> exact_table_entries();

struct MissingWeight : std::runtime_error {
    std::vector<std::string> graphs;
    explicit MissingWeight(std::vector<std::string> missing);
};

class WeightProvider {
public:
    enum class Backend { Exact, Numeric };
    explicit WeightProvider(Backend backend, long samples = 20000, std::uint64_t seed = 1);

    Backend backend() const { return backend_; }
    long samples() const { return samples_; }
    std::uint64_t seed() const { return seed_; }
    // Exact backend: table or MissingWeight. Numeric backend: table when available, otherwise Monte Carlo.
    WeightValue get(const Graph& g);
    bool available(const Graph& g);

private:
    Backend backend_;
    long samples_;
    std::uint64_t seed_;
    std::mutex mutex_;
    std::map<std::string, WeightValue> cache_;
};

std::uint64_t stable_hash(const std::string& s);

}  // namespace bq
