#include "biquant/weights.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace bq {

std::string WeightValue::to_string() const {
    std::ostringstream os;
    os << "graph=" << graph;
    if (kind == Kind::Exact) {
        os << " kind=exact value=" << bq::to_string(exact) << " provenance=" << provenance;
    } else {
        os << std::setprecision(6) << " kind=numeric est=" << estimate << " stderr=" << stderr_
           << " samples=" << samples << " seed=" << seed;
    }
    return os.str();
}

double angle(std::complex<double> z1, std::complex<double> z2, AngleVariant variant) {
    if (z1 == z2) throw NumericError("angle of coincident points");
    switch (variant) {
        case AngleVariant::Phi: {
            auto den = std::conj(z1) - z2;
            if (std::abs(den) == 0) throw NumericError("angle undefined for this configuration");
            return std::arg((z1 - z2) / den) / (2 * std::numbers::pi);
        }
        case AngleVariant::PhiPlus: return std::arg(z1 - z2) + std::arg(z1 - std::conj(z2));
        case AngleVariant::PhiMinus: return std::arg(z1 - z2) - std::arg(z1 - std::conj(z2));
    }
    return 0;
}

std::uint64_t stable_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

MissingWeight::MissingWeight(std::vector<std::string> missing)
    : std::runtime_error([&] {
          std::string msg = "no exact weight for " + std::to_string(missing.size()) + " graph(s):";
          for (const auto& m : missing) msg += " [" + m + "]";
          return msg;
      }()),
      graphs(std::move(missing)) {}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kChunks = 8;
constexpr double kShape = 1.0;

int vertex_sign(const Graph& g) {
    int sign = 1;
    for (int v = 0; v < g.n1; ++v) {
        auto idx = g.out_edges(v);
        if (idx.size() == 2 && !g.edges[static_cast<size_t>(idx[0])].carries_form() &&
            g.edges[static_cast<size_t>(idx[1])].carries_form())
            sign = -sign;
    }
    return sign;
}

double determinant(std::vector<double> a, int n) {
    double det = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[static_cast<size_t>(r * n + c)]) > std::abs(a[static_cast<size_t>(p * n + c)])) p = r;
        double pivot = a[static_cast<size_t>(p * n + c)];
        if (pivot == 0) return 0;
        if (p != c) {
            for (int k = 0; k < n; ++k) std::swap(a[static_cast<size_t>(p * n + k)], a[static_cast<size_t>(c * n + k)]);
            det = -det;
        }
        det *= pivot;
        for (int r = c + 1; r < n; ++r) {
            double f = a[static_cast<size_t>(r * n + c)] / pivot;
            if (f == 0) continue;
            for (int k = c; k < n; ++k) a[static_cast<size_t>(r * n + k)] -= f * a[static_cast<size_t>(c * n + k)];
        }
    }
    return det;
}

struct Integrator {
    const Graph& g;
    int dim;
    bool theta_gauge;
    bool loop_rule;
    std::vector<double> grounds;
    double sign;

    explicit Integrator(const Graph& graph) : g(graph) {
        dim = g.dimension();
        theta_gauge = g.n2 == 1;
        loop_rule = g.has_loop();
        if (loop_rule && (g.n1 != 1 || g.n2 != 1))
            throw GraphError("numeric weights for loops are only defined for the one-vertex small loop");
        if (g.n2 == 2)
            grounds = {0.0, 1.0};
        else if (g.n2 == 1)
            grounds = {0.0};
        else
            throw GraphError("numeric weights need one or two ground vertices");
        sign = vertex_sign(g) / std::pow(2 * kPi, dim);
    }

    // Returns the coordinate index of x (and x+1 of y) for aerial vertex k, or -1 for the gauge vertex.
    int column(int k) const {
        if (!theta_gauge) return 2 * k;
        return k == 0 ? -1 : 2 * k - 1;
    }

    void add_gradient(std::vector<double>& row, int k, double dx, double dy, double theta) const {
        int col = column(k);
        if (col < 0)
            row[0] += -std::sin(theta) * dx + std::cos(theta) * dy;
        else {
            row[static_cast<size_t>(col)] += dx;
            row[static_cast<size_t>(col + 1)] += dy;
        }
    }

    double integrand(const std::vector<std::complex<double>>& z, double theta) const {
        std::vector<double> jac(static_cast<size_t>(dim * dim), 0.0);
        int r = 0;
        for (const auto& e : g.edges) {
            if (!e.carries_form()) continue;
            std::vector<double> row(static_cast<size_t>(dim), 0.0);
            const auto zs = z[static_cast<size_t>(e.src)];
            double c = e.color == '-' ? -1.0 : 1.0;
            auto darg = [](std::complex<double> u, double& gx, double& gy) {
                double n = std::norm(u);
                gx = -u.imag() / n;
                gy = u.real() / n;
            };
            double gx, gy;
            if (loop_rule) {
                darg(zs, gx, gy);
                add_gradient(row, e.src, gx, gy, theta);
            } else if (e.kind == TargetKind::Ground) {
                darg(zs - grounds[static_cast<size_t>(e.target)], gx, gy);
                add_gradient(row, e.src, (1 + c) * gx, (1 + c) * gy, theta);
            } else {
                const auto w = z[static_cast<size_t>(e.target)];
                darg(zs - w, gx, gy);
                add_gradient(row, e.src, gx, gy, theta);
                add_gradient(row, e.target, -gx, -gy, theta);
                darg(zs - std::conj(w), gx, gy);
                add_gradient(row, e.src, c * gx, c * gy, theta);
                add_gradient(row, e.target, -c * gx, c * gy, theta);
            }
            std::copy(row.begin(), row.end(), jac.begin() + r * dim);
            ++r;
        }
        return determinant(std::move(jac), dim) * sign;
    }
};

double logistic_radius_pdf(double r, double median) {
    double t = std::log(r / median) / kShape;
    double s = 1 / (1 + std::exp(-t));
    return s * (1 - s) / (kShape * r);
}

struct Center {
    std::complex<double> at;
    bool real;
    double median;
};

std::vector<Center> centers_for(const std::vector<double>& grounds, const std::vector<std::complex<double>>& z, int k) {
    std::vector<Center> out;
    for (double p : grounds) out.push_back({{p, 0.0}, true, 1.0});
    for (int j = 0; j < k; ++j) out.push_back({z[static_cast<size_t>(j)], false, z[static_cast<size_t>(j)].imag()});
    return out;
}

double point_density(const std::vector<Center>& cs, std::complex<double> z) {
    double total = 0;
    for (const auto& c : cs) {
        double r = std::abs(z - c.at);
        if (r == 0) return std::numeric_limits<double>::infinity();
        if (c.real) {
            if (z.imag() <= 0) continue;
            total += logistic_radius_pdf(r, c.median) / (r * kPi);
        } else {
            total += logistic_radius_pdf(r, c.median) / (r * 2 * kPi);
        }
    }
    return total / static_cast<double>(cs.size());
}

double theta_density(double theta) { return 0.5 / kPi + 0.25 * std::sin(theta); }

struct ChunkResult {
    double sum = 0;
    double sum_sq = 0;
};

ChunkResult run_chunk(const Integrator& in, long count, std::uint64_t seed, int chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ChunkResult out;
    const int n1 = in.g.n1;
    std::vector<std::complex<double>> z(static_cast<size_t>(n1));
    for (long s = 0; s < count; ++s) {
        double density = 1;
        double theta = 0;
        bool inside = true;
        for (int k = 0; k < n1; ++k) {
            if (k == 0 && in.theta_gauge) {
                if (unit(rng) < 0.5)
                    theta = kPi * unit(rng);
                else
                    theta = std::acos(1 - 2 * unit(rng));
                theta = std::clamp(theta, 1e-300, kPi - 1e-15);
                z[0] = {std::cos(theta), std::sin(theta)};
                density *= theta_density(theta);
                continue;
            }
            auto cs = centers_for(in.grounds, z, k);
            const auto& c = cs[static_cast<size_t>(std::min<double>(unit(rng) * static_cast<double>(cs.size()), cs.size() - 1))];
            double u = std::clamp(unit(rng), 1e-300, 1 - 1e-16);
            double r = c.median * std::exp(kShape * std::log(u / (1 - u)));
            double alpha = (c.real ? kPi : 2 * kPi) * unit(rng);
            z[static_cast<size_t>(k)] = c.at + std::polar(r, alpha);
            if (z[static_cast<size_t>(k)].imag() <= 0) {
                inside = false;
                break;
            }
            density *= point_density(cs, z[static_cast<size_t>(k)]);
        }
        double v = 0;
        if (inside && std::isfinite(density) && density > 0) v = in.integrand(z, theta) / density;
        if (!std::isfinite(v)) v = 0;
        out.sum += v;
        out.sum_sq += v * v;
    }
    return out;
}

}  // namespace

WeightValue omega_numeric(const Graph& g, long samples, std::uint64_t seed, int workers) {
    if (samples <= 0) throw NumericError("sample count must be positive");
    WeightValue w;
    w.graph = canonical_form(g);
    w.seed = seed;
    w.samples = samples;
    if (g.form_edge_count() != g.dimension()) {
        w.kind = WeightValue::Kind::Exact;
        w.exact = 0;
        w.provenance = "dimension";
        return w;
    }
    if (g.n1 == 0) {
        w.kind = WeightValue::Kind::Exact;
        w.exact = 1;
        w.provenance = "empty";
        return w;
    }
    Integrator in(g);
    std::vector<ChunkResult> parts(kChunks);
    std::vector<long> counts(kChunks, samples / kChunks);
    for (long k = 0; k < samples % kChunks; ++k) counts[static_cast<size_t>(k)] += 1;
    int threads = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, kChunks);
    if (threads <= 1) {
        for (int c = 0; c < kChunks; ++c) parts[static_cast<size_t>(c)] = run_chunk(in, counts[static_cast<size_t>(c)], seed, c);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (int c = t; c < kChunks; c += threads)
                    parts[static_cast<size_t>(c)] = run_chunk(in, counts[static_cast<size_t>(c)], seed, c);
            });
        for (auto& th : pool) th.join();
    }
    double sum = 0, sum_sq = 0;
    for (const auto& p : parts) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const double n = static_cast<double>(samples);
    double mean = sum / n;
    double var = std::max(0.0, sum_sq / n - mean * mean);
    w.kind = WeightValue::Kind::Numeric;
    w.estimate = mean;
    w.stderr_ = std::sqrt(var / n);
    return w;
}

namespace {

struct Seed {
    std::string wire;
    Rational value;
    std::string provenance;
};

std::vector<Seed> seeds() {
    std::vector<Seed> out{
        {"n1=1 n2=2 edges=(1,F1,.)(1,F2,.)", Rational(1, 2), "first-order"},
        {"n1=1 n2=1 edges=(1,F1,+)(1,inf,-)", Rational(1), "bernoulli-1"},
        {"n1=2 n2=2 edges=(1,F1,.)(1,F2,.)(2,F1,.)(2,F2,.)", Rational(1, 4), "second-order-product"},
        {"n1=2 n2=2 edges=(1,F1,.)(1,F2,.)(2,F1,.)(2,1,.)", Rational(1, 12), "second-order-left"},
        {"n1=2 n2=2 edges=(1,F1,.)(1,F2,.)(2,F2,.)(2,1,.)", Rational(-1, 12), "second-order-right"},
        {"n1=2 n2=2 edges=(1,F1,.)(1,2,.)(2,F2,.)(2,1,.)", Rational(-1, 24), "second-order-cycle"},
    };
    for (char f : {'+', '-'})
        for (char l : {'+', '-', '.'})
            out.push_back({std::string("n1=1 n2=1 edges=(1,F1,") + f + ")(1,1," + l + ")", Rational(1, 2), "small-loop"});
    return out;
}

struct Table {
    std::map<std::string, ExactEntry> entries;
};

const Table& table() {
    static const Table t = [] {
        Table out;
        std::map<std::string, bool> conflicted;
        for (const auto& s : seeds()) {
            Graph base = parse_wire(s.wire);
            const int n = base.n1;
            for (int mask = 0; mask < (1 << n); ++mask) {
                Graph v = base;
                int sign = 1;
                for (int k = 0; k < n; ++k)
                    if (mask & (1 << k)) {
                        v = swap_pair(v, k);
                        sign = -sign;
                    }
                auto c = canonicalize(v);
                Rational value = s.value * sign;
                auto it = out.entries.find(c.form);
                if (it == out.entries.end()) {
                    out.entries.emplace(c.form, ExactEntry{c.graph, value, s.provenance});
                } else if (it->second.value != value) {
                    it->second.value = 0;
                    it->second.provenance = s.provenance + "-odd-automorphism";
                }
            }
        }
        return out;
    }();
    return t;
}

// Graphs whose colors are all '+' and which have no loop or infinity edge integrate like uncolored ones.
Graph uncolor_if_tangent(const Graph& g) {
    if (g.has_loop() || g.has_inf()) return g;
    for (const auto& e : g.edges)
        if (e.color != '+') return g;
    Graph r = g;
    for (auto& e : r.edges) e.color = '.';
    return r;
}

}  // namespace

std::vector<ExactEntry> exact_table_entries() {
    std::vector<ExactEntry> out;
    for (const auto& [k, e] : table().entries) out.push_back(e);
    return out;
}

std::optional<WeightValue> omega_exact(const Graph& g) {
    WeightValue w;
    w.kind = WeightValue::Kind::Exact;
    w.graph = canonical_form(g);
    auto rule = [&](Rational v, const char* provenance) {
        w.exact = std::move(v);
        w.provenance = provenance;
        return std::optional<WeightValue>(w);
    };
    if (g.n1 == 0 && g.edges.empty()) return rule(Rational(1), "empty");
    if (g.form_edge_count() != g.dimension()) return rule(Rational(0), "dimension");
    auto it = table().entries.find(canonical_form(uncolor_if_tangent(g)));
    if (it != table().entries.end()) return rule(it->second.value, it->second.provenance.c_str());
    if (!g.has_loop())
        for (const auto& e : g.edges)
            if (e.kind == TargetKind::Ground && e.color == '-') return rule(Rational(0), "boundary-minus");
    for (int k = 0; k < g.n2; ++k)
        if (g.edges_to_ground(k) == 0) return rule(Rational(0), "unreached-ground");
    return std::nullopt;
}

WeightProvider::WeightProvider(Backend backend, long samples, std::uint64_t seed)
    : backend_(backend), samples_(samples), seed_(seed) {}

bool WeightProvider::available(const Graph& g) {
    return backend_ == Backend::Numeric || omega_exact(g).has_value();
}

WeightValue WeightProvider::get(const Graph& g) {
    std::string key = canonical_form(g);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    std::optional<WeightValue> w = omega_exact(g);
    if (!w) {
        if (backend_ == Backend::Exact) throw MissingWeight({key});
        w = omega_numeric(g, samples_, seed_ ^ stable_hash(key));
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, *w).first->second;
}

}  // namespace bq
