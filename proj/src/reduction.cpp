#include "biquant/reduction.hpp"

#include "biquant/linalg.hpp"
#include "biquant/uea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace bq {

namespace {

std::vector<std::vector<int>> q_exponents(const SplitData& s, int D) {
    const int n = s.n();
    std::vector<std::vector<int>> out;
    std::vector<int> e(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n) {
            out.push_back(e);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            e[static_cast<size_t>(pos)] = k;
            self(self, pos + 1, remaining - k);
        }
        e[static_cast<size_t>(pos)] = 0;
    };
    rec(rec, s.t, D);
    for (auto& v : out) std::fill(v.begin(), v.begin() + s.t, 0);
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return deg_q(Mono{a, 0}, s.t) < deg_q(Mono{b, 0}, s.t);
    });
    return out;
}

Poly with_names(const Poly& p, const Names& names) {
    Poly r(names);
    for (const auto& [m, c] : p.terms()) r.add_term(m, c);
    return r;
}

int max_parameter_power(Variant v, int N) { return v == Variant::Eps || v == Variant::TFormal ? N : 0; }

std::vector<int> increments(const std::vector<int>& cumulative) {
    std::vector<int> out;
    int prev = 0;
    for (int v : cumulative) {
        out.push_back(v - prev);
        prev = v;
    }
    return out;
}

// Index of the q-part of a monomial in a fixed list of exponent vectors.
struct ExponentIndex {
    std::map<std::vector<int>, size_t> index;
    explicit ExponentIndex(const std::vector<std::vector<int>>& exps) {
        for (size_t k = 0; k < exps.size(); ++k) index.emplace(exps[k], k);
    }
    size_t of(const Mono& m, int t, int drop = -1) const {
        std::vector<int> e = m.e;
        std::fill(e.begin(), e.begin() + t, 0);
        if (drop >= 0) e[static_cast<size_t>(drop)] = 0;
        return index.at(e);
    }
};

Poly divide_by_eps_minus_one(const Poly& f, bool& exact) {
    std::map<Mono, std::map<int, Rational>> by_q;
    for (const auto& [m, c] : f.terms()) {
        Mono base = m;
        base.eps = 0;
        by_q[base][m.eps] = c;
    }
    Poly out(f.names());
    exact = true;
    for (const auto& [base, coeffs] : by_q) {
        int top = coeffs.rbegin()->first;
        Rational carry = 0;
        for (int k = top; k >= 1; --k) {
            auto it = coeffs.find(k);
            carry += it == coeffs.end() ? Rational(0) : it->second;
            Mono m = base;
            m.eps = k - 1;
            out.add_term(m, carry);
        }
        auto it = coeffs.find(0);
        if ((it == coeffs.end() ? Rational(0) : it->second) + carry != 0) exact = false;
    }
    return out;
}

std::string lambda_text(const SplitData& s) {
    if (s.t == 0) return "none";
    std::string out;
    for (size_t i = 0; i < s.lambda.size(); ++i) out += (i ? "," : "") + bq::to_string(s.lambda[i]);
    return out;
}

bool vector_space_case(const SplitData& s) {
    return std::all_of(s.lambda.begin(), s.lambda.end(), [](const Rational& l) { return l == 0; });
}

std::vector<Poly> eps_components(const Poly& f) {
    std::vector<Poly> out;
    for (const auto& [m, c] : f.terms()) {
        while (static_cast<int>(out.size()) <= m.eps) out.emplace_back(f.names());
        Mono d = m;
        d.eps = 0;
        out[static_cast<size_t>(m.eps)].add_term(d, c);
    }
    return out;
}

std::map<int, Poly> degree_components(const Poly& f, int t) {
    std::map<int, Poly> out;
    for (const auto& [m, c] : f.terms()) out.try_emplace(deg_q(m, t), f.names()).first->second.add_term(m, c);
    return out;
}

}  // namespace

ReductionBasis solve_reduction(const SplitData& s, const SolveOptions& options, WeightProvider& weights) {
    const int D = options.D;
    if (D < 0 || options.N < 0) throw std::invalid_argument("degree bounds must be nonnegative");
    const int order = options.order < 0 ? D + 1 : options.order;
    if (order < D + 1)
        throw OrderTooSmall("differential order " + std::to_string(order) + " is below D+1 = " + std::to_string(D + 1) +
                            "; the truncated kernel would not be exact");
    ReductionBasis out;
    out.split = s;
    out.options = options;
    out.options.order = order;
    const int maxm = max_parameter_power(options.variant, options.N);
    Names names = coordinate_names(*s.algebra);
    auto exps = q_exponents(s, D);
    std::vector<std::vector<Series>> images;
    bool exact = true;
    for (const auto& e : exps) {
        Poly f(names);
        f.add_term(Mono{e, 0}, Rational(1));
        images.push_back(reduction_differential(f, s, order, weights, options.variant, options.t));
        for (const auto& c : images.back()) exact = exact && c.is_exact;
    }
    struct Column {
        size_t exp;
        int m;
    };
    std::vector<Column> columns;
    for (size_t k = 0; k < exps.size(); ++k)
        for (int m = 0; m <= maxm; ++m) {
            columns.push_back({k, m});
            out.ansatz.push_back(Mono{exps[k], m});
        }
    std::map<std::pair<int, Mono>, size_t> row_index;
    std::vector<std::vector<std::pair<size_t, std::pair<Rational, double>>>> sparse(columns.size());
    for (size_t col = 0; col < columns.size(); ++col) {
        const auto& img = images[columns[col].exp];
        for (int i = 0; i < s.t; ++i) {
            const Series& c = img[static_cast<size_t>(i)];
            auto put = [&](Mono m, const Rational& q, double x) {
                m.eps += columns[col].m;
                auto [it, inserted] = row_index.emplace(std::make_pair(i, m), row_index.size());
                sparse[col].push_back({it->second, {q, x}});
            };
            if (exact) {
                for (const auto& [m, q] : c.exact.terms()) put(m, q, 0.0);
            } else {
                for (const auto& [m, v] : c.numeric.terms) put(m, Rational(0), v.first);
            }
        }
    }
    const size_t nrows = row_index.size();
    out.backend = exact ? "exact" : "numeric";
    out.gap = std::numeric_limits<double>::infinity();
    auto subset = [&](int d, int m) {
        std::vector<size_t> cols;
        for (size_t col = 0; col < columns.size(); ++col)
            if (deg_q(Mono{exps[columns[col].exp], 0}, s.t) <= d && columns[col].m <= m) cols.push_back(col);
        return cols;
    };
    auto record = [&](const NumericKernel& k) {
        out.gap = std::min(out.gap, k.gap);
        out.determinate = out.determinate && k.determinate;
    };
    // Kernel basis vectors over the chosen columns, expressed over the chosen columns.
    auto exact_kernel = [&](const std::vector<size_t>& cols) {
        RatMat rows(nrows, RatVec(cols.size(), Rational(0)));
        for (size_t j = 0; j < cols.size(); ++j)
            for (const auto& [r, v] : sparse[cols[j]]) rows[r][j] = v.first;
        return nullspace(rows, static_cast<int>(cols.size()));
    };
    auto numeric_kernel = [&](const std::vector<size_t>& cols) {
        std::vector<std::vector<double>> rows(nrows, std::vector<double>(cols.size(), 0.0));
        for (size_t j = 0; j < cols.size(); ++j)
            for (const auto& [r, v] : sparse[cols[j]]) rows[r][j] = v.second;
        auto k = numeric_nullspace(rows, static_cast<int>(cols.size()));
        record(k);
        return k;
    };
    auto kernel_dim = [&](const std::vector<size_t>& cols) {
        return exact ? static_cast<int>(exact_kernel(cols).size()) : numeric_kernel(cols).nullity;
    };
    out.box.assign(static_cast<size_t>(D + 1), std::vector<int>(static_cast<size_t>(maxm + 1), 0));
    for (int d = 0; d <= D; ++d)
        for (int m = 0; m <= maxm; ++m) out.box[static_cast<size_t>(d)][static_cast<size_t>(m)] = kernel_dim(subset(d, m));
    std::vector<int> cumulative;
    for (int d = 0; d <= D; ++d) {
        auto cols = subset(d, maxm);
        if (exact) {
            RatMat images_j;
            for (const auto& v : exact_kernel(cols)) {
                RatVec j(exps.size(), Rational(0));
                for (size_t k = 0; k < cols.size(); ++k) j[columns[cols[k]].exp] += v[k];
                images_j.push_back(std::move(j));
            }
            cumulative.push_back(rank(images_j, static_cast<int>(exps.size())));
        } else {
            auto k = numeric_kernel(cols);
            std::vector<std::vector<double>> images_j;
            for (const auto& v : k.basis) {
                std::vector<double> j(exps.size(), 0.0);
                for (size_t c = 0; c < cols.size(); ++c) j[columns[cols[c]].exp] += v[c];
                images_j.push_back(std::move(j));
            }
            if (images_j.empty()) {
                cumulative.push_back(0);
            } else {
                auto r = numeric_nullspace(images_j, static_cast<int>(exps.size()));
                record(r);
                cumulative.push_back(r.rank);
            }
        }
    }
    out.filtration = increments(cumulative);
    std::vector<size_t> all(columns.size());
    for (size_t k = 0; k < all.size(); ++k) all[k] = k;
    if (exact) {
        for (const auto& v : exact_kernel(all)) {
            Poly p(names);
            for (size_t k = 0; k < all.size(); ++k)
                if (v[k] != 0) p.add_term(out.ansatz[k], v[k]);
            out.elements.push_back(std::move(p));
        }
        out.dimension = static_cast<int>(out.elements.size());
    } else {
        auto k = numeric_kernel(all);
        out.numeric_basis = k.basis;
        out.dimension = k.nullity;
    }
    return out;
}

bool in_kernel(const Poly& f, const SplitData& s, Variant variant, WeightProvider& weights, const Rational& t) {
    if (f.is_zero()) return true;
    const int order = std::max(0, deg_q(f, s.t)) + 1;
    for (const auto& c : reduction_differential(f, s, order, weights, variant, t)) {
        if (c.is_exact) {
            if (!c.exact.is_zero()) return false;
        } else {
            for (const auto& [m, v] : c.numeric.terms)
                if (std::abs(v.first) > 5 * std::sqrt(v.second) + 1e-12) return false;
        }
    }
    return true;
}

void Report::check(bool ok, const std::string& line) {
    details.push_back((ok ? "ok   " : "FAIL ") + line);
    if (!ok && status == Status::Pass) status = Status::Fail;
}

void Report::insufficient(const std::string& line) {
    details.push_back("insufficient " + line);
    if (status == Status::Pass) status = Status::Insufficient;
}

std::string Report::to_string() const {
    std::string out = summary + "\n";
    for (const auto& d : details) out += "  " + d + "\n";
    return out;
}

std::string format_dims(const std::vector<int>& dims) {
    std::string out = "[";
    for (size_t i = 0; i < dims.size(); ++i) out += (i ? "," : "") + std::to_string(dims[i]);
    return out + "]";
}

std::string describe_split(const std::string& name, const SplitData& s) {
    return "algebra=" + name + " lambda=" + lambda_text(s);
}

namespace {

std::string format_box(const std::vector<std::vector<int>>& box) {
    std::string out = "[";
    for (size_t i = 0; i < box.size(); ++i) out += (i ? "," : "") + format_dims(box[i]);
    return out + "]";
}

void require_exact(Report& r, const ReductionBasis& b, const std::string& what) {
    if (b.backend != "exact") r.insufficient(what + " needs exact kernel elements; weights were estimated numerically");
}

}  // namespace

Report verify_homogenization(const SplitData& s, int D, WeightProvider& weights, const std::string& name) {
    if (!vector_space_case(s)) throw std::invalid_argument("homogenization check is stated for lambda = 0");
    Report r;
    r.summary = "proposition=3.3 " + describe_split(name, s) + " D=" + std::to_string(D);
    auto plain = solve_reduction(s, {D, 0, D + 1, Variant::Plain, 1}, weights);
    auto graded = solve_reduction(s, {D, D, D + 1, Variant::Eps, 1}, weights);
    require_exact(r, plain, "homogenization");
    require_exact(r, graded, "homogenization");
    if (!r.passed()) return r;
    for (const auto& f : plain.elements) {
        const int n = deg_q(f, s.t);
        Poly fe = homogenize(f, n, s.t);
        r.check(in_kernel(fe, s, Variant::Eps, weights), "homogenize(" + f.to_string() + ") solves the eps system");
        r.check(dehomogenize(fe) == f && in_kernel(f, s, Variant::Plain, weights),
                "dehomogenize returns " + f.to_string() + " in the plain kernel");
    }
    for (const auto& g : graded.elements) {
        r.check(in_kernel(dehomogenize(g), s, Variant::Plain, weights),
                "dehomogenize(" + g.to_string() + ") solves the plain system");
        std::map<int, Poly> parts;
        for (const auto& [m, c] : g.terms()) parts.try_emplace(deg_q(m, s.t) + m.eps, g.names()).first->second.add_term(m, c);
        for (const auto& [deg, part] : parts)
            r.check(in_kernel(part, s, Variant::Eps, weights),
                    "total degree " + std::to_string(deg) + " component of a graded solution solves the eps system");
    }
    Names names = coordinate_names(*s.algebra);
    bool control = false;
    for (int j = s.t; j < s.n() && !control; ++j) {
        Poly x = Poly::var(names, j);
        if (in_kernel(x, s, Variant::Eps, weights)) continue;
        Poly base = plain.elements.empty() ? Poly(names) : plain.elements.front();
        Poly perturbed = base + x;
        Poly fe = homogenize(perturbed, std::max(1, deg_q(perturbed, s.t)), s.t);
        r.check(!in_kernel(fe, s, Variant::Eps, weights),
                "negative control " + perturbed.to_string() + " is rejected by the eps system");
        control = true;
    }
    if (!control) r.note("negative control unavailable: the differential vanishes on every linear function");
    return r;
}

Report verify_specialization(const SplitData& s, int D, int N, WeightProvider& weights, const std::string& name) {
    Report r;
    r.summary = "lemma=3.4/3.5 " + describe_split(name, s) + " D=" + std::to_string(D) + " N=" + std::to_string(N);
    auto eps = solve_reduction(s, {D, N, D + 1, Variant::Eps, 1}, weights);
    auto plain = solve_reduction(s, {D, 0, D + 1, Variant::Plain, 1}, weights);
    require_exact(r, eps, "specialization");
    require_exact(r, plain, "specialization");
    if (!r.passed()) return r;
    r.note("J image dims " + format_dims(eps.filtration) + ", plain kernel dims " + format_dims(plain.filtration));
    if (vector_space_case(s)) {
        for (const auto& f : plain.elements) {
            Poly fe = homogenize(f, deg_q(f, s.t), s.t);
            r.check(set_eps(fe, 1) == f, "J(i_eps(" + f.to_string() + ")) = " + f.to_string());
        }
        if (N >= D) r.check(eps.filtration == plain.filtration, "J is a bijection onto the plain kernel per degree");
    } else {
        int a = 0, b = 0;
        bool bounded = true;
        for (size_t d = 0; d < eps.filtration.size(); ++d) {
            a += eps.filtration[d];
            b += plain.filtration[d];
            bounded = bounded && a <= b;
        }
        r.check(bounded, "J image lies in the plain kernel dimensions per filtration degree");
    }
    auto exps = q_exponents(s, D);
    ExponentIndex idx(exps);
    RatMat cols;
    for (const auto& f : eps.elements) {
        RatVec v(exps.size(), Rational(0));
        for (const auto& [m, c] : f.terms()) v[idx.of(m, s.t)] += c;
        cols.push_back(std::move(v));
    }
    RatMat system(exps.size(), RatVec(cols.size(), Rational(0)));
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < exps.size(); ++i) system[i][j] = cols[j][i];
    auto kernel = nullspace(system, static_cast<int>(cols.size()));
    r.note("solutions with J = 0: " + std::to_string(kernel.size()));
    for (const auto& v : kernel) {
        Poly f(eps.elements.empty() ? coordinate_names(*s.algebra) : eps.elements[0].names());
        for (size_t j = 0; j < v.size(); ++j) f += eps.elements[j] * v[j];
        auto comps = eps_components(f);
        Poly rebuilt(f.names());
        for (size_t k = 0; k < comps.size(); ++k)
            rebuilt += comps[k].times_eps(static_cast<int>(k)) - comps[k];
        r.check(rebuilt == f, "sum_k (eps^k - 1) F'_k reconstructs " + f.to_string());
        bool divisible = false;
        Poly g = divide_by_eps_minus_one(f, divisible);
        r.check(divisible && in_kernel(g, s, Variant::Eps, weights),
                "F'/(eps-1) = " + g.to_string() + " is a solution");
    }
    return r;
}

InvariantDims invariant_dims(const SplitData& s, int D, int N, bool scale_character_by_eps) {
    UEA u(s, false);
    IdealSpec ideal = ideal_for(s, scale_character_by_eps);
    auto full = u.ansatz(D, N, ideal);
    auto exps = q_exponents(s, D);
    ExponentIndex idx(exps);
    auto subset = [&](int d, int m) {
        std::vector<Mono> out;
        for (const auto& mono : full)
            if (deg_q(mono, s.t) <= d && mono.eps <= m) out.push_back(mono);
        return out;
    };
    InvariantDims out;
    out.box.assign(static_cast<size_t>(D + 1), std::vector<int>(static_cast<size_t>(N + 1), 0));
    for (int d = 0; d <= D; ++d)
        for (int m = 0; m <= N; ++m)
            out.box[static_cast<size_t>(d)][static_cast<size_t>(m)] =
                static_cast<int>(u.invariant_coordinates(subset(d, m), ideal).size());
    std::vector<int> cumulative;
    for (int d = 0; d <= D; ++d) {
        auto sub = subset(d, N);
        RatMat images;
        for (const auto& v : u.invariant_coordinates(sub, ideal)) {
            RatVec j(exps.size(), Rational(0));
            for (size_t k = 0; k < sub.size(); ++k) j[idx.of(sub[k], s.t)] += v[k];
            images.push_back(std::move(j));
        }
        cumulative.push_back(rank(images, static_cast<int>(exps.size())));
    }
    out.filtration = increments(cumulative);
    return out;
}

Report verify_theorem_5_1(const SplitData& s, int D, int N, WeightProvider& weights, const std::string& name,
                          bool scale_character_by_eps) {
    Report r;
    auto red = solve_reduction(s, {D, N, D + 1, Variant::Eps, 1}, weights);
    auto inv = invariant_dims(s, D, N, scale_character_by_eps);
    auto other = invariant_dims(s, D, N, !scale_character_by_eps);
    bool match = red.box == inv.box && red.filtration == inv.filtration;
    bool decided = red.backend == "exact" || red.determinate;
    r.summary = "theorem=5.1 " + describe_split(name, s) + " D=" + std::to_string(D) + " N=" + std::to_string(N) +
                " side_red=" + format_dims(red.filtration) + " side_inv=" + format_dims(inv.filtration) +
                " verdict=" + (!decided ? "INDETERMINATE" : match ? "MATCH" : "MISMATCH") + " backend=" + red.backend;
    r.note("box_red=" + format_box(red.box));
    r.note("box_inv=" + format_box(inv.box));
    r.note(std::string("character ") + (scale_character_by_eps ? "scaled" : "unscaled") + " by eps; the " +
           (scale_character_by_eps ? "unscaled" : "scaled") + " reading gives side_inv=" + format_dims(other.filtration) +
           " box_inv=" + format_box(other.box));
    if (red.backend == "numeric") {
        std::ostringstream os;
        os << "numeric rank decisions: minimum singular value gap " << red.gap;
        r.note(os.str());
        if (!decided) r.insufficient("no singular value gap of at least 1e6; rank decision withheld");
    }
    r.check(red.box == inv.box, "kernel and invariant dimensions agree on every (degree, eps-order) box");
    r.check(red.filtration == inv.filtration, "filtration dimensions after eps -> 1 agree");
    if (red.backend != "exact") {
        r.note("explicit map skipped: kernel elements are only known numerically");
        return r;
    }
    UEA u(s, false);
    IdealSpec ideal = ideal_for(s, scale_character_by_eps);
    try {
        int checked = 0;
        for (const auto& f : red.elements) {
            Poly g = T_truncated(TDirection::T1Inv, T_truncated(TDirection::T2, f, s, 2), s, 2);
            Poly h = duflo_partial(g, *s.algebra, true);
            UEAElem img = u.symmetrize(with_names(h, u.names()));
            bool invariant = true;
            for (int i = 0; i < s.t; ++i) {
                UEAElem c = u.ideal_reduce(u.adjoint_action(i, img), ideal);
                if (!keep_eps_at_most(c.p, 2).is_zero()) invariant = false;
            }
            r.check(invariant, "explicit image of " + f.to_string() + " is invariant up to eps^2");
            ++checked;
        }
        r.note("explicit map applied to " + std::to_string(checked) + " kernel elements");
    } catch (const CornerInsufficient& e) {
        r.note(std::string("explicit map unavailable: ") + e.what());
    }
    return r;
}

Poly family_as_poly(const TFamily& family) {
    if (family.empty()) throw std::invalid_argument("empty family");
    Poly out(family.front().second.names());
    for (const auto& [p, f] : family) out += f.times_eps(p);
    return out;
}

namespace {

void require_solution(const Poly& f, const SplitData& s, Variant v, WeightProvider& weights, const std::string& what) {
    if (f.is_zero()) return;
    const int order = std::max(0, deg_q(f, s.t)) + 1;
    auto comps = reduction_differential(f, s, order, weights, v);
    for (int i = 0; i < s.t; ++i) {
        const Series& c = comps[static_cast<size_t>(i)];
        if (!c.is_exact) throw std::invalid_argument(what + ": membership needs exact weights");
        if (!c.exact.is_zero())
            throw std::invalid_argument(what + " violates component " + s.algebra->labels()[static_cast<size_t>(i)] +
                                        ": " + c.exact.to_string());
    }
}

TFamily normalize_family(const TFamily& family) {
    std::map<int, Poly> merged;
    for (const auto& [p, f] : family) {
        auto it = merged.try_emplace(p, f.names()).first;
        it->second += f;
    }
    TFamily out;
    for (auto& [p, f] : merged)
        if (!f.is_zero()) out.emplace_back(p, f);
    return out;
}

}  // namespace

Poly t_family_to_eps(const TFamily& family, const SplitData& s, WeightProvider& weights) {
    TFamily fam = normalize_family(family);
    if (fam.empty()) throw std::invalid_argument("empty family");
    for (const auto& [p, f] : fam)
        if (p < 0 || f.eps_degree() > 0) throw std::invalid_argument("family entries must be eps-free with p >= 0");
    require_solution(family_as_poly(fam), s, Variant::TFormal, weights, "t-family");
    int top = 0;
    for (const auto& [p, f] : fam)
        for (const auto& [i, part] : degree_components(f, s.t)) top = std::max(top, i + p);
    const int N = top + 1;
    Poly out(fam.front().second.names());
    for (const auto& [p, f] : fam)
        for (const auto& [i, part] : degree_components(f, s.t)) out += part.times_eps(N - i - p);
    return out;
}

TFamily eps_to_t_family(const Poly& f, const SplitData& s, WeightProvider& weights) {
    if (f.is_zero()) throw std::invalid_argument("zero input");
    require_solution(f, s, Variant::Eps, weights, "eps solution");
    auto comps = eps_components(f);
    int top = 0;
    for (size_t k = 0; k < comps.size(); ++k)
        for (const auto& [i, part] : degree_components(comps[k], s.t)) top = std::max(top, i + static_cast<int>(k));
    const int N = top + 1;
    TFamily out;
    for (size_t k = 0; k < comps.size(); ++k)
        for (const auto& [i, part] : degree_components(comps[k], s.t)) out.emplace_back(N - i - static_cast<int>(k), part);
    return normalize_family(out);
}

Report verify_theorem_6_1(const SplitData& s, int D, int N, WeightProvider& weights, const std::string& name) {
    Report r;
    r.summary = "theorem=6.1 " + describe_split(name, s) + " D=" + std::to_string(D) + " N=" + std::to_string(N);
    const std::vector<Rational> samples{Rational(1), Rational(2), Rational(-1, 3)};
    auto fixed_checks = [&](const Poly& family_poly, const std::string& what) {
        for (const auto& t : samples)
            r.check(in_kernel(set_eps(family_poly, t), s, Variant::TFixed, weights, t),
                    what + " solves the t-system at t=" + bq::to_string(t));
    };
    auto tsol = solve_reduction(s, {D, N, D + 1, Variant::TFormal, 1}, weights);
    auto esol = solve_reduction(s, {D, N, D + 1, Variant::Eps, 1}, weights);
    require_exact(r, tsol, "t/eps conversion");
    require_exact(r, esol, "t/eps conversion");
    if (!r.passed()) return r;
    for (const auto& ft : tsol.elements) {
        TFamily fam;
        auto comps = eps_components(ft);
        int min_p = -1;
        for (size_t p = 0; p < comps.size(); ++p)
            if (!comps[p].is_zero()) {
                fam.emplace_back(static_cast<int>(p), comps[p]);
                if (min_p < 0) min_p = static_cast<int>(p);
            }
        fixed_checks(ft, "t-family " + ft.to_string());
        Poly fe = t_family_to_eps(fam, s, weights);
        r.check(in_kernel(fe, s, Variant::Eps, weights), "F_eps = " + fe.to_string() + " solves the eps system");
        r.check(set_eps(fe, 1) == set_eps(ft, 1), "F_eps at eps=1 equals F_t at t=1");
        Poly back = family_as_poly(eps_to_t_family(fe, s, weights));
        r.check(back == ft.times_eps(1 - min_p),
                "roundtrip returns t^" + std::to_string(1 - min_p) + " times " + ft.to_string());
    }
    for (const auto& fe : esol.elements) {
        auto comps = eps_components(fe);
        int min_k = 0;
        while (comps[static_cast<size_t>(min_k)].is_zero()) ++min_k;
        TFamily fam = eps_to_t_family(fe, s, weights);
        Poly ft = family_as_poly(fam);
        r.check(in_kernel(ft, s, Variant::TFormal, weights), "F_t = " + ft.to_string() + " solves the t-system");
        fixed_checks(ft, "F_t");
        r.check(set_eps(ft, 1) == set_eps(fe, 1), "F_t at t=1 equals F_eps at eps=1");
        Poly back = t_family_to_eps(fam, s, weights);
        r.check(back == fe.times_eps(1 - min_k),
                "roundtrip returns eps^" + std::to_string(1 - min_k) + " times " + fe.to_string());
    }
    return r;
}

std::vector<int> central_extension_dims(const SplitData& s, int D, int N) {
    auto [gT, sT] = extend_central(s);
    UEA u(sT, true);
    IdealSpec ideal = ideal_for(sT);
    auto full = u.ansatz(D, N, ideal);
    auto exps = q_exponents(sT, D);
    ExponentIndex idx(exps);
    const int T = ideal.coupling_index;
    std::vector<int> cumulative;
    for (int d = 0; d <= D; ++d) {
        std::vector<Mono> sub;
        for (const auto& m : full)
            if (deg_q(m, sT.t) <= d) sub.push_back(m);
        RatMat images;
        for (const auto& v : u.invariant_coordinates(sub, ideal)) {
            RatVec j(exps.size(), Rational(0));
            for (size_t k = 0; k < sub.size(); ++k) j[idx.of(sub[k], sT.t, T)] += v[k];
            images.push_back(std::move(j));
        }
        cumulative.push_back(rank(images, static_cast<int>(exps.size())));
    }
    return increments(cumulative);
}

Report verify_theorem_6_8(const SplitData& s, int D, int N, WeightProvider& weights, const std::string& name) {
    Report r;
    auto red = solve_reduction(s, {D, N, D + 1, Variant::Eps, 1}, weights);
    auto ext = central_extension_dims(s, D, N);
    bool decided = red.backend == "exact" || red.determinate;
    bool match = red.filtration == ext;
    r.summary = "theorem=6.8 " + describe_split(name, s) + " D=" + std::to_string(D) + " N=" + std::to_string(N) +
                " side_red=" + format_dims(red.filtration) + " side_ext=" + format_dims(ext) +
                " verdict=" + (!decided ? "INDETERMINATE" : match ? "MATCH" : "MISMATCH") + " backend=" + red.backend;
    if (!decided) r.insufficient("no singular value gap of at least 1e6; rank decision withheld");
    r.check(match, "invariants of the central extension at T=1 match the eps=1 specialization per degree");
    return r;
}

CenterDims center_dims(const SplitData& s, int D) {
    CenterDims out;
    const LieAlgebra& g = *s.algebra;
    Names names = coordinate_names(g);
    auto exps = q_exponents(s, D);
    std::vector<Rational> minus_lambda;
    for (const auto& l : s.lambda) minus_lambda.push_back(-l);
    auto restrict = [&](const Poly& p) { return restrict_coordinates(p, minus_lambda); };
    auto mono_poly = [&](const std::vector<int>& e) {
        Poly p(names);
        p.add_term(Mono{e, 0}, Rational(1));
        return p;
    };
    auto count_upto = [&](int d) {
        size_t k = 0;
        while (k < exps.size() && deg_q(Mono{exps[k], 0}, s.t) <= d) ++k;
        return k;
    };
    // Kernel of a linear map given by the images of the first `cols` basis elements.
    auto kernel_of = [](const std::vector<Poly>& images, size_t cols) {
        std::map<Mono, size_t> rows;
        for (size_t j = 0; j < cols; ++j)
            for (const auto& [m, c] : images[j].terms()) rows.emplace(m, rows.size());
        RatMat mat(rows.size(), RatVec(cols, Rational(0)));
        for (size_t j = 0; j < cols; ++j)
            for (const auto& [m, c] : images[j].terms()) mat[rows[m]][j] = c;
        return nullspace(mat, static_cast<int>(cols));
    };
    auto combine = [](const std::vector<Poly>& basis, const RatVec& v, const Names& nm) {
        Poly p(nm);
        for (size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) p += basis[j] * v[j];
        return p;
    };
    {
        std::vector<Poly> monos;
        for (const auto& e : exps) monos.push_back(mono_poly(e));
        auto invariant_images = [&](size_t cols) {
            std::vector<Poly> imgs;
            for (size_t j = 0; j < cols; ++j) {
                Poly stacked(names);
                for (int i = 0; i < s.t; ++i) {
                    Poly b = restrict(poisson_bracket(Poly::var(names, i), monos[j], g));
                    stacked += b.times_eps(i);
                }
                imgs.push_back(stacked);
            }
            return imgs;
        };
        std::vector<Poly> all_inv;
        for (const auto& v : kernel_of(invariant_images(exps.size()), exps.size())) all_inv.push_back(combine(monos, v, names));
        std::vector<int> cumulative;
        for (int d = 0; d <= D; ++d) {
            size_t cols = count_upto(d);
            std::vector<Poly> inv_d;
            for (const auto& v : kernel_of(invariant_images(cols), cols)) inv_d.push_back(combine(monos, v, names));
            std::vector<Poly> imgs;
            for (const auto& f : inv_d) {
                Poly stacked(names);
                for (size_t j = 0; j < all_inv.size(); ++j)
                    stacked += restrict(poisson_bracket(f, all_inv[j], g)).times_eps(static_cast<int>(j));
                imgs.push_back(stacked);
            }
            cumulative.push_back(static_cast<int>(kernel_of(imgs, imgs.size()).size()));
        }
        out.poisson = increments(cumulative);
    }
    {
        UEA u(s, true);
        IdealSpec ideal = ideal_for(s);
        auto full = u.ansatz(D, 0, ideal);
        auto basis_upto = [&](int d) {
            std::vector<Mono> sub;
            for (const auto& m : full)
                if (deg_q(m, s.t) <= d) sub.push_back(m);
            std::vector<Poly> out_basis;
            for (const auto& v : u.invariant_coordinates(sub, ideal)) {
                Poly p(u.names());
                for (size_t k = 0; k < sub.size(); ++k)
                    if (v[k] != 0) p.add_term(sub[k], v[k]);
                out_basis.push_back(std::move(p));
            }
            return out_basis;
        };
        auto all_inv = basis_upto(D);
        std::vector<int> cumulative;
        for (int d = 0; d <= D; ++d) {
            auto inv_d = basis_upto(d);
            std::vector<Poly> imgs;
            for (const auto& a : inv_d) {
                Poly stacked(u.names());
                for (size_t j = 0; j < all_inv.size(); ++j) {
                    UEAElem x(a), y(all_inv[j]);
                    UEAElem c = u.ideal_reduce(u.mul(x, y) - u.mul(y, x), ideal);
                    stacked += c.p.times_eps(static_cast<int>(j));
                }
                imgs.push_back(stacked);
            }
            cumulative.push_back(static_cast<int>(kernel_of(imgs, imgs.size()).size()));
        }
        out.associative = increments(cumulative);
    }
    return out;
}

Report verify_centers(const SplitData& s, int D, const std::string& name) {
    auto c = center_dims(s, D);
    Report r;
    r.summary = "centers " + describe_split(name, s) + " D=" + std::to_string(D) + " poisson=" + format_dims(c.poisson) +
                " associative=" + format_dims(c.associative) +
                " comparison=" + (c.poisson == c.associative ? "AGREE" : "DIFFER") + " scope=truncated-commutant";
    r.note("centrality is tested only against invariants of degree <= " + std::to_string(D));
    return r;
}

Report verify_lemma_4_1(const SplitData& s, const std::string& name) {
    Report r;
    r.summary = "lemma=4.1 " + describe_split(name, s);
    for (int i = 0; i < s.t; ++i) {
        const std::string label = s.algebra->labels()[static_cast<size_t>(i)];
        Poly at_one = lemma41_defect(s, i, {false, false});
        r.check(at_one.is_zero(), "(" + label + " + (lambda+rho)(" + label + ")) *_1 1 = " + at_one.to_string() + " at eps=1");
        Poly formal = lemma41_defect(s, i, {true, true});
        r.check(formal.is_zero(), "formal eps with eps-scaled rho: defect " + formal.to_string());
        Poly literal = lemma41_defect(s, i, {true, false});
        r.note("formal eps with unscaled rho: defect " + literal.to_string());
    }
    return r;
}

}  // namespace bq
