#include "biquant/uea.hpp"

#include <algorithm>
#include <sstream>

namespace bq {

IdealSpec ideal_for(const SplitData& s, bool scale_character_by_eps) {
    IdealSpec spec;
    const size_t t = static_cast<size_t>(s.t);
    spec.active.assign(t, true);
    spec.c0.assign(t, Rational(0));
    spec.c1.assign(t, Rational(0));
    spec.coupling.assign(t, Rational(0));
    if (s.coupling_index >= 0) {
        spec.coupling_index = s.coupling_index;
        spec.active[static_cast<size_t>(s.coupling_index)] = false;
        for (size_t i = 0; i < t; ++i)
            if (static_cast<int>(i) != s.coupling_index) spec.coupling[i] = s.coupling[i] + s.rho[i];
        return spec;
    }
    for (size_t i = 0; i < t; ++i) {
        Rational v = s.lambda[i] + s.rho[i];
        (scale_character_by_eps ? spec.c1 : spec.c0)[i] = v;
    }
    return spec;
}

UEA::UEA(SplitData split, bool eps_one)
    : split_(std::move(split)), eps_one_(eps_one), names_(make_names(split_.algebra->labels())) {
    const int n = split_.n();
    const int t = split_.t;
    const int r = n - t;
    rank_.assign(static_cast<size_t>(n), 0);
    order_.assign(static_cast<size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
        int rk = j >= t ? j - t : r + j;
        rank_[static_cast<size_t>(j)] = rk;
        order_[static_cast<size_t>(rk)] = j;
    }
}

UEAElem UEA::one() const { return UEAElem(Poly::constant(names_, Rational(1))); }

UEAElem UEA::letter(int i) const { return UEAElem(Poly::var(names_, i)); }

UEAElem UEA::from_word(const std::vector<int>& letters) const {
    UEAElem r = one();
    for (int x : letters) r = UEAElem(poly_times_letter(r.p, x));
    return r;
}

const Poly& UEA::word_times_letter(const std::vector<int>& e, int x) const {
    auto key = std::make_pair(e, x);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int last = -1;
    for (int rk = split_.n() - 1; rk >= 0; --rk)
        if (e[static_cast<size_t>(order_[static_cast<size_t>(rk)])] > 0) {
            last = order_[static_cast<size_t>(rk)];
            break;
        }
    Poly result(names_);
    if (last < 0 || rank_of(x) >= rank_of(last)) {
        Mono m{e, 0};
        m.e[static_cast<size_t>(x)] += 1;
        result.add_term(m, Rational(1));
    } else {
        std::vector<int> u = e;
        u[static_cast<size_t>(last)] -= 1;
        Poly ux = word_times_letter(u, x);
        result = poly_times_letter(ux, last);
        const auto& row = split_.algebra->bracket(last, x);
        for (const auto& [k, c] : row) {
            Poly term = word_times_letter(u, k) * c;
            result += eps_one_ ? term : term.times_eps(1);
        }
    }
    return memo_.emplace(key, std::move(result)).first->second;
}

Poly UEA::poly_times_letter(const Poly& a, int x) const {
    Poly r(names_);
    for (const auto& [m, c] : a.terms()) {
        const Poly& w = word_times_letter(m.e, x);
        for (const auto& [wm, wc] : w.terms()) {
            Mono mm = wm;
            mm.eps += m.eps;
            r.add_term(mm, wc * c);
        }
    }
    return r;
}

UEAElem UEA::mul(const UEAElem& a, const UEAElem& b) const {
    if (!a.p.same_ambient(b.p) || !a.p.same_ambient(Poly(names_)))
        throw AmbientError("enveloping algebra elements from different algebras");
    Poly r(names_);
    for (const auto& [mb, cb] : b.p.terms()) {
        Poly cur = a.p;
        for (int rk = 0; rk < split_.n(); ++rk) {
            int x = letter_at(rk);
            for (int k = 0; k < mb.e[static_cast<size_t>(x)]; ++k) cur = poly_times_letter(cur, x);
        }
        cur *= cb;
        r += mb.eps ? cur.times_eps(mb.eps) : cur;
    }
    return UEAElem(std::move(r));
}

UEAElem UEA::symmetrize(const Poly& p) const {
    if (p.nvars() != split_.n()) throw AmbientError("symmetrize: polynomial ring does not match the algebra");
    Poly r(names_);
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> letters;
        for (int i = 0; i < split_.n(); ++i)
            for (int k = 0; k < m.e[static_cast<size_t>(i)]; ++k) letters.push_back(i);
        std::sort(letters.begin(), letters.end());
        Poly sum(names_);
        long count = 0;
        do {
            sum += from_word(letters).p;
            ++count;
        } while (std::next_permutation(letters.begin(), letters.end()));
        sum *= c / Rational(count);
        r += m.eps ? sum.times_eps(m.eps) : sum;
    }
    return UEAElem(std::move(r));
}

UEAElem UEA::ideal_reduce(const UEAElem& a, const IdealSpec& ideal) const {
    Poly done(names_);
    Poly pending = a.p;
    while (!pending.is_zero()) {
        Poly next(names_);
        for (const auto& [m, c] : pending.terms()) {
            int last = -1;
            for (int rk = split_.n() - 1; rk >= 0; --rk) {
                int x = letter_at(rk);
                if (m.e[static_cast<size_t>(x)] > 0) {
                    last = x;
                    break;
                }
            }
            if (last < 0 || last >= split_.t || !ideal.active[static_cast<size_t>(last)]) {
                done.add_term(m, c);
                continue;
            }
            const size_t l = static_cast<size_t>(last);
            Mono rest = m;
            rest.e[l] -= 1;
            Rational s0 = ideal.c0[l];
            Rational s1 = ideal.c1[l];
            if (eps_one_) {
                s0 += s1;
                s1 = 0;
            }
            next.add_term(rest, -c * s0);
            if (s1 != 0) {
                Mono re = rest;
                re.eps += 1;
                next.add_term(re, -c * s1);
            }
            if (ideal.coupling_index >= 0 && ideal.coupling[l] != 0) {
                const Poly& w = word_times_letter(rest.e, ideal.coupling_index);
                for (const auto& [wm, wc] : w.terms()) {
                    Mono mm = wm;
                    mm.eps += rest.eps;
                    next.add_term(mm, -c * ideal.coupling[l] * wc);
                }
            }
        }
        pending = std::move(next);
    }
    return UEAElem(std::move(done));
}

UEAElem UEA::adjoint_action(int i, const UEAElem& a) const {
    if (i < 0 || i >= split_.t) throw StructuralError("adjoint action requires an h index");
    return mul(letter(i), a) - mul(a, letter(i));
}

std::vector<Mono> UEA::ansatz(int D, int N, const IdealSpec& ideal) const {
    const int n = split_.n();
    const int t = split_.t;
    std::vector<Mono> out;
    std::vector<int> e(static_cast<size_t>(n), 0);
    const int extra = (ideal.coupling_index >= 0 || !eps_one_) ? N : 0;
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n) {
            for (int m = 0; m <= extra; ++m) {
                Mono mono{e, 0};
                if (ideal.coupling_index >= 0)
                    mono.e[static_cast<size_t>(ideal.coupling_index)] = m;
                else
                    mono.eps = m;
                out.push_back(mono);
            }
            return;
        }
        if (pos < t) {
            self(self, pos + 1, remaining);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            e[static_cast<size_t>(pos)] = k;
            self(self, pos + 1, remaining - k);
        }
        e[static_cast<size_t>(pos)] = 0;
    };
    rec(rec, 0, D);
    std::sort(out.begin(), out.end(), [t](const Mono& a, const Mono& b) {
        int da = deg_q(a, t), db = deg_q(b, t);
        if (da != db) return da < db;
        return a < b;
    });
    return out;
}

std::vector<RatVec> UEA::invariant_coordinates(const std::vector<Mono>& ansatz, const IdealSpec& ideal) const {
    std::map<Mono, size_t> row_index;
    std::vector<std::vector<std::pair<size_t, Rational>>> columns(ansatz.size());
    for (size_t col = 0; col < ansatz.size(); ++col) {
        Poly p(names_);
        p.add_term(ansatz[col], Rational(1));
        UEAElem a(std::move(p));
        for (int i = 0; i < split_.t; ++i) {
            UEAElem img = ideal_reduce(adjoint_action(i, a), ideal);
            for (const auto& [m, c] : img.p.terms()) {
                Mono key = m;
                key.e.push_back(i);
                auto [it, inserted] = row_index.emplace(key, row_index.size());
                columns[col].push_back({it->second, c});
            }
        }
    }
    RatMat rows(row_index.size(), RatVec(ansatz.size()));
    for (size_t col = 0; col < ansatz.size(); ++col)
        for (const auto& [r, c] : columns[col]) rows[r][col] = c;
    return nullspace(rows, static_cast<int>(ansatz.size()));
}

std::vector<UEAElem> UEA::invariants_basis(int D, int N, const IdealSpec& ideal) const {
    auto monos = ansatz(D, N, ideal);
    auto kernel = invariant_coordinates(monos, ideal);
    std::vector<UEAElem> out;
    for (const auto& v : kernel) {
        Poly p(names_);
        for (size_t k = 0; k < monos.size(); ++k) p.add_term(monos[k], v[k]);
        out.emplace_back(std::move(p));
    }
    return out;
}

std::string UEA::to_string(const UEAElem& a) const {
    if (a.is_zero()) return "0";
    std::vector<std::pair<Mono, Rational>> sorted(a.p.terms().begin(), a.p.terms().end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
        int dx = x.first.degree() + x.first.eps;
        int dy = y.first.degree() + y.first.eps;
        if (dx != dy) return dx > dy;
        return x.first > y.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : sorted) {
        if (!first) os << " + ";
        first = false;
        os << bq::to_string(c);
        for (int rk = 0; rk < split_.n(); ++rk) {
            int x = letter_at(rk);
            int k = m.e[static_cast<size_t>(x)];
            if (k == 0) continue;
            os << "*" << (*names_)[static_cast<size_t>(x)];
            if (k > 1) os << "^" << k;
        }
        if (m.eps > 0) {
            os << "*eps";
            if (m.eps > 1) os << "^" << m.eps;
        }
    }
    return os.str();
}

namespace {

// Coefficients of log(sinh(x/2)/(x/2)) = sum_k a_k x^{2k}, k = 1..K.
std::vector<Rational> log_sinhc_coefficients(int K) {
    std::vector<Rational> s(static_cast<size_t>(K + 1));
    Rational fact = 1;
    Rational four = 1;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) {
            fact *= (2 * k) * (2 * k + 1);
            four *= 4;
        }
        s[static_cast<size_t>(k)] = 1 / (four * fact);
    }
    // u = s - 1 as a series in y = x^2; log(1+u) = sum (-1)^{j+1} u^j / j
    std::vector<Rational> u = s;
    u[0] = 0;
    std::vector<Rational> out(static_cast<size_t>(K + 1));
    std::vector<Rational> power(static_cast<size_t>(K + 1));
    power[0] = 1;
    for (int j = 1; j <= K; ++j) {
        std::vector<Rational> next(static_cast<size_t>(K + 1));
        for (int a = 0; a <= K; ++a)
            for (int b = 1; a + b <= K; ++b)
                next[static_cast<size_t>(a + b)] += power[static_cast<size_t>(a)] * u[static_cast<size_t>(b)];
        power = std::move(next);
        Rational sign = (j % 2 == 1) ? Rational(1) : Rational(-1);
        for (int k = 0; k <= K; ++k) out[static_cast<size_t>(k)] += sign * power[static_cast<size_t>(k)] / j;
    }
    return out;
}

Poly truncate_degree(const Poly& p, int D) {
    Poly r(p.names());
    for (const auto& [m, c] : p.terms())
        if (m.degree() <= D) r.add_term(m, c);
    return r;
}

Poly truncated_product(const Poly& a, const Poly& b, int D) {
    Poly r(a.names());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (ma.degree() + mb.degree() > D) continue;
            Mono m = ma;
            for (size_t i = 0; i < m.e.size(); ++i) m.e[i] += mb.e[i];
            m.eps += mb.eps;
            r.add_term(m, ca * cb);
        }
    return r;
}

}  // namespace

Poly q_function_expansion(const LieAlgebra& g, int D) {
    Names names = coordinate_names(g);
    const int n = g.dim();
    const int K = D / 2;
    auto a = log_sinhc_coefficients(K);
    // ad_Y as a matrix of linear polynomials
    std::vector<std::vector<Poly>> ad(static_cast<size_t>(n), std::vector<Poly>(static_cast<size_t>(n), Poly(names)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& [k, v] : g.bracket(i, j))
                ad[static_cast<size_t>(k)][static_cast<size_t>(j)] += Poly::var(names, i) * v;
    Poly logq(names);
    auto power = ad;
    for (int step = 2; step <= 2 * K; ++step) {
        std::vector<std::vector<Poly>> next(static_cast<size_t>(n), std::vector<Poly>(static_cast<size_t>(n), Poly(names)));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (power[static_cast<size_t>(i)][static_cast<size_t>(k)].is_zero()) continue;
                for (int j = 0; j < n; ++j)
                    if (!ad[static_cast<size_t>(k)][static_cast<size_t>(j)].is_zero())
                        next[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
                            power[static_cast<size_t>(i)][static_cast<size_t>(k)] * ad[static_cast<size_t>(k)][static_cast<size_t>(j)];
            }
        power = std::move(next);
        if (step % 2 == 0) {
            Poly trace(names);
            for (int i = 0; i < n; ++i) trace += power[static_cast<size_t>(i)][static_cast<size_t>(i)];
            logq += trace * a[static_cast<size_t>(step / 2)];
        }
    }
    Poly result = Poly::constant(names, Rational(1));
    Poly term = Poly::constant(names, Rational(1));
    for (int j = 1; j <= D; ++j) {
        term = truncated_product(term, logq, D) * (Rational(1) / j);
        if (term.is_zero()) break;
        result += term;
    }
    return truncate_degree(result, D);
}

Poly series_sqrt(const Poly& f, int D) {
    Poly one = Poly::constant(f.names(), Rational(1));
    Mono zero{std::vector<int>(static_cast<size_t>(f.nvars()), 0), 0};
    if (f.coeff(zero) != 1) throw NumericError("series square root needs constant term 1");
    Poly u = truncate_degree(f - one, D);
    Poly result = one;
    Poly power = one;
    Rational binom = 1;
    for (int j = 1; j <= D; ++j) {
        binom *= (Rational(1, 2) - (j - 1)) / j;
        power = truncated_product(power, u, D);
        if (power.is_zero()) break;
        result += power * binom;
    }
    return result;
}

Poly duflo_partial(const Poly& f, const LieAlgebra& g, bool scaled) {
    if (f.nvars() != g.dim()) throw AmbientError("duflo_partial: polynomial ring does not match the algebra");
    const int D = std::max(0, f.degree());
    Poly root = series_sqrt(q_function_expansion(g, D), D);
    Poly r(f.names());
    for (const auto& [m, c] : root.terms()) {
        Poly d = f;
        for (size_t i = 0; i < m.e.size() && !d.is_zero(); ++i)
            for (int k = 0; k < m.e[i]; ++k) d = d.derivative(static_cast<int>(i));
        if (d.is_zero()) continue;
        d *= c;
        r += scaled ? d.times_eps(m.degree()) : d;
    }
    return r;
}

}  // namespace bq
