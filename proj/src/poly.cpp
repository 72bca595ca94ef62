#include "biquant/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace bq {

int Mono::degree() const {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

Names make_names(std::vector<std::string> names) {
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

Names coordinate_names(const LieAlgebra& g) {
    std::vector<std::string> out;
    for (const auto& l : g.labels()) {
        std::string s = l;
        for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        out.push_back(s);
    }
    return make_names(std::move(out));
}

Poly::Poly(Names names) : names_(std::move(names)) {}

Poly Poly::constant(Names names, const Rational& c) {
    Poly p(names);
    p.add_term(Mono{std::vector<int>(names->size(), 0), 0}, c);
    return p;
}

Poly Poly::var(Names names, int i) {
    Poly p(names);
    Mono m{std::vector<int>(names->size(), 0), 0};
    m.e.at(static_cast<size_t>(i)) = 1;
    p.add_term(m, Rational(1));
    return p;
}

Poly Poly::eps_power(Names names, int k) {
    Poly p(names);
    p.add_term(Mono{std::vector<int>(names->size(), 0), k}, Rational(1));
    return p;
}

bool Poly::same_ambient(const Poly& other) const {
    return names_ == other.names_ || *names_ == *other.names_;
}

void Poly::add_term(const Mono& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational Poly::coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

static void check_ambient(const Poly& a, const Poly& b) {
    if (!a.same_ambient(b)) throw AmbientError("polynomials live in different coordinate rings");
}

Poly& Poly::operator+=(const Poly& o) {
    check_ambient(*this, o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    check_ambient(*this, o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    check_ambient(a, b);
    Poly r(a.names_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            Mono m = ma;
            for (size_t i = 0; i < m.e.size(); ++i) m.e[i] += mb.e[i];
            m.eps += mb.eps;
            r.add_term(m, ca * cb);
        }
    return r;
}

Poly Poly::derivative(int i) const {
    Poly r(names_);
    for (const auto& [m, c] : terms_) {
        int k = m.e[static_cast<size_t>(i)];
        if (k == 0) continue;
        Mono d = m;
        d.e[static_cast<size_t>(i)] = k - 1;
        r.add_term(d, c * k);
    }
    return r;
}

Poly Poly::times_eps(int k) const {
    Poly r(names_);
    for (const auto& [m, c] : terms_) {
        Mono d = m;
        d.eps += k;
        r.terms_.emplace(d, c);
    }
    return r;
}

Poly Poly::pow(int k) const {
    Poly r = constant(names_, Rational(1));
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

int Poly::eps_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.eps);
    return d;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Mono, Rational>> sorted(terms_.begin(), terms_.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        int da = a.first.degree() + a.first.eps;
        int db = b.first.degree() + b.first.eps;
        if (da != db) return da > db;
        return a.first > b.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : sorted) {
        if (!first) os << " + ";
        first = false;
        os << bq::to_string(c);
        for (size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] == 0) continue;
            os << "*" << (*names_)[i];
            if (m.e[i] > 1) os << "^" << m.e[i];
        }
        if (m.eps > 0) {
            os << "*eps";
            if (m.eps > 1) os << "^" << m.eps;
        }
    }
    return os.str();
}

Poly scale(const Poly& p, const Rational& c) { return p * c; }

Poly poisson_bracket(const Poly& p, const Poly& q, const LieAlgebra& g) {
    check_ambient(p, q);
    if (p.nvars() != g.dim()) throw AmbientError("polynomial ring does not match the Lie algebra");
    Poly r(p.names());
    const int n = g.dim();
    std::vector<Poly> dq;
    for (int j = 0; j < n; ++j) dq.push_back(q.derivative(j));
    for (int i = 0; i < n; ++i) {
        Poly dp = p.derivative(i);
        if (dp.is_zero()) continue;
        for (int j = 0; j < n; ++j) {
            if (dq[static_cast<size_t>(j)].is_zero()) continue;
            const auto& row = g.bracket(i, j);
            if (row.empty()) continue;
            Poly pij(p.names());
            for (const auto& [k, v] : row) pij += Poly::var(p.names(), k) * v;
            r += pij * dp * dq[static_cast<size_t>(j)];
        }
    }
    return r;
}

Poly scale_map(const Poly& p, const Rational& t) {
    if (t == 0) throw NumericError("scaling parameter must be nonzero");
    Poly r(p.names());
    Rational inv = 1 / t;
    for (const auto& [m, c] : p.terms()) {
        Rational f = 1;
        for (int k = 0; k < m.degree(); ++k) f *= inv;
        r.add_term(m, c * f);
    }
    return r;
}

int deg_q(const Mono& m, int t) {
    int d = 0;
    for (size_t i = static_cast<size_t>(t); i < m.e.size(); ++i) d += m.e[i];
    return d;
}

int deg_q(const Poly& p, int t) {
    int d = -1;
    for (const auto& [m, c] : p.terms()) d = std::max(d, deg_q(m, t));
    return d;
}

Poly homogenize(const Poly& f, int N, int t) {
    Poly r(f.names());
    for (const auto& [m, c] : f.terms()) {
        if (m.eps != 0) throw AmbientError("homogenize expects an eps-free polynomial");
        for (int i = 0; i < t; ++i)
            if (m.e[static_cast<size_t>(i)] != 0) throw AmbientError("homogenize expects a polynomial on q");
        int k = deg_q(m, t);
        if (k > N) throw AmbientError("homogenization degree below the polynomial degree");
        Mono h = m;
        h.eps = N - k;
        r.add_term(h, c);
    }
    return r;
}

Poly set_eps(const Poly& f, const Rational& value) {
    Poly r(f.names());
    for (const auto& [m, c] : f.terms()) {
        Mono d = m;
        d.eps = 0;
        Rational w = 1;
        for (int k = 0; k < m.eps; ++k) w *= value;
        r.add_term(d, c * w);
    }
    return r;
}

Poly dehomogenize(const Poly& f) { return set_eps(f, Rational(1)); }

Poly substitute(const Poly& f, int i, const Poly& value) {
    Poly r(f.names());
    std::vector<Poly> powers{Poly::constant(f.names(), Rational(1))};
    for (const auto& [m, c] : f.terms()) {
        int k = m.e[static_cast<size_t>(i)];
        while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * value);
        Poly base(f.names());
        Mono d = m;
        d.e[static_cast<size_t>(i)] = 0;
        base.add_term(d, c);
        r += base * powers[static_cast<size_t>(k)];
    }
    return r;
}

Poly restrict_coordinates(const Poly& f, const std::vector<Rational>& values) {
    Poly r(f.names());
    for (const auto& [m, c] : f.terms()) {
        Mono d = m;
        Rational w = c;
        for (size_t i = 0; i < values.size(); ++i) {
            for (int k = 0; k < m.e[i]; ++k) w *= values[i];
            d.e[i] = 0;
        }
        r.add_term(d, w);
    }
    return r;
}

Poly keep_eps_at_most(const Poly& f, int order) {
    Poly r(f.names());
    for (const auto& [m, c] : f.terms())
        if (m.eps <= order) r.add_term(m, c);
    return r;
}

namespace {

Poly multi_derivative(const Poly& f, const std::vector<int>& alpha) {
    Poly r = f;
    for (size_t i = 0; i < alpha.size() && !r.is_zero(); ++i)
        for (int k = 0; k < alpha[i]; ++k) r = r.derivative(static_cast<int>(i));
    return r;
}

}  // namespace

Poly moyal_product(const Poly& f, const Poly& g, const std::vector<std::vector<Rational>>& pi, int order) {
    check_ambient(f, g);
    const size_t n = static_cast<size_t>(f.nvars());
    if (pi.size() != n) throw AmbientError("bivector size does not match the number of coordinates");
    for (size_t i = 0; i < n; ++i) {
        if (pi[i].size() != n) throw AmbientError("bivector must be square");
        for (size_t j = 0; j < n; ++j)
            if (pi[i][j] != -pi[j][i]) throw NumericError("bivector must be antisymmetric");
    }
    if (order < 0) throw NumericError("order must be nonnegative");
    Poly r = f * g;
    using Key = std::pair<std::vector<int>, std::vector<int>>;
    std::map<Key, Rational> layer{{{std::vector<int>(n, 0), std::vector<int>(n, 0)}, Rational(1)}};
    Rational factorial = 1;
    const int max_useful = std::max(0, std::min(f.degree(), g.degree()));
    for (int k = 1; k <= std::min(order, max_useful); ++k) {
        factorial *= k;
        std::map<Key, Rational> next;
        for (const auto& [key, c] : layer)
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    if (pi[i][j] == 0) continue;
                    Key nk = key;
                    nk.first[i] += 1;
                    nk.second[j] += 1;
                    next[nk] += c * pi[i][j];
                }
        layer = std::move(next);
        Poly term(f.names());
        for (const auto& [key, c] : layer) {
            if (c == 0) continue;
            Poly df = multi_derivative(f, key.first);
            if (df.is_zero()) continue;
            Poly dg = multi_derivative(g, key.second);
            if (dg.is_zero()) continue;
            term += df * dg * c;
        }
        r += (term * (1 / factorial)).times_eps(k);
    }
    return r;
}

Poly moyal_product(const Poly& f, const Poly& g, const std::vector<std::vector<Rational>>& pi) {
    return moyal_product(f, g, pi, std::max(0, f.degree()) + std::max(0, g.degree()));
}

namespace {

class PolyParser {
public:
    PolyParser(const std::string& text, const Names& names) : s_(text), names_(names) {}

    Poly parse() {
        Poly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    const std::string& s_;
    Names names_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(1, "polynomial '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char ch) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }
    Poly expr() {
        Poly r(names_);
        bool first = true;
        while (true) {
            skip();
            bool neg = false;
            if (eat('-'))
                neg = true;
            else if (!first && !eat('+'))
                break;
            else if (first)
                eat('+');
            Poly t = term();
            r += neg ? -t : t;
            first = false;
            skip();
            if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) break;
        }
        return r;
    }
    Poly term() {
        Poly r = power();
        while (true) {
            if (eat('*')) {
                r = r * power();
            } else if (eat('/')) {
                Poly d = power();
                if (d.degree() > 0 || d.eps_degree() > 0 || d.is_zero())
                    fail("division only by nonzero rational constants");
                r = r * (1 / d.terms().begin()->second);
            } else {
                break;
            }
        }
        return r;
    }
    Poly power() {
        Poly base = atom();
        if (eat('^')) {
            skip();
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            base = base.pow(std::stoi(s_.substr(start, pos_ - start)));
        }
        return base;
    }
    Poly atom() {
        skip();
        if (eat('-')) return -power();
        if (eat('+')) return power();
        if (eat('(')) {
            Poly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Poly::constant(names_, Rational(mpz_class(s_.substr(start, pos_ - start))));
        }
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
                ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (id == "eps") return Poly::eps_power(names_, 1);
            for (size_t i = 0; i < names_->size(); ++i)
                if ((*names_)[i] == id) return Poly::var(names_, static_cast<int>(i));
            std::string lower = id;
            for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            for (size_t i = 0; i < names_->size(); ++i)
                if ((*names_)[i] == lower) return Poly::var(names_, static_cast<int>(i));
            fail("unknown variable '" + id + "'");
        }
        fail("expected a number, variable or '('");
    }
};

}  // namespace

Poly parse_poly(const std::string& text, const Names& names) { return PolyParser(text, names).parse(); }

}  // namespace bq
