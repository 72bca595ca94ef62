#include "biquant/lie.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace bq {

namespace {
const Rational kZero(0);
}

LieAlgebra::LieAlgebra(std::vector<std::string> labels)
    : labels_(std::move(labels)), rows_(labels_.size() * labels_.size()) {
    if (labels_.empty()) throw StructuralError("Lie algebra dimension must be positive");
}

int LieAlgebra::index_of(const std::string& label) const {
    for (int i = 0; i < dim(); ++i)
        if (labels_[static_cast<size_t>(i)] == label) return i;
    return -1;
}

void LieAlgebra::set_constant(int i, int j, int k, const Rational& value) {
    if (i < 0 || j < 0 || k < 0 || i >= dim() || j >= dim() || k >= dim())
        throw StructuralError("structure constant index out of range");
    auto& row = rows_[static_cast<size_t>(i * dim() + j)];
    for (auto it = row.begin(); it != row.end(); ++it) {
        if (it->first == k) {
            if (value == 0)
                row.erase(it);
            else
                it->second = value;
            return;
        }
    }
    if (value != 0) {
        auto pos = row.begin();
        while (pos != row.end() && pos->first < k) ++pos;
        row.insert(pos, {k, value});
    }
}

void LieAlgebra::set_bracket(int i, int j, int k, const Rational& value) {
    set_constant(i, j, k, value);
    set_constant(j, i, k, -value);
}

const Rational& LieAlgebra::c(int i, int j, int k) const {
    for (const auto& [idx, val] : bracket(i, j))
        if (idx == k) return val;
    return kZero;
}

bool LieAlgebra::is_abelian() const {
    for (const auto& row : rows_)
        if (!row.empty()) return false;
    return true;
}

std::string Violation::describe(const LieAlgebra& g) const {
    std::ostringstream os;
    os << (kind == Kind::Antisymmetry ? "antisymmetry" : "jacobi") << " (";
    for (size_t a = 0; a < indices.size(); ++a) {
        if (a) os << ",";
        os << g.labels()[static_cast<size_t>(indices[a])];
    }
    os << ") residual=" << to_string(residual);
    return os.str();
}

std::vector<Violation> validate(const LieAlgebra& g) {
    std::vector<Violation> out;
    const int n = g.dim();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Rational s = g.c(i, j, k) + g.c(j, i, k);
                if (s != 0) out.push_back({Violation::Kind::Antisymmetry, {i, j, k}, s});
            }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Rational s = 0;
                    for (int m = 0; m < n; ++m)
                        s += g.c(i, j, m) * g.c(m, k, l) + g.c(j, k, m) * g.c(m, i, l) +
                             g.c(k, i, m) * g.c(m, j, l);
                    if (s != 0) out.push_back({Violation::Kind::Jacobi, {i, j, k, l}, s});
                }
    return out;
}

RatMatrixDense adjoint_matrix(const LieAlgebra& g, int i) {
    const int n = g.dim();
    if (i < 0 || i >= n) throw StructuralError("basis index out of range");
    RatMatrixDense m(static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(n)));
    for (int j = 0; j < n; ++j)
        for (const auto& [k, v] : g.bracket(i, j)) m[static_cast<size_t>(k)][static_cast<size_t>(j)] = v;
    return m;
}

std::vector<Rational> rho(const LieAlgebra& g, int t) {
    std::vector<Rational> out;
    for (int i = 0; i < t; ++i) {
        Rational trace = 0;
        for (int j = 0; j < g.dim(); ++j) trace += g.c(i, j, j);
        out.push_back(-trace / 2);
    }
    return out;
}

std::vector<std::string> split_violations(const LieAlgebra& g, int t, const std::vector<Rational>& lambda) {
    std::vector<std::string> out;
    if (t < 0 || t > g.dim()) {
        out.push_back("h dimension out of range");
        return out;
    }
    if (static_cast<int>(lambda.size()) != t) out.push_back("lambda must have one value per h basis vector");
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
            for (const auto& [k, v] : g.bracket(i, j))
                if (k >= t)
                    out.push_back("h not closed: [" + g.labels()[static_cast<size_t>(i)] + "," +
                                  g.labels()[static_cast<size_t>(j)] + "] has a q component");
            if (static_cast<int>(lambda.size()) == t) {
                Rational s = 0;
                for (const auto& [k, v] : g.bracket(i, j))
                    if (k < t) s += v * lambda[static_cast<size_t>(k)];
                if (s != 0)
                    out.push_back("lambda is not a character on [" + g.labels()[static_cast<size_t>(i)] + "," +
                                  g.labels()[static_cast<size_t>(j)] + "]");
            }
        }
    return out;
}

SplitData make_split(LiePtr g, int t, std::vector<Rational> lambda) {
    auto problems = split_violations(*g, t, lambda);
    if (!problems.empty()) throw StructuralError(problems.front());
    SplitData s;
    s.algebra = std::move(g);
    s.t = t;
    s.lambda = std::move(lambda);
    s.rho = rho(*s.algebra, t);
    return s;
}

std::pair<LiePtr, SplitData> extend_central(const SplitData& s) {
    const LieAlgebra& g = *s.algebra;
    std::vector<std::string> labels{"T"};
    for (const auto& l : g.labels()) labels.push_back(l);
    while (g.index_of(labels[0]) >= 0) labels[0] += "'";
    auto gt = std::make_shared<LieAlgebra>(labels);
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j)
            for (const auto& [k, v] : g.bracket(i, j)) gt->set_constant(i + 1, j + 1, k + 1, v);
    SplitData out;
    out.algebra = gt;
    out.t = s.t + 1;
    out.lambda.assign(static_cast<size_t>(out.t), Rational(0));
    out.rho = rho(*gt, out.t);
    out.coupling_index = 0;
    out.coupling.assign(static_cast<size_t>(out.t), Rational(0));
    for (int i = 0; i < s.t; ++i) out.coupling[static_cast<size_t>(i + 1)] = s.lambda[static_cast<size_t>(i)];
    return {gt, out};
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace

ParsedAlgebra parse_algebra_file(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    int dim = -1;
    std::vector<std::string> labels;
    int t = 0;
    bool have_t = false;
    std::vector<Rational> lambda;
    bool have_lambda = false;
    struct Decl {
        int line;
        std::string a, b;
        std::vector<std::pair<Rational, std::string>> rhs;
    };
    std::vector<Decl> decls;

    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto tok = tokenize(raw);
        if (tok.empty()) continue;
        const std::string& key = tok[0];
        auto numeric = [&](const std::string& s) {
            try {
                return parse_rational(s);
            } catch (const NumericError& e) {
                throw NumericError("line " + std::to_string(line_no) + ": " + e.what());
            }
        };
        if (key == "dim") {
            if (tok.size() != 2) throw ParseError(line_no, "expected 'dim <n>'");
            Rational d = numeric(tok[1]);
            if (d.get_den() != 1 || d <= 0) throw ParseError(line_no, "dimension must be a positive integer");
            dim = static_cast<int>(d.get_num().get_si());
        } else if (key == "basis") {
            labels.assign(tok.begin() + 1, tok.end());
            if (labels.empty()) throw ParseError(line_no, "empty basis declaration");
        } else if (key == "h") {
            if (tok.size() != 2) throw ParseError(line_no, "expected 'h <t>'");
            Rational d = numeric(tok[1]);
            if (d.get_den() != 1 || d < 0) throw ParseError(line_no, "h dimension must be a nonnegative integer");
            t = static_cast<int>(d.get_num().get_si());
            have_t = true;
        } else if (key == "lambda") {
            lambda.clear();
            for (size_t a = 1; a < tok.size(); ++a) lambda.push_back(numeric(tok[a]));
            have_lambda = true;
        } else if (key == "bracket") {
            if (tok.size() < 5 || tok[3] != "=" || (tok.size() - 4) % 2 != 0)
                throw ParseError(line_no, "expected 'bracket A B = c1 C1 c2 C2 ...'");
            Decl d{line_no, tok[1], tok[2], {}};
            for (size_t a = 4; a + 1 < tok.size(); a += 2) d.rhs.push_back({numeric(tok[a]), tok[a + 1]});
            decls.push_back(std::move(d));
        } else {
            throw ParseError(line_no, "unknown directive '" + key + "'");
        }
    }
    if (dim < 0) throw ParseError(line_no, "missing 'dim' declaration");
    if (labels.empty())
        for (int i = 1; i <= dim; ++i) labels.push_back("e" + std::to_string(i));
    if (static_cast<int>(labels.size()) != dim)
        throw StructuralError("basis declares " + std::to_string(labels.size()) + " names for dim " +
                              std::to_string(dim));
    if (t > dim) throw StructuralError("h dimension exceeds algebra dimension");
    if (!have_t) t = 0;
    if (!have_lambda) lambda.assign(static_cast<size_t>(t), Rational(0));
    if (static_cast<int>(lambda.size()) != t)
        throw StructuralError("lambda needs " + std::to_string(t) + " values");

    auto g = std::make_shared<LieAlgebra>(labels);
    auto resolve = [&](const std::string& name, int line) {
        int idx = g->index_of(name);
        if (idx >= 0) return idx;
        bool is_number = !name.empty();
        for (char ch : name)
            if (!std::isdigit(static_cast<unsigned char>(ch))) is_number = false;
        if (is_number) {
            int v = std::stoi(name);
            if (v >= 1 && v <= dim) return v - 1;
            throw StructuralError("line " + std::to_string(line) + ": basis index " + name + " out of range 1.." +
                                  std::to_string(dim));
        }
        throw StructuralError("line " + std::to_string(line) + ": unknown basis element '" + name + "'");
    };
    std::map<std::pair<int, int>, std::vector<Rational>> declared;
    for (const auto& d : decls) {
        int a = resolve(d.a, d.line);
        int b = resolve(d.b, d.line);
        std::vector<Rational> value(static_cast<size_t>(dim));
        for (const auto& [coef, name] : d.rhs) value[static_cast<size_t>(resolve(name, d.line))] += coef;
        if (a == b) {
            for (const auto& v : value)
                if (v != 0) throw ParseError(d.line, "[A,A] must vanish");
            continue;
        }
        auto key = std::make_pair(a, b);
        auto rev = std::make_pair(b, a);
        std::vector<Rational> neg(value.size());
        for (size_t k = 0; k < value.size(); ++k) neg[k] = -value[k];
        if (auto it = declared.find(key); it != declared.end() && it->second != value)
            throw ParseError(d.line, "conflicting declarations of [" + d.a + "," + d.b + "]");
        if (auto it = declared.find(rev); it != declared.end() && it->second != neg)
            throw ParseError(d.line, "declaration of [" + d.a + "," + d.b + "] contradicts antisymmetry");
        declared[key] = value;
        for (int k = 0; k < dim; ++k) g->set_bracket(a, b, k, value[static_cast<size_t>(k)]);
    }
    return {g, t, lambda};
}

LieAlgebra parse_algebra(const std::string& text) { return *parse_algebra_file(text).algebra; }

ParsedAlgebra load_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open algebra file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_algebra_file(ss.str());
}

}  // namespace bq
