#pragma once

#include "biquant/rational.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bq {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_no, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using RatMatrixDense = std::vector<std::vector<Rational>>;

// Structure constants [e_i, e_j] = sum_k c^k_{ij} e_k, stored as sparse rows per ordered pair (i, j).
class LieAlgebra {
public:
    explicit LieAlgebra(std::vector<std::string> labels);

    int dim() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    int index_of(const std::string& label) const;  // -1 when absent

    // Sets c^k_{ij} = value and c^k_{ji} = -value.
    void set_bracket(int i, int j, int k, const Rational& value);
    // Sets a single constant without touching the antisymmetric partner.
    void set_constant(int i, int j, int k, const Rational& value);

    const Rational& c(int i, int j, int k) const;
    const std::vector<std::pair<int, Rational>>& bracket(int i, int j) const {
        return rows_[static_cast<size_t>(i * dim() + j)];
    }
    bool is_abelian() const;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<std::pair<int, Rational>>> rows_;
};

using LiePtr = std::shared_ptr<const LieAlgebra>;

struct Violation {
    enum class Kind { Antisymmetry, Jacobi } kind;
    std::vector<int> indices;  // (i,j,k) for antisymmetry; (i,j,k,l) for Jacobi
    Rational residual;
    std::string describe(const LieAlgebra& g) const;
};

std::vector<Violation> validate(const LieAlgebra& g);

RatMatrixDense adjoint_matrix(const LieAlgebra& g, int i);

// The first t basis vectors span h; the remaining ones span q.
// When coupling_index >= 0, the ideal generator for H_i is H_i + coupling[i] * e_{coupling_index}
// and the scalar character is zero (central extension bookkeeping).
struct SplitData {
    LiePtr algebra;
    int t = 0;
    std::vector<Rational> lambda;
    std::vector<Rational> rho;
    int coupling_index = -1;
    std::vector<Rational> coupling;

    int n() const { return algebra->dim(); }
    int r() const { return n() - t; }
    bool is_h(int index) const { return index < t; }
};

std::vector<Rational> rho(const LieAlgebra& g, int t);

// Builds a split, filling rho. Throws StructuralError when h is not a subalgebra or lambda is not a character.
SplitData make_split(LiePtr g, int t, std::vector<Rational> lambda);
std::vector<std::string> split_violations(const LieAlgebra& g, int t, const std::vector<Rational>& lambda);

// g_T = g + <T> with T central at basis index 0; h_T = <T> + h is the leading block.
// The returned split carries the generator table (H_i, lambda_i) as coupling data on T.
std::pair<LiePtr, SplitData> extend_central(const SplitData& s);

struct ParsedAlgebra {
    LiePtr algebra;
    int t = 0;
    std::vector<Rational> lambda;
    SplitData split() const { return make_split(algebra, t, lambda); }
};

ParsedAlgebra parse_algebra_file(const std::string& text);
LieAlgebra parse_algebra(const std::string& text);
ParsedAlgebra load_algebra_file(const std::string& path);

}  // namespace bq
