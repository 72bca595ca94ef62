#include "biquant/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>

namespace bq {

namespace {

using IntRow = std::vector<Integer>;

IntRow to_integer_row(const RatVec& row) {
    Integer l = 1;
    for (const auto& v : row)
        if (v != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    IntRow out(row.size());
    for (size_t j = 0; j < row.size(); ++j) out[j] = row[j].get_num() * (l / row[j].get_den());
    return out;
}

void remove_content(IntRow& row) {
    Integer g = 0;
    for (const auto& v : row)
        if (v != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g > 1)
        for (auto& v : row)
            if (v != 0) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

// Fraction-free Gauss-Jordan elimination on integer rows; returns pivot columns.
std::vector<int> eliminate(std::vector<IntRow>& m, int cols) {
    std::vector<int> pivots;
    size_t r = 0;
    for (int c = 0; c < cols && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][static_cast<size_t>(c)] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        if (m[r][static_cast<size_t>(c)] < 0)
            for (auto& v : m[r]) v = -v;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][static_cast<size_t>(c)] == 0) continue;
            Integer a = m[r][static_cast<size_t>(c)];
            Integer b = m[i][static_cast<size_t>(c)];
            Integer g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            a /= g;
            b /= g;
            for (size_t j = 0; j < m[i].size(); ++j) m[i][j] = a * m[i][j] - b * m[r][j];
            remove_content(m[i]);
        }
        remove_content(m[r]);
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

std::vector<IntRow> integer_rows(const RatMat& rows, int cols) {
    std::vector<IntRow> m;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols) throw NumericError("matrix row length mismatch");
        bool nonzero = std::any_of(row.begin(), row.end(), [](const Rational& v) { return v != 0; });
        if (nonzero) m.push_back(to_integer_row(row));
    }
    return m;
}

}  // namespace

std::vector<RatVec> nullspace(const RatMat& rows, int cols) {
    auto m = integer_rows(rows, cols);
    auto pivots = eliminate(m, cols);
    std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
    for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
    std::vector<RatVec> out;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[static_cast<size_t>(f)]) continue;
        RatVec v(static_cast<size_t>(cols));
        v[static_cast<size_t>(f)] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) {
            const auto& row = m[r];
            if (row[static_cast<size_t>(f)] == 0) continue;
            v[static_cast<size_t>(pivots[r])] =
                -Rational(row[static_cast<size_t>(f)], row[static_cast<size_t>(pivots[r])]);
        }
        for (auto& x : v) x.canonicalize();
        out.push_back(std::move(v));
    }
    return out;
}

int rank(const RatMat& rows, int cols) {
    auto m = integer_rows(rows, cols);
    return static_cast<int>(eliminate(m, cols).size());
}

RatMat row_echelon(const RatMat& rows, int cols) {
    auto m = integer_rows(rows, cols);
    auto pivots = eliminate(m, cols);
    RatMat out;
    for (size_t r = 0; r < pivots.size(); ++r) {
        RatVec v(static_cast<size_t>(cols));
        const Integer& lead = m[r][static_cast<size_t>(pivots[r])];
        for (int j = 0; j < cols; ++j) {
            v[static_cast<size_t>(j)] = Rational(m[r][static_cast<size_t>(j)], lead);
            v[static_cast<size_t>(j)].canonicalize();
        }
        out.push_back(std::move(v));
    }
    return out;
}

NumericKernel numeric_nullspace(const std::vector<std::vector<double>>& rows, int cols, double min_gap) {
    NumericKernel out;
    if (cols == 0) {
        out.determinate = true;
        out.gap = std::numeric_limits<double>::infinity();
        return out;
    }
    const int m = std::max<int>(static_cast<int>(rows.size()), 1);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(std::max(m, cols), cols);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < cols; ++j) a(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<size_t>(j)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) out.singular_values.push_back(s(i));
    const double top = s.size() ? s(0) : 0.0;
    const double floor = std::numeric_limits<double>::min();
    const int size = static_cast<int>(s.size());
    int cut = size;
    double gap = std::numeric_limits<double>::infinity();
    bool determinate = true;
    if (top <= floor) {
        cut = 0;
    } else {
        double strongest = 0;
        int strongest_cut = size;
        for (int i = 0; i + 1 < size; ++i) {
            double ratio = s(i) / std::max(s(i + 1), floor);
            if (ratio > strongest) {
                strongest = ratio;
                strongest_cut = i + 1;
            }
        }
        if (strongest >= min_gap) {
            cut = strongest_cut;
            gap = strongest;
        } else if (top / std::max(s(size - 1), floor) >= min_gap) {
            gap = strongest;
            determinate = false;
        }
    }
    out.rank = cut;
    out.nullity = cols - cut;
    out.gap = gap;
    out.determinate = determinate;
    const auto& v = svd.matrixV();
    for (int k = cut; k < cols; ++k) {
        std::vector<double> col(static_cast<size_t>(cols));
        for (int j = 0; j < cols; ++j) col[static_cast<size_t>(j)] = v(j, k);
        out.basis.push_back(std::move(col));
    }
    return out;
}

}  // namespace bq
