#pragma once

#include "biquant/rational.hpp"

#include <vector>

namespace bq {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

// Basis of {v : M v = 0} for an m x cols matrix, in reduced form (each vector has a pivot-free
// coordinate equal to 1 and zeros on the other free coordinates).
std::vector<RatVec> nullspace(const RatMat& rows, int cols);
int rank(const RatMat& rows, int cols);
// Reduced row echelon form of the span of the given vectors (nonzero rows only).
RatMat row_echelon(const RatMat& rows, int cols);

struct NumericKernel {
    int rank = 0;
    int nullity = 0;
    double gap = 0;  // ratio between the smallest retained and the largest discarded singular value
    bool determinate = false;
    std::vector<double> singular_values;
    std::vector<std::vector<double>> basis;
};

// Kernel by singular values; the rank cut is placed at the largest ratio between consecutive singular
// values, and the decision counts as determinate only when that ratio reaches min_gap.
NumericKernel numeric_nullspace(const std::vector<std::vector<double>>& rows, int cols, double min_gap = 1e6);

}  // namespace bq
