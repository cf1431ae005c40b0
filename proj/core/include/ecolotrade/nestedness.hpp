#pragma once

#include <cstdint>
#include <vector>

#include "ecolotrade/matrix.hpp"
#include "ecolotrade/mutualistic.hpp"

namespace ecolotrade {

/// Row/column arrangement of a matrix: row_perm[k] is the source row shown
/// at packed position k (position 0 = top), col_perm[l] likewise (0 = left).
struct Ordering {
    std::vector<std::size_t> row_perm;
    std::vector<std::size_t> col_perm;

    static Ordering identity(std::size_t rows, std::size_t cols);
    bool operator==(const Ordering&) const = default;
};

struct OptimizerBudget {
    int generations = 200; // hard cap on GA generations
    int stagnation = 50;   // stop after this many generations without improvement
};

/// Reduced budget for null ensembles: distribution shape matters there, not
/// exact minima.
OptimizerBudget fast_null_budget();

/// Result of packing a binary matrix.
///   temperature  T in [0, 100]; 0 = perfectly nested
///   eta          1 - T/100
///   fill         fill fraction of the analyzed matrix (drives the isocline)
///   isocline_p   exponent of the perfect-nestedness curve y = 1 - x^p
///                (0 when fill = 1 and no isocline exists)
///   unexpectedness  per-cell u in packed coordinates (empty when fill = 1)
///   clamped      true if the raw score exceeded 100 and was clamped
struct NestednessResult {
    Ordering ordering;
    double temperature = 0.0;
    double eta = 1.0;
    double fill = 0.0;
    double isocline_p = 0.0;
    Matrix unexpectedness;
    bool clamped = false;
};

/// Exponent p of the isocline y = 1 - x^p whose presence region has area
/// exactly `fill`. Defined for fill in (0,1).
double isocline_param(double fill);

/// Unexpectedness of one cell. The matrix maps onto the unit square with
/// x = (col+0.5)/cols, y = (row+0.5)/rows, y growing downward; presence
/// belongs to {y <= 1 - x^p}. A cell on the wrong side scores (d/D)^2 where
/// d is the distance from the cell center to the isocline along the slope-+1
/// line through it and D is that line's chord across the square.
double cell_unexpectedness(std::size_t row, std::size_t col, std::size_t rows,
                           std::size_t cols, bool present, double p);

struct TemperatureResult {
    double temperature = 0.0;
    Matrix unexpectedness; // packed coordinates
    bool clamped = false;
};

/// Temperature of `q` arranged by `ordering`. The matrix is expected to be
/// trimmed (no all-zero lines); an all-ones matrix short-circuits to T = 0.
TemperatureResult temperature(const BinaryMatrix& q, const Ordering& ordering);

/// Search row/column permutations minimizing T: three deterministic heuristic
/// seedings followed by a genetic algorithm. Deterministic for fixed
/// (matrix, budget, seed), and never worse than the best heuristic seed.
NestednessResult pack(const BinaryMatrix& q, const OptimizerBudget& budget, std::uint64_t seed);

struct AnalysisResult {
    NestednessResult nested;
    BinaryMatrix trimmed; // the matrix pack actually ran on
    std::vector<std::string> dropped_rows;
    std::vector<std::string> dropped_cols;
};

/// trim_empty followed by pack.
AnalysisResult analyze(const BinaryMatrix& q, const OptimizerBudget& budget, std::uint64_t seed);

} // namespace ecolotrade
