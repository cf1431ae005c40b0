#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ecolotrade/nestedness.hpp"

namespace ecolotrade {

/// Temperature distribution over random matrices of matched shape and fill.
struct NullEnsembleSummary {
    int realizations = 0;
    std::vector<double> temperatures; // sorted ascending
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<std::pair<double, int>> histogram; // (bin lower edge, count), width 1.0
    std::size_t shape_rows = 0, shape_cols = 0;
    double matched_fill = 0.0;
};

/// Histogram bin width in temperature units.
constexpr double kNullHistogramBinWidth = 1.0;

/// Random binary matrix with exactly round(fill * rows * cols) ones placed
/// uniformly without replacement. Deterministic per seed.
/// Throws if the rounded count is zero.
BinaryMatrix random_matrix(std::size_t rows, std::size_t cols, double fill, std::uint64_t seed);

/// Generate `realizations` random matrices (seed derived per index from
/// master_seed), trim and pack each, and summarize the temperatures.
NullEnsembleSummary null_ensemble(std::size_t rows, std::size_t cols, double fill,
                                  int realizations, const OptimizerBudget& budget,
                                  std::uint64_t master_seed);

} // namespace ecolotrade
