#include "ecolotrade/null_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ecolotrade/parallel.hpp"
#include "ecolotrade/rng.hpp"

namespace ecolotrade {

namespace {

std::string indexed_label(char prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%05zu", prefix, i);
    return buf;
}

} // namespace

BinaryMatrix random_matrix(std::size_t rows, std::size_t cols, double fill, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("random_matrix needs rows, cols >= 1");
    if (!(fill > 0.0 && fill <= 1.0))
        throw std::invalid_argument("random_matrix fill must be in (0,1]");

    const std::size_t total = rows * cols;
    const auto ones = static_cast<std::size_t>(
        std::llround(fill * static_cast<double>(total)));
    if (ones == 0) throw std::runtime_error("empty null matrix: round(fill*R*C) is zero");

    BinaryMatrix q;
    for (std::size_t r = 0; r < rows; ++r) q.row_labels.push_back(indexed_label('r', r));
    for (std::size_t c = 0; c < cols; ++c) q.col_labels.push_back(indexed_label('c', c));
    q.cells.assign(total, 0);

    // Partial Fisher-Yates over the flat cell indices: the first `ones`
    // positions of the shuffle become the ones.
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (std::size_t i = 0; i < ones; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(total - i));
        std::swap(idx[i], idx[j]);
        q.cells[idx[i]] = 1;
    }
    return q;
}

NullEnsembleSummary null_ensemble(std::size_t rows, std::size_t cols, double fill,
                                  int realizations, const OptimizerBudget& budget,
                                  std::uint64_t master_seed) {
    if (realizations < 1) throw std::invalid_argument("need at least one realization");

    NullEnsembleSummary s;
    s.realizations = realizations;
    s.shape_rows = rows;
    s.shape_cols = cols;
    s.matched_fill = fill;
    s.temperatures.resize(static_cast<std::size_t>(realizations));

    parallel_for(static_cast<std::size_t>(realizations), [&](std::size_t k) {
        const std::uint64_t matrix_seed = derive_seed(master_seed, k);
        const BinaryMatrix m = random_matrix(rows, cols, fill, matrix_seed);
        const AnalysisResult a = analyze(m, budget, derive_seed(matrix_seed, 1));
        s.temperatures[k] = a.nested.temperature;
    });

    // Sort before reducing so the summary does not depend on evaluation order.
    std::sort(s.temperatures.begin(), s.temperatures.end());
    s.min = s.temperatures.front();
    s.max = s.temperatures.back();
    double sum = 0.0;
    for (double t : s.temperatures) sum += t;
    s.mean = sum / static_cast<double>(realizations);
    double var = 0.0;
    for (double t : s.temperatures) var += (t - s.mean) * (t - s.mean);
    s.std_dev = std::sqrt(var / static_cast<double>(realizations));

    std::map<long, int> bins;
    for (double t : s.temperatures)
        ++bins[static_cast<long>(std::floor(t / kNullHistogramBinWidth))];
    for (const auto& [bin, count] : bins)
        s.histogram.emplace_back(static_cast<double>(bin) * kNullHistogramBinWidth, count);
    return s;
}

} // namespace ecolotrade
