#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecolotrade/trade_ingest.hpp"

namespace ecolotrade {

enum class Flow { Import, Export };

const char* to_string(Flow flow);
Flow flow_from_string(const std::string& name);

/// Binary mutualistic matrix Q. Orientation is countries x products
/// (rows = countries), transposed from the ingestion matrices.
struct BinaryMatrix {
    std::vector<std::string> row_labels; // countries
    std::vector<std::string> col_labels; // products
    std::vector<std::uint8_t> cells;     // row-major bits
    double mu = 0.0;                     // threshold used (0 for generated matrices)
    Flow flow = Flow::Import;

    std::size_t rows() const { return row_labels.size(); }
    std::size_t cols() const { return col_labels.size(); }
    std::uint8_t at(std::size_t r, std::size_t c) const { return cells[r * cols() + c]; }
    void set(std::size_t r, std::size_t c, bool v) { cells[r * cols() + c] = v ? 1 : 0; }
    std::size_t ones() const;
};

/// Binarize a normalized product-major matrix at threshold mu (0 < mu < 1).
/// An element exactly equal to mu maps to 1. The result is transposed to
/// countries x products.
BinaryMatrix threshold(const Matrix& normalized, const std::vector<std::string>& products,
                       const std::vector<std::string>& countries, double mu, Flow flow);

/// Shorthand picking the import or export side of a TradeMatrixPair.
BinaryMatrix threshold(const TradeMatrixPair& pair, double mu, Flow flow);

/// Fraction of ones over all cells. Errors on a zero-size matrix.
double fill_fraction(const BinaryMatrix& q);

struct TrimResult {
    BinaryMatrix matrix;
    std::vector<std::string> dropped_rows;
    std::vector<std::string> dropped_cols;
};

/// Remove all-zero rows and columns, preserving the surviving order.
/// Throws std::runtime_error("nothing to analyze") on an all-zero matrix.
TrimResult trim_empty(const BinaryMatrix& q);

} // namespace ecolotrade
