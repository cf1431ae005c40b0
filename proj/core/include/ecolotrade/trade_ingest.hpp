#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ecolotrade/matrix.hpp"

namespace ecolotrade {

/// One trade transaction: product flows from exporter to importer.
/// Self-trade (exporter == importer) is legal and kept as-is.
struct TradeRecord {
    int year = 0;
    std::string product;  // 3-digit SITC code
    std::string exporter; // country code
    std::string importer; // country code
    double value = 0.0;   // USD, >= 0

    bool operator==(const TradeRecord&) const = default;
};

/// Parse failure with the 1-based line number of the offending input line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Expected CSV header: `year,product,exporter,importer,value_usd`.
extern const char* const kCsvHeader;

/// Read records from CSV text. Blank lines are skipped; malformed lines
/// (wrong column count, bad numbers, negative value) throw ParseError.
/// A header-only stream yields an empty list.
std::vector<TradeRecord> parse_records(std::istream& in);

/// Convenience: open and parse a file, prefixing errors with the path.
std::vector<TradeRecord> load_records(const std::filesystem::path& path);

struct FlowKey {
    std::string product, exporter, importer;
    auto operator<=>(const FlowKey&) const = default;
};

/// Per-year sparse trade tensor. Duplicate (product, exporter, importer)
/// triples are summed. Label lists keep first-appearance order; the flow map
/// is keyed canonically so downstream sums are input-order independent.
struct FlowTensor {
    int year = 0;
    std::vector<std::string> products;  // N_p
    std::vector<std::string> countries; // N_c
    std::map<FlowKey, double> flows;
};

/// Filter records to `year` and accumulate the tensor.
/// Throws std::runtime_error("empty year ...") when nothing matches.
FlowTensor build_flow_tensor(std::span<const TradeRecord> records, int year);

/// Product-major (N_p x N_c) USD matrices.
/// imports(p, c)  = sum of product-p flows into country c;
/// exports(p, c)  = sum of product-p flows out of country c.
struct UsdMatrixPair {
    Matrix imports;
    Matrix exports;
};

UsdMatrixPair aggregate(const FlowTensor& tensor);

/// Both matrices divided by the shared maximum entry M_max, so the largest
/// element across the pair is exactly 1.
struct TradeMatrixPair {
    int year = 0;
    std::vector<std::string> products;
    std::vector<std::string> countries;
    Matrix import_matrix; // m^(i), N_p x N_c, entries in [0, 1]
    Matrix export_matrix; // m^(e)
    double normalizer = 0.0; // M_max in USD
};

/// Throws std::runtime_error("degenerate year ...") if every entry is zero.
TradeMatrixPair normalize(const FlowTensor& tensor, const UsdMatrixPair& usd);

/// All distinct years present in the records, ascending.
std::vector<int> list_years(std::span<const TradeRecord> records);

} // namespace ecolotrade
