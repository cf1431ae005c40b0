#include "ecolotrade/trade_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ecolotrade {

const char* const kCsvHeader = "year,product,exporter,importer,value_usd";

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

int parse_int(const std::string& s, std::size_t line) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(line, "bad integer '" + s + "'");
    return v;
}

double parse_value(const std::string& s, std::size_t line) {
    if (s.empty()) throw ParseError(line, "empty value field");
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw ParseError(line, "bad value '" + s + "'");
    if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + s + "'");
    if (v < 0.0) throw ParseError(line, "negative value '" + s + "'");
    return v;
}

} // namespace

std::vector<TradeRecord> parse_records(std::istream& in) {
    std::vector<TradeRecord> records;
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    ++lineno;
    if (trim(line) != kCsvHeader)
        throw ParseError(1, std::string("expected header '") + kCsvHeader + "'");

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 5)
            throw ParseError(lineno, "expected 5 fields, got " + std::to_string(fields.size()));

        TradeRecord r;
        r.year = parse_int(fields[0], lineno);
        r.product = fields[1];
        r.exporter = fields[2];
        r.importer = fields[3];
        if (r.product.empty()) throw ParseError(lineno, "empty product code");
        if (r.exporter.empty() || r.importer.empty())
            throw ParseError(lineno, "empty country code");
        r.value = parse_value(fields[4], lineno);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<TradeRecord> load_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path.string());
    try {
        return parse_records(in);
    } catch (const ParseError& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

FlowTensor build_flow_tensor(std::span<const TradeRecord> records, int year) {
    FlowTensor t;
    t.year = year;

    // Collect all values per key first, then sum each key's values in sorted
    // order: the resulting sums do not depend on the input record order.
    std::map<FlowKey, std::vector<double>> pending;
    std::set<std::string> seen_products, seen_countries;
    for (const auto& r : records) {
        if (r.year != year) continue;
        if (seen_products.insert(r.product).second) t.products.push_back(r.product);
        if (seen_countries.insert(r.exporter).second) t.countries.push_back(r.exporter);
        if (seen_countries.insert(r.importer).second) t.countries.push_back(r.importer);
        pending[{r.product, r.exporter, r.importer}].push_back(r.value);
    }
    if (pending.empty())
        throw std::runtime_error("empty year " + std::to_string(year));

    for (auto& [key, values] : pending) {
        std::sort(values.begin(), values.end());
        double sum = 0.0;
        for (double v : values) sum += v;
        t.flows.emplace(key, sum);
    }
    return t;
}

UsdMatrixPair aggregate(const FlowTensor& tensor) {
    if (tensor.flows.empty()) throw std::runtime_error("empty flow tensor");

    std::map<std::string, std::size_t> prod_index, country_index;
    for (std::size_t i = 0; i < tensor.products.size(); ++i) prod_index[tensor.products[i]] = i;
    for (std::size_t i = 0; i < tensor.countries.size(); ++i) country_index[tensor.countries[i]] = i;

    UsdMatrixPair out{Matrix(tensor.products.size(), tensor.countries.size()),
                      Matrix(tensor.products.size(), tensor.countries.size())};

    // flows iterates in canonical (product, exporter, importer) key order,
    // so every accumulated entry sees its addends in a fixed order.
    for (const auto& [key, value] : tensor.flows) {
        const std::size_t p = prod_index.at(key.product);
        out.imports(p, country_index.at(key.importer)) += value;
        out.exports(p, country_index.at(key.exporter)) += value;
    }
    return out;
}

TradeMatrixPair normalize(const FlowTensor& tensor, const UsdMatrixPair& usd) {
    double max_entry = 0.0;
    for (double v : usd.imports.data()) max_entry = std::max(max_entry, v);
    for (double v : usd.exports.data()) max_entry = std::max(max_entry, v);
    if (max_entry <= 0.0)
        throw std::runtime_error("degenerate year " + std::to_string(tensor.year) +
                                 ": all-zero trade matrices");

    TradeMatrixPair out;
    out.year = tensor.year;
    out.products = tensor.products;
    out.countries = tensor.countries;
    out.import_matrix = usd.imports;
    out.export_matrix = usd.exports;
    out.normalizer = max_entry;
    for (double& v : out.import_matrix.data()) v /= max_entry;
    for (double& v : out.export_matrix.data()) v /= max_entry;
    return out;
}

std::vector<int> list_years(std::span<const TradeRecord> records) {
    std::set<int> years;
    for (const auto& r : records) years.insert(r.year);
    return {years.begin(), years.end()};
}

} // namespace ecolotrade
