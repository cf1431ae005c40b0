#include "ecolotrade/mutualistic.hpp"

#include <numeric>
#include <stdexcept>

namespace ecolotrade {

const char* to_string(Flow flow) {
    return flow == Flow::Import ? "import" : "export";
}

Flow flow_from_string(const std::string& name) {
    if (name == "import") return Flow::Import;
    if (name == "export") return Flow::Export;
    throw std::invalid_argument("unknown flow '" + name + "'");
}

std::size_t BinaryMatrix::ones() const {
    return std::accumulate(cells.begin(), cells.end(), std::size_t{0});
}

BinaryMatrix threshold(const Matrix& normalized, const std::vector<std::string>& products,
                       const std::vector<std::string>& countries, double mu, Flow flow) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("threshold mu must be in (0,1)");
    if (normalized.rows() != products.size() || normalized.cols() != countries.size())
        throw std::invalid_argument("matrix shape does not match label lists");

    BinaryMatrix q;
    q.row_labels = countries;
    q.col_labels = products;
    q.mu = mu;
    q.flow = flow;
    q.cells.assign(countries.size() * products.size(), 0);
    for (std::size_t p = 0; p < products.size(); ++p)
        for (std::size_t c = 0; c < countries.size(); ++c)
            q.set(c, p, normalized(p, c) >= mu);
    return q;
}

BinaryMatrix threshold(const TradeMatrixPair& pair, double mu, Flow flow) {
    const Matrix& m = flow == Flow::Import ? pair.import_matrix : pair.export_matrix;
    return threshold(m, pair.products, pair.countries, mu, flow);
}

double fill_fraction(const BinaryMatrix& q) {
    if (q.rows() == 0 || q.cols() == 0)
        throw std::invalid_argument("fill fraction of zero-size matrix");
    return static_cast<double>(q.ones()) / static_cast<double>(q.rows() * q.cols());
}

TrimResult trim_empty(const BinaryMatrix& q) {
    const std::size_t R = q.rows(), C = q.cols();
    std::vector<std::size_t> keep_rows, keep_cols;
    std::vector<std::size_t> row_deg(R, 0), col_deg(C, 0);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c)
            if (q.at(r, c)) {
                ++row_deg[r];
                ++col_deg[c];
            }

    TrimResult out;
    for (std::size_t r = 0; r < R; ++r) {
        if (row_deg[r])
            keep_rows.push_back(r);
        else
            out.dropped_rows.push_back(q.row_labels[r]);
    }
    for (std::size_t c = 0; c < C; ++c) {
        if (col_deg[c])
            keep_cols.push_back(c);
        else
            out.dropped_cols.push_back(q.col_labels[c]);
    }
    if (keep_rows.empty() || keep_cols.empty())
        throw std::runtime_error("nothing to analyze: matrix has no nonzero elements");

    BinaryMatrix& t = out.matrix;
    t.mu = q.mu;
    t.flow = q.flow;
    for (std::size_t r : keep_rows) t.row_labels.push_back(q.row_labels[r]);
    for (std::size_t c : keep_cols) t.col_labels.push_back(q.col_labels[c]);
    t.cells.assign(keep_rows.size() * keep_cols.size(), 0);
    for (std::size_t i = 0; i < keep_rows.size(); ++i)
        for (std::size_t j = 0; j < keep_cols.size(); ++j)
            t.set(i, j, q.at(keep_rows[i], keep_cols[j]) != 0);
    return out;
}

} // namespace ecolotrade
