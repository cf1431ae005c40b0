#include "ecolotrade/rankings.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecolotrade {

const char* to_string(RankScheme scheme) {
    return scheme == RankScheme::Ecolo ? "ecolo" : "volume";
}

namespace {

void append_dropped(RankTable& table, std::vector<std::string> dropped,
                    const std::map<std::string, double>& volumes) {
    std::sort(dropped.begin(), dropped.end(), [&](const std::string& a, const std::string& b) {
        const double va = volumes.count(a) ? volumes.at(a) : 0.0;
        const double vb = volumes.count(b) ? volumes.at(b) : 0.0;
        if (va != vb) return va > vb;
        return a < b;
    });
    for (auto& label : dropped) {
        const int rank = static_cast<int>(table.entries.size()) + 1;
        table.entries.push_back({rank, std::move(label), static_cast<double>(rank)});
    }
}

} // namespace

std::pair<RankTable, RankTable> ecolo_rank(const AnalysisResult& analysis,
                                           const std::map<std::string, double>& country_volumes,
                                           const std::map<std::string, double>& product_volumes,
                                           int year) {
    const BinaryMatrix& m = analysis.trimmed;
    const Ordering& ord = analysis.nested.ordering;

    RankTable countries{year, m.flow, RankScheme::Ecolo, RankAxis::Countries, {}};
    for (std::size_t k = 0; k < ord.row_perm.size(); ++k) {
        const int rank = static_cast<int>(k) + 1;
        countries.entries.push_back({rank, m.row_labels[ord.row_perm[k]], static_cast<double>(rank)});
    }
    append_dropped(countries, analysis.dropped_rows, country_volumes);

    RankTable products{year, m.flow, RankScheme::Ecolo, RankAxis::Products, {}};
    for (std::size_t l = 0; l < ord.col_perm.size(); ++l) {
        const int rank = static_cast<int>(l) + 1;
        products.entries.push_back({rank, m.col_labels[ord.col_perm[l]], static_cast<double>(rank)});
    }
    append_dropped(products, analysis.dropped_cols, product_volumes);

    return {std::move(countries), std::move(products)};
}

std::map<std::string, double> axis_totals(const Matrix& usd,
                                          const std::vector<std::string>& products,
                                          const std::vector<std::string>& countries,
                                          RankAxis axis) {
    std::map<std::string, double> totals;
    if (axis == RankAxis::Countries) {
        for (std::size_t c = 0; c < countries.size(); ++c) {
            double sum = 0.0;
            for (std::size_t p = 0; p < products.size(); ++p) sum += usd(p, c);
            totals[countries[c]] = sum;
        }
    } else {
        for (std::size_t p = 0; p < products.size(); ++p) {
            double sum = 0.0;
            for (std::size_t c = 0; c < countries.size(); ++c) sum += usd(p, c);
            totals[products[p]] = sum;
        }
    }
    return totals;
}

RankTable volume_rank(const Matrix& usd, const std::vector<std::string>& products,
                      const std::vector<std::string>& countries, RankAxis axis, int year,
                      Flow flow) {
    const auto totals = axis_totals(usd, products, countries, axis);

    std::vector<std::pair<std::string, double>> order(totals.begin(), totals.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    RankTable table{year, flow, RankScheme::Volume, axis, {}};
    for (std::size_t i = 0; i < order.size(); ++i)
        table.entries.push_back({static_cast<int>(i) + 1, order[i].first, order[i].second});
    return table;
}

RankSeries rank_series(std::span<const RankTable> tables) {
    if (tables.empty()) throw std::invalid_argument("rank_series needs at least one table");

    RankSeries series;
    series.scheme = tables.front().scheme;
    series.flow = tables.front().flow;
    series.axis = tables.front().axis;
    for (const auto& t : tables) {
        if (t.scheme != series.scheme) throw std::runtime_error("mixed schemes in rank series");
        if (t.flow != series.flow) throw std::runtime_error("mixed flows in rank series");
        if (t.axis != series.axis) throw std::runtime_error("mixed axes in rank series");
    }

    std::vector<const RankTable*> sorted;
    for (const auto& t : tables) sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(),
              [](const RankTable* a, const RankTable* b) { return a->year < b->year; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i]->year == sorted[i - 1]->year)
            throw std::runtime_error("duplicate year in rank series");

    std::map<std::string, std::size_t> label_index;
    for (const RankTable* t : sorted) {
        series.years.push_back(t->year);
        for (const auto& e : t->entries) {
            if (!label_index.count(e.label)) {
                label_index[e.label] = series.labels.size();
                series.labels.push_back(e.label);
            }
        }
    }

    series.ranks.assign(series.labels.size(),
                        std::vector<std::optional<int>>(series.years.size()));
    for (std::size_t y = 0; y < sorted.size(); ++y)
        for (const auto& e : sorted[y]->entries)
            series.ranks[label_index.at(e.label)][y] = e.rank;
    return series;
}

} // namespace ecolotrade
