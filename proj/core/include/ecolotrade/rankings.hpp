#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecolotrade/nestedness.hpp"

namespace ecolotrade {

enum class RankScheme { Ecolo, Volume };
enum class RankAxis { Countries, Products };

const char* to_string(RankScheme scheme);

struct RankEntry {
    int rank = 0; // 1 = top
    std::string label;
    double score = 0.0; // packed position (ecolo) or USD total (volume)
};

struct RankTable {
    int year = 0;
    Flow flow = Flow::Import;
    RankScheme scheme = RankScheme::Ecolo;
    RankAxis axis = RankAxis::Countries;
    std::vector<RankEntry> entries; // ranks 1..N, labels unique
};

/// Rankings read off the packed matrix: top row is country rank 1, leftmost
/// column is product rank 1. Labels dropped by trim_empty come after all
/// packed labels, ordered by descending volume (ties by label).
/// Returns {country table, product table}.
std::pair<RankTable, RankTable> ecolo_rank(const AnalysisResult& analysis,
                                           const std::map<std::string, double>& country_volumes,
                                           const std::map<std::string, double>& product_volumes,
                                           int year);

/// Labels ranked by descending total USD along one axis of a product-major
/// USD matrix; ties by label.
RankTable volume_rank(const Matrix& usd, const std::vector<std::string>& products,
                      const std::vector<std::string>& countries, RankAxis axis, int year,
                      Flow flow);

/// Axis totals used both for volume ranking and for ordering dropped labels.
std::map<std::string, double> axis_totals(const Matrix& usd,
                                          const std::vector<std::string>& products,
                                          const std::vector<std::string>& countries,
                                          RankAxis axis);

/// Label-joined rank time series. Labels missing from a year carry no rank.
struct RankSeries {
    RankScheme scheme = RankScheme::Ecolo;
    Flow flow = Flow::Import;
    RankAxis axis = RankAxis::Countries;
    std::vector<int> years;         // ascending
    std::vector<std::string> labels; // union over years, first-appearance order
    // ranks[label_index][year_index]
    std::vector<std::vector<std::optional<int>>> ranks;

    std::optional<int> rank_of(std::size_t label_index, std::size_t year_index) const {
        return ranks[label_index][year_index];
    }
};

/// Join per-year tables (all sharing scheme, flow and axis) into a series.
/// Throws on mixed schemes/flows/axes or duplicate years.
RankSeries rank_series(std::span<const RankTable> tables);

} // namespace ecolotrade
