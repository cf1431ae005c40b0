#include "ecolotrade/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ecolotrade/null_models.hpp"
#include "ecolotrade/parallel.hpp"
#include "ecolotrade/rankings.hpp"
#include "ecolotrade/rng.hpp"
#include "ecolotrade/svg.hpp"
#include "ecolotrade/trade_ingest.hpp"

using nlohmann::json;

namespace ecolotrade {

namespace {

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

/// Stable per-work-item seed: depends on the master seed, year and flow only,
/// never on which other items happen to be selected.
std::uint64_t item_seed(std::uint64_t master, int year, Flow flow) {
    return derive_seed(derive_seed(master, static_cast<std::uint64_t>(year)),
                       flow == Flow::Import ? 1 : 2);
}

struct WorkItem {
    int year = 0;
    Flow flow = Flow::Import;
};

std::vector<WorkItem> make_items(const RunConfig& config, const std::vector<int>& years) {
    std::vector<WorkItem> items;
    for (int year : years)
        for (Flow flow : selected_flows(config)) items.push_back({year, flow});
    return items;
}

struct ItemStatus {
    bool succeeded = false;
    bool skipped = false;
    std::vector<std::string> files;
    std::string message;
};

/// Shared per-item pipeline front end: records -> normalized matrices.
/// Throws; "empty year" is translated by callers into a skip.
TradeMatrixPair year_matrices(const std::vector<TradeRecord>& records, int year,
                              UsdMatrixPair* usd_out) {
    FlowTensor tensor = build_flow_tensor(records, year);
    UsdMatrixPair usd = aggregate(tensor);
    TradeMatrixPair pair = normalize(tensor, usd);
    if (usd_out) *usd_out = std::move(usd);
    return pair;
}

bool is_empty_year_error(const std::string& what) {
    return what.rfind("empty year", 0) == 0;
}

json rank_table_json(const RankTable& table) {
    json arr = json::array();
    for (const auto& e : table.entries)
        arr.push_back(json{{"label", e.label}, {"rank", e.rank}, {"score", e.score}});
    return arr;
}

CommandOutcome reduce_items(const RunConfig& config, const std::string& command,
                            const std::vector<ItemStatus>& status) {
    CommandOutcome out;
    for (const auto& s : status) {
        if (s.skipped) {
            ++out.skipped;
            out.warnings.push_back(s.message);
        } else if (s.succeeded) {
            ++out.succeeded;
            for (const auto& f : s.files) out.outputs.push_back(f);
        } else {
            ++out.failed;
            out.warnings.push_back(s.message);
        }
    }
    std::sort(out.outputs.begin(), out.outputs.end());

    json index;
    index["v"] = 1;
    index["command"] = command;
    index["outputs"] = out.outputs;
    index["warnings"] = out.warnings;
    const std::string index_name = "index_" + command + ".json";
    write_text_file(config.out_dir / index_name, index.dump(2) + "\n");
    out.outputs.push_back(index_name);
    return out;
}

std::vector<int> resolve_years(const RunConfig& config, const std::vector<TradeRecord>& records) {
    if (!config.years.empty()) return config.years;
    return list_years(records);
}

std::string item_name(const WorkItem& item) {
    return std::to_string(item.year) + "_" + to_string(item.flow);
}

Ordering volume_ordering(const BinaryMatrix& q, const std::map<std::string, double>& country_vol,
                         const std::map<std::string, double>& product_vol) {
    Ordering ord = Ordering::identity(q.rows(), q.cols());
    auto sort_by_volume = [](std::vector<std::size_t>& perm,
                             const std::vector<std::string>& labels,
                             const std::map<std::string, double>& vol) {
        std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            const double va = vol.count(labels[a]) ? vol.at(labels[a]) : 0.0;
            const double vb = vol.count(labels[b]) ? vol.at(labels[b]) : 0.0;
            if (va != vb) return va > vb;
            return labels[a] < labels[b];
        });
    };
    sort_by_volume(ord.row_perm, q.row_labels, country_vol);
    sort_by_volume(ord.col_perm, q.col_labels, product_vol);
    return ord;
}

} // namespace

std::vector<Flow> selected_flows(const RunConfig& config) {
    std::vector<Flow> flows;
    if (config.import_flow) flows.push_back(Flow::Import);
    if (config.export_flow) flows.push_back(Flow::Export);
    if (flows.empty()) throw std::invalid_argument("no flow selected");
    return flows;
}

CommandOutcome cmd_analyze(const RunConfig& config) {
    const std::vector<TradeRecord> records = load_records(config.input);
    const std::vector<int> years = resolve_years(config, records);
    const std::vector<WorkItem> items = make_items(config, years);
    std::filesystem::create_directories(config.out_dir);

    std::vector<ItemStatus> status(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const WorkItem& item = items[i];
        ItemStatus& st = status[i];
        try {
            UsdMatrixPair usd;
            const TradeMatrixPair pair = year_matrices(records, item.year, &usd);
            const BinaryMatrix q = threshold(pair, config.mu, item.flow);
            const double phi = fill_fraction(q);

            const AnalysisResult analysis =
                analyze(q, config.budget, item_seed(config.seed, item.year, item.flow));

            const Matrix& usd_side = item.flow == Flow::Import ? usd.imports : usd.exports;
            const auto country_vol =
                axis_totals(usd_side, pair.products, pair.countries, RankAxis::Countries);
            const auto product_vol =
                axis_totals(usd_side, pair.products, pair.countries, RankAxis::Products);

            const auto [country_ecolo, product_ecolo] =
                ecolo_rank(analysis, country_vol, product_vol, item.year);
            const RankTable country_volume = volume_rank(usd_side, pair.products, pair.countries,
                                                         RankAxis::Countries, item.year, item.flow);
            const RankTable product_volume = volume_rank(usd_side, pair.products, pair.countries,
                                                         RankAxis::Products, item.year, item.flow);

            const NestednessResult& n = analysis.nested;
            json doc;
            doc["v"] = 1;
            doc["year"] = item.year;
            doc["flow"] = to_string(item.flow);
            doc["mu"] = config.mu;
            doc["phi"] = phi;
            doc["temperature"] = n.temperature;
            doc["eta"] = n.eta;
            doc["seed"] = config.seed;
            doc["budget"] = {{"generations", config.budget.generations},
                             {"stagnation", config.budget.stagnation}};
            json row_order = json::array(), col_order = json::array();
            for (std::size_t k : n.ordering.row_perm)
                row_order.push_back(analysis.trimmed.row_labels[k]);
            for (std::size_t l : n.ordering.col_perm)
                col_order.push_back(analysis.trimmed.col_labels[l]);
            doc["row_order"] = std::move(row_order);
            doc["col_order"] = std::move(col_order);
            doc["dropped_rows"] = analysis.dropped_rows;
            doc["dropped_cols"] = analysis.dropped_cols;
            if (n.clamped) doc["clamped"] = true;
            doc["ranks"] = {{"countries",
                             {{"ecolo", rank_table_json(country_ecolo)},
                              {"volume", rank_table_json(country_volume)}}},
                            {"products",
                             {{"ecolo", rank_table_json(product_ecolo)},
                              {"volume", rank_table_json(product_volume)}}}};

            const std::string json_name = "analysis_" + item_name(item) + ".json";
            write_text_file(config.out_dir / json_name, doc.dump(2) + "\n");
            st.files.push_back(json_name);

            if (config.svg) {
                HeatmapOptions opt;
                std::string svg_text;
                if (config.volume_order) {
                    opt.title = "WTN " + std::to_string(item.year) + " " + to_string(item.flow) +
                                " (volume order)";
                    svg_text = heatmap_svg(q, volume_ordering(q, country_vol, product_vol), opt);
                } else {
                    opt.isocline_p = n.isocline_p;
                    opt.title = "WTN " + std::to_string(item.year) + " " + to_string(item.flow) +
                                "  T=" + format_g(n.temperature);
                    svg_text = heatmap_svg(analysis.trimmed, n.ordering, opt);
                }
                const std::string svg_name = "heatmap_" + item_name(item) + ".svg";
                write_text_file(config.out_dir / svg_name, svg_text);
                st.files.push_back(svg_name);
            }
            st.succeeded = true;
        } catch (const std::exception& e) {
            if (is_empty_year_error(e.what())) {
                st.skipped = true;
                st.message = "year " + std::to_string(item.year) + ": no records, skipped";
            } else {
                st.message = item_name(item) + ": " + e.what();
            }
        }
    });

    return reduce_items(config, "analyze", status);
}

CommandOutcome cmd_sweep_mu(const RunConfig& config) {
    if (config.mu_list.empty()) throw std::invalid_argument("sweep-mu needs a non-empty mu list");
    for (double mu : config.mu_list)
        if (!(mu > 0.0 && mu < 1.0))
            throw std::invalid_argument("mu values must lie in (0,1)");

    std::vector<double> mus = config.mu_list;
    std::sort(mus.begin(), mus.end());

    const std::vector<TradeRecord> records = load_records(config.input);
    const std::vector<int> years = resolve_years(config, records);
    const std::vector<WorkItem> items = make_items(config, years);
    std::filesystem::create_directories(config.out_dir);

    std::vector<ItemStatus> status(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const WorkItem& item = items[i];
        ItemStatus& st = status[i];
        try {
            const TradeMatrixPair pair = year_matrices(records, item.year, nullptr);
            std::ostringstream csv;
            csv << "mu,phi,temperature\n";
            int rows = 0;
            std::string mu_errors;
            for (std::size_t m = 0; m < mus.size(); ++m) {
                try {
                    const BinaryMatrix q = threshold(pair, mus[m], item.flow);
                    const double phi = fill_fraction(q);
                    const AnalysisResult a = analyze(
                        q, config.budget,
                        derive_seed(item_seed(config.seed, item.year, item.flow), m));
                    csv << format_g(mus[m]) << ',' << format_g(phi) << ','
                        << format_g(a.nested.temperature) << '\n';
                    ++rows;
                } catch (const std::exception& e) {
                    mu_errors += item_name(item) + " mu=" + format_g(mus[m]) + ": " + e.what();
                    mu_errors += "; ";
                }
            }
            if (rows == 0)
                throw std::runtime_error("no mu value analyzable (" + mu_errors + ")");
            const std::string name = "sweep_" + item_name(item) + ".csv";
            write_text_file(config.out_dir / name, csv.str());
            st.files.push_back(name);
            if (!mu_errors.empty()) st.message = mu_errors;
            st.succeeded = true;
        } catch (const std::exception& e) {
            if (is_empty_year_error(e.what())) {
                st.skipped = true;
                st.message = "year " + std::to_string(item.year) + ": no records, skipped";
            } else {
                st.message = item_name(item) + ": " + e.what();
            }
        }
    });

    CommandOutcome out = reduce_items(config, "sweep-mu", status);
    for (auto& s : status)
        if (s.succeeded && !s.message.empty()) out.warnings.push_back(s.message);
    return out;
}

CommandOutcome cmd_null(const RunConfig& config) {
    const std::vector<TradeRecord> records = load_records(config.input);
    const std::vector<int> years = resolve_years(config, records);
    const std::vector<WorkItem> items = make_items(config, years);
    std::filesystem::create_directories(config.out_dir);

    const OptimizerBudget budget = config.fast_null ? fast_null_budget() : config.budget;

    std::vector<ItemStatus> status(items.size());
    // With several items the realization loop inside null_ensemble detects
    // the outer workers and stays serial.
    parallel_for(
        items.size(),
        [&](std::size_t i) {
            const WorkItem& item = items[i];
            ItemStatus& st = status[i];
            try {
                const TradeMatrixPair pair = year_matrices(records, item.year, nullptr);
                const BinaryMatrix q = threshold(pair, config.mu, item.flow);
                const double phi = fill_fraction(q);
                const NullEnsembleSummary s =
                    null_ensemble(q.rows(), q.cols(), phi, config.realizations, budget,
                                  item_seed(config.seed, item.year, item.flow));

                json doc;
                doc["v"] = 1;
                doc["year"] = item.year;
                doc["flow"] = to_string(item.flow);
                doc["mu"] = config.mu;
                doc["realizations"] = s.realizations;
                doc["matched_shape"] = {s.shape_rows, s.shape_cols};
                doc["matched_fill"] = s.matched_fill;
                doc["mean"] = s.mean;
                doc["std_dev"] = s.std_dev;
                doc["min"] = s.min;
                doc["max"] = s.max;
                doc["temperatures"] = s.temperatures;
                doc["budget"] = {{"generations", budget.generations},
                                 {"stagnation", budget.stagnation}};
                doc["seed"] = config.seed;

                const std::string json_name = "null_" + item_name(item) + ".json";
                write_text_file(config.out_dir / json_name, doc.dump(2) + "\n");
                st.files.push_back(json_name);

                std::ostringstream hist;
                hist << "bin_lower_edge,count\n";
                for (const auto& [edge, count] : s.histogram)
                    hist << format_g(edge) << ',' << count << '\n';
                const std::string hist_name = "null_" + item_name(item) + "_hist.csv";
                write_text_file(config.out_dir / hist_name, hist.str());
                st.files.push_back(hist_name);
                st.succeeded = true;
            } catch (const std::exception& e) {
                if (is_empty_year_error(e.what())) {
                    st.skipped = true;
                    st.message = "year " + std::to_string(item.year) + ": no records, skipped";
                } else {
                    st.message = item_name(item) + ": " + e.what();
                }
            }
        });

    return reduce_items(config, "null", status);
}

namespace {

/// Emit one scheme's series rows: per year the entries ranked <= k, plus an
/// empty-rank row for any selected label missing from that year entirely.
void emit_series_rows(std::ostringstream& csv, const RankSeries& series, int k) {
    std::set<std::size_t> selected;
    for (std::size_t li = 0; li < series.labels.size(); ++li)
        for (std::size_t yi = 0; yi < series.years.size(); ++yi)
            if (series.ranks[li][yi] && *series.ranks[li][yi] <= k) {
                selected.insert(li);
                break;
            }

    for (std::size_t yi = 0; yi < series.years.size(); ++yi) {
        std::vector<std::pair<int, std::size_t>> with_rank;
        std::vector<std::size_t> missing;
        for (std::size_t li : selected) {
            const auto& r = series.ranks[li][yi];
            if (!r)
                missing.push_back(li);
            else if (*r <= k)
                with_rank.emplace_back(*r, li);
        }
        std::sort(with_rank.begin(), with_rank.end());
        std::sort(missing.begin(), missing.end(), [&](std::size_t a, std::size_t b) {
            return series.labels[a] < series.labels[b];
        });
        for (const auto& [rank, li] : with_rank)
            csv << series.years[yi] << ',' << rank << ',' << series.labels[li] << ','
                << to_string(series.scheme) << '\n';
        for (std::size_t li : missing)
            csv << series.years[yi] << ",," << series.labels[li] << ','
                << to_string(series.scheme) << '\n';
    }
}

} // namespace

CommandOutcome cmd_rank_series(const RunConfig& config) {
    const std::vector<TradeRecord> records = load_records(config.input);
    const std::vector<int> years = resolve_years(config, records);
    const std::vector<WorkItem> items = make_items(config, years);
    std::filesystem::create_directories(config.out_dir);

    struct ItemTables {
        bool ok = false;
        bool skipped = false;
        std::string message;
        RankTable country_ecolo, product_ecolo, country_volume, product_volume;
    };
    std::vector<ItemTables> tables(items.size());

    parallel_for(items.size(), [&](std::size_t i) {
        const WorkItem& item = items[i];
        ItemTables& t = tables[i];
        try {
            UsdMatrixPair usd;
            const TradeMatrixPair pair = year_matrices(records, item.year, &usd);
            const BinaryMatrix q = threshold(pair, config.mu, item.flow);
            const AnalysisResult analysis =
                analyze(q, config.budget, item_seed(config.seed, item.year, item.flow));
            const Matrix& usd_side = item.flow == Flow::Import ? usd.imports : usd.exports;
            const auto country_vol =
                axis_totals(usd_side, pair.products, pair.countries, RankAxis::Countries);
            const auto product_vol =
                axis_totals(usd_side, pair.products, pair.countries, RankAxis::Products);
            std::tie(t.country_ecolo, t.product_ecolo) =
                ecolo_rank(analysis, country_vol, product_vol, item.year);
            t.country_volume = volume_rank(usd_side, pair.products, pair.countries,
                                           RankAxis::Countries, item.year, item.flow);
            t.product_volume = volume_rank(usd_side, pair.products, pair.countries,
                                           RankAxis::Products, item.year, item.flow);
            t.ok = true;
        } catch (const std::exception& e) {
            if (is_empty_year_error(e.what())) {
                t.skipped = true;
                t.message = "year " + std::to_string(item.year) + ": no records, skipped";
            } else {
                t.message = item_name(item) + ": " + e.what();
            }
        }
    });

    // Join and emit per flow, single-threaded.
    std::vector<ItemStatus> status;
    for (Flow flow : selected_flows(config)) {
        ItemStatus st;
        std::vector<RankTable> ce, pe, cv, pv;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i].flow != flow) continue;
            if (tables[i].skipped) {
                ItemStatus skip;
                skip.skipped = true;
                skip.message = tables[i].message;
                status.push_back(skip);
                continue;
            }
            if (!tables[i].ok) {
                ItemStatus fail;
                fail.message = tables[i].message;
                status.push_back(fail);
                continue;
            }
            ce.push_back(tables[i].country_ecolo);
            pe.push_back(tables[i].product_ecolo);
            cv.push_back(tables[i].country_volume);
            pv.push_back(tables[i].product_volume);
        }
        if (ce.empty()) continue;

        const int country_k = config.top_k > 0 ? config.top_k : 20;
        const int product_k = config.top_k > 0 ? config.top_k : 10;

        std::ostringstream countries_csv;
        countries_csv << "year,rank,label,scheme\n";
        emit_series_rows(countries_csv, rank_series(ce), country_k);
        emit_series_rows(countries_csv, rank_series(cv), country_k);
        const std::string cname = std::string("rank_series_countries_") + to_string(flow) + ".csv";
        write_text_file(config.out_dir / cname, countries_csv.str());
        st.files.push_back(cname);

        std::ostringstream products_csv;
        products_csv << "year,rank,label,scheme\n";
        emit_series_rows(products_csv, rank_series(pe), product_k);
        emit_series_rows(products_csv, rank_series(pv), product_k);
        const std::string pname = std::string("rank_series_products_") + to_string(flow) + ".csv";
        write_text_file(config.out_dir / pname, products_csv.str());
        st.files.push_back(pname);

        st.succeeded = true;
        status.push_back(st);
    }

    return reduce_items(config, "rank-series", status);
}

} // namespace ecolotrade
