#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ecolotrade/mutualistic.hpp"
#include "ecolotrade/nestedness.hpp"

namespace ecolotrade {

/// Everything a command run needs; populated from CLI flags.
struct RunConfig {
    std::filesystem::path input;
    std::vector<int> years;    // empty = every year found in the input
    bool import_flow = true;
    bool export_flow = true;
    double mu = 1e-3;          // the workhorse trade threshold
    std::vector<double> mu_list;
    std::uint64_t seed = 0;    // reproducibility is the product: default 0, not entropy
    OptimizerBudget budget;
    int realizations = 500;
    bool fast_null = false;
    int top_k = 0;             // 0 = defaults (20 for countries, 10 for products)
    std::filesystem::path out_dir = ".";
    bool svg = false;
    bool volume_order = false; // volume-sorted heatmap instead of the packed one
};

std::vector<Flow> selected_flows(const RunConfig& config);

/// Per-command bookkeeping. A run is usable (exit 0) when at least one work
/// item succeeded; empty years are warnings, not failures.
struct CommandOutcome {
    int succeeded = 0;
    int failed = 0;
    int skipped = 0;
    std::vector<std::string> outputs; // file names relative to out_dir
    std::vector<std::string> warnings;

    bool ok() const { return succeeded > 0; }
};

/// Per (year, flow): JSON result document (phi, T, eta, orderings, rank
/// tables) and optionally an SVG heatmap.
CommandOutcome cmd_analyze(const RunConfig& config);

/// Per (year, flow): CSV of (mu, phi, T) rows over config.mu_list, mu ascending.
CommandOutcome cmd_sweep_mu(const RunConfig& config);

/// Per (year, flow): null-ensemble summary JSON plus histogram CSV.
CommandOutcome cmd_null(const RunConfig& config);

/// Per flow: long-format CSV rank series (year, rank, label, scheme) for
/// countries and for products, top-k filtered.
CommandOutcome cmd_rank_series(const RunConfig& config);

} // namespace ecolotrade
