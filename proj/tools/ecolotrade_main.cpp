// Command-line front end: per-year nestedness analyses, mu sweeps, null
// ensembles, rank series and synthetic dataset generation.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecolotrade/reports.hpp"
#include "ecolotrade/synth.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream ss(s);
    while (std::getline(ss, token, ','))
        if (!token.empty()) out.push_back(token);
    return out;
}

/// Parse a year selector like "2008", "1962-1970" or "1968,1978,1988".
std::vector<int> parse_years(const std::string& spec) {
    std::vector<int> years;
    for (const std::string& token : split_commas(spec)) {
        const auto dash = token.find('-', 1);
        if (dash == std::string::npos) {
            years.push_back(std::stoi(token));
        } else {
            const int from = std::stoi(token.substr(0, dash));
            const int to = std::stoi(token.substr(dash + 1));
            if (to < from) throw CLI::ValidationError("--years", "descending range " + token);
            for (int y = from; y <= to; ++y) years.push_back(y);
        }
    }
    return years;
}

void apply_flow(ecolotrade::RunConfig& config, const std::string& flow) {
    config.import_flow = flow == "import" || flow == "both";
    config.export_flow = flow == "export" || flow == "both";
}

void report(const ecolotrade::CommandOutcome& outcome) {
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << outcome.succeeded << " item(s) ok, " << outcome.failed << " failed, "
              << outcome.skipped << " skipped\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nestedness analysis of bipartite trade networks"};
    app.require_subcommand(1);

    ecolotrade::RunConfig config;
    std::string years_spec;
    std::string flow = "both";
    std::string mu_list_spec;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* in = cmd->add_option("--input", config.input, "Input CSV file");
        if (needs_input) in->required()->check(CLI::ExistingFile);
        cmd->add_option("--years", years_spec, "Year selector, e.g. 2008 or 1962-1970,1988");
        cmd->add_option("--flow", flow, "import, export or both")
            ->check(CLI::IsMember({"import", "export", "both"}));
        cmd->add_option("--mu", config.mu, "Trade threshold in (0,1)")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--seed", config.seed, "Master RNG seed");
        cmd->add_option("--generations", config.budget.generations, "Optimizer generation cap")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--stagnation", config.budget.stagnation,
                        "Stop after this many generations without improvement")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out-dir", config.out_dir, "Output directory");
        return cmd;
    };

    auto* analyze = add_common(app.add_subcommand("analyze", "Per-year nestedness analysis"), true);
    analyze->add_flag("--svg", config.svg, "Also write a heatmap SVG per (year, flow)");
    analyze->add_flag("--volume-order", config.volume_order,
                      "Order the heatmap by trade volume instead of the packed order");

    auto* sweep = add_common(app.add_subcommand("sweep-mu", "phi and T across thresholds"), true);
    sweep->add_option("--mu-list", mu_list_spec, "Comma-separated thresholds")->required();

    auto* null_cmd = add_common(app.add_subcommand("null", "Random-ensemble baseline"), true);
    null_cmd->add_option("--realizations", config.realizations, "Matrices per ensemble")
        ->check(CLI::PositiveNumber);
    null_cmd->add_flag("--fast-null", config.fast_null, "Reduced optimizer budget for nulls");

    auto* series = add_common(app.add_subcommand("rank-series", "Multi-year rank tables"), true);
    series->add_option("--top-k", config.top_k, "Keep ranks <= k (default 20 countries, 10 products)")
        ->check(CLI::PositiveNumber);

    ecolotrade::SynthConfig synth;
    std::filesystem::path synth_output = "synth.csv";
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth_cmd->add_option("--countries", synth.countries, "Number of countries")
        ->check(CLI::Range(2, 100000));
    synth_cmd->add_option("--products", synth.products, "Number of products")
        ->check(CLI::Range(2, 100000));
    synth_cmd->add_option("--years", years_spec, "Year selector");
    synth_cmd->add_option("--seed", synth.seed, "Generator seed");
    synth_cmd->add_option("--output", synth_output, "Output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!years_spec.empty()) config.years = parse_years(years_spec);
        apply_flow(config, flow);

        ecolotrade::CommandOutcome outcome;
        if (app.got_subcommand("analyze")) {
            outcome = ecolotrade::cmd_analyze(config);
        } else if (app.got_subcommand("sweep-mu")) {
            for (const std::string& tok : split_commas(mu_list_spec))
                config.mu_list.push_back(std::stod(tok));
            outcome = ecolotrade::cmd_sweep_mu(config);
        } else if (app.got_subcommand("null")) {
            outcome = ecolotrade::cmd_null(config);
        } else if (app.got_subcommand("rank-series")) {
            outcome = ecolotrade::cmd_rank_series(config);
        } else if (app.got_subcommand("synth")) {
            if (!config.years.empty()) synth.years = config.years;
            ecolotrade::write_synth_dataset(synth, synth_output);
            std::cerr << "wrote " << synth_output.string() << "\n";
            return 0;
        }

        report(outcome);
        return outcome.ok() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
