#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ecolotrade {

/// Parameters of the bundled synthetic dataset generator. Country and
/// product "sizes" follow a power law (pdf ~ s^-2); the flow for
/// (product, exporter, importer) is size_exporter * size_importer *
/// size_product * noise, which yields naturally nested matrices once
/// thresholded.
struct SynthConfig {
    int countries = 30;
    int products = 20;
    std::vector<int> years = {2008};
    std::uint64_t seed = 0;
};

/// The generated dataset as CSV text in the ingestion schema
/// (`year,product,exporter,importer,value_usd`). Deterministic per config.
std::string synth_dataset(const SynthConfig& config);

void write_synth_dataset(const SynthConfig& config, const std::filesystem::path& path);

} // namespace ecolotrade
