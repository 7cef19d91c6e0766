#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agripv/crop.hpp"
#include "agripv/kpi.hpp"
#include "agripv/optimizer.hpp"
#include "agripv/pipeline.hpp"
#include "agripv/shading.hpp"

namespace agripv {

struct SweepConfig {
    std::string variable = "distance";  // or "azimuth"
    double from = 5.0;
    double to = 20.0;
    double step = 1.0;
};

// Fully validated run description loaded from a JSON config file (// and /* */
// comments allowed). Unknown keys are rejected so typos cannot silently fall
// back to defaults.
struct RunConfig {
    Site site;
    std::string weather_path;
    std::string horizon_path;  // empty: flat horizon
    std::string output_dir = "out";
    SceneConfig scene;
    PvSystemConfig pv;
    SoilParams soil;
    std::vector<CropParams> crops;
    std::size_t optimize_crop = 0;  // index into crops
    double par_fill_ratio = 0.45;
    EnergyBasis energy_basis = EnergyBasis::PerArea;
    int block_deg = 3;
    OptimizerConfig optimizer;
    SweepConfig sweep;
    std::uint64_t config_hash = 0;  // FNV-1a of the canonical JSON dump
};

RunConfig load_config(const std::string& path);

// Validation applied by load_config, usable on programmatically built
// configs too. Checks every block and that referenced files exist.
void validate_config(const RunConfig& config);

} // namespace agripv
