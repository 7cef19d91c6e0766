#pragma once

#include "agripv/config.hpp"

namespace agripv {

// Loads weather and horizon per the config and assembles the shared
// simulation context.
YearContext build_context(const RunConfig& config);

// Fixed-decision simulation: hourly power, daily crop trace, yield summary,
// KPI table. All outputs land in config.output_dir.
void cmd_simulate(const RunConfig& config);

// Pareto optimization plus the analysis tables (archive, correlations, LER
// decomposition, decision densities).
void cmd_optimize(const RunConfig& config);

// One-variable sweep table: yields, specific production and LER terms per
// swept value.
void cmd_sweep(const RunConfig& config);

// Argument parsing and the exit-code contract: 0 ok, 2 config error, 3 data
// error, 4 numerical failure.
int run_cli(int argc, const char* const* argv);

} // namespace agripv
