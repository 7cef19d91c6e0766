#pragma once

#include <cstdint>
#include <string>

#include "agripv/common.hpp"
#include "agripv/shading.hpp"

namespace agripv {

// Reference system constants: a conventional ground-mounted array at 35 deg
// tilt and 5 m pitch in the same region yields about 1000 kWh/kWp and
// 58 kWh/m2 of occupied land per year.
inline constexpr double kReferenceSpecificYieldKwhPerKwp = 1000.0;
inline constexpr double kReferenceEnergyDensityKwhPerM2 = 58.0;

// Which denominator the LER electricity term uses. PerArea compares
// kWh/m2/year against the ground-mount density; PerCapacity compares
// kWh/kWp/year against the ground-mount specific yield.
enum class EnergyBasis { PerArea, PerCapacity };

struct KpiResult {
    double ler = 0.0;
    double ler_crop_term = 0.0;
    double ler_pv_term = 0.0;
    double std_kw = 0.0;
    double annual_energy_kwh = 0.0;
    double energy_density_kwh_m2 = 0.0;
    // Provenance of the inputs this row was computed from.
    std::uint64_t scene_hash = 0;
    std::uint64_t weather_hash = 0;
    std::string crop;
};

// Land Equivalent Ratio, the sum of the crop and electricity land-use
// ratios. References must be positive; negative production is rejected.
KpiResult land_equivalent_ratio(double yield_agri_t_ha, double yield_ref_t_ha,
                                double energy_agri, double energy_ref);

// Annual energy over occupied land area (rows * spacing * row length).
double agrivoltaic_energy_density(double annual_energy_kwh, const SceneConfig& scene);

struct ReferencePvEnergy {
    double annual_kwh = 0.0;
    double density_kwh_m2 = kReferenceEnergyDensityKwhPerM2;
};

ReferencePvEnergy reference_pv_energy(double capacity_kwp);

// Electricity term of the LER under the chosen basis.
double ler_pv_term(double annual_energy_kwh, const SceneConfig& scene, double capacity_kwp,
                   EnergyBasis basis);

} // namespace agripv
