#pragma once

#include <string>
#include <vector>

#include "agripv/common.hpp"
#include "agripv/timeutil.hpp"
#include "agripv/weather.hpp"

namespace agripv {

// EPIC-style crop parameter set. The two LAI curve points use the EPIC
// encoding percent.fraction: 15.01 decodes to (0.15 of season heat units,
// 0.01 of max LAI).
struct CropParams {
    std::string name = "oat";
    double harvest_index = 0.42;        // HIA0, applied to seasonal biomass
    double biomass_energy_ratio = 35.0; // (kg/ha) per (MJ/m2) intercepted PAR
    double t_base_c = 0.0;
    double t_opt_c = 15.0;
    double lai_max = 5.0;
    double water_stress_yield_factor = 0.21;
    double lai_decline_exponent = 1.0;
    double decline_start_fraction = 0.8; // HUI where LAI decline begins
    double lai_curve_point_1 = 15.01;
    double lai_curve_point_2 = 50.95;
    double potential_heat_units = 1500.0; // degC day
    int sowing_month = 4;
    int sowing_day = 15;
    int harvest_month = 8;
    int harvest_day = 20;
};

CropParams oat_params();
CropParams potato_params();

void validate_crop(const CropParams& params);

// Root-zone water bucket, FAO-56 single-layer budget. Storage is
// plant-available water between wilting point and field capacity.
struct SoilParams {
    double rooting_depth_m = 0.6;
    double available_water_mm_per_m = 150.0;
    double depletion_fraction = 0.5; // readily-available share of total
    double crop_coefficient = 1.0;
};

struct SoilBucket {
    double field_capacity_mm = 90.0;
    double wilting_point_mm = 0.0;
    double current_storage_mm = 90.0;
    double rooting_depth_m = 0.6;
    double depletion_fraction = 0.5;

    static SoilBucket from_params(const SoilParams& p);
};

// Decoded (fraction of season, fraction of max LAI) pair.
struct LaiCurvePoint {
    double season_fraction = 0.0;
    double lai_fraction = 0.0;
};

LaiCurvePoint decode_curve_point(double encoded);

// Logistic coefficients l1, l2 of HUF(f) = f / (f + exp(l1 - l2 f)), solved
// so the curve passes through both decoded points.
struct LaiCurve {
    double l1 = 0.0;
    double l2 = 0.0;
};

LaiCurve solve_lai_curve(const CropParams& params);

// Daily heat unit above base temperature.
double heat_unit(double t_max, double t_min, double t_base);

// LAI at heat-unit index hui: logistic growth up to decline_start_fraction,
// power-law decline to zero at maturity.
double lai_curve(double hui, const CropParams& params, const LaiCurve& curve);

// EPIC sine response, 1 at t_opt, 0 at t_base and symmetrically at
// 2*t_opt - t_base.
double temperature_stress(double t_mean, const CropParams& params);

// Hargreaves-Samani reference evapotranspiration, mm/day. ra_mj is the
// extraterrestrial daily irradiation in MJ/m2.
double et0_hargreaves(double t_mean, double t_max, double t_min, double ra_mj);

// Advances the bucket by one day (precipitation in, crop water use out) and
// returns the transpiration reduction factor in [0,1]: 1 above the readily-
// available threshold, linear down to 0 at wilting point.
double water_stress(SoilBucket& bucket, double et0_mm, double precip_mm,
                    double crop_coefficient);

// Daily light-limited biomass gain, t/ha: BE * 0.001 * PAR * Beer-law
// interception at extinction 0.65 * growth regulating factor.
double biomass_increment(double biomass_energy_ratio, double par_tot_mj, double lai,
                         double gamma);

// One day of driving data for the season loop. par_tot_mj is the
// shade-reduced PAR reaching the crop strip.
struct DailyCropInput {
    CivilDate date;
    int doy = 0;
    double t_max = 0.0;
    double t_min = 0.0;
    double t_mean = 0.0;
    double precip_mm = 0.0;
    double par_tot_mj = 0.0;
    double ra_mj = 0.0;
};

struct DailyCropState {
    CivilDate date;
    int doy = 0;
    double heat_unit = 0.0;
    double hui = 0.0;
    double lai = 0.0;
    double stress_water = 1.0;
    double stress_temperature = 1.0;
    double stress_aeration = 1.0; // pinned; optimal soil aeration assumed
    double stress_nutrient = 1.0; // pinned; optimal nutrient management assumed
    double gamma = 1.0;           // min of the four stresses
    double et0_mm = 0.0;
    double par_tot_mj = 0.0;
    double biomass_t_ha = 0.0; // increment this day
};

struct SeasonResult {
    double yield_t_ha = 0.0;
    double biomass_t_ha = 0.0;      // cumulative light-limited biomass
    double harvest_index_used = 0.0; // after water-stress adjustment
    std::vector<DailyCropState> days;
};

// Runs the season over consecutive daily inputs. The caller selects the
// sowing..harvest window; days must be consecutive calendar days.
SeasonResult run_season(const CropParams& params, const SoilParams& soil,
                        const std::vector<DailyCropInput>& days);

// True when the date falls inside the sowing..harvest window (inclusive).
bool in_season(const CropParams& params, const CivilDate& date);

} // namespace agripv
