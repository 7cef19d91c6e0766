#include "agripv/crop.hpp"

#include <algorithm>
#include <cmath>

namespace agripv {

CropParams oat_params() {
    CropParams p;
    p.name = "oat";
    p.harvest_index = 0.42;
    p.biomass_energy_ratio = 35.0;
    p.t_base_c = 0.0;
    p.t_opt_c = 15.0;
    p.lai_max = 5.0;
    p.water_stress_yield_factor = 0.21;
    p.lai_decline_exponent = 1.0;
    p.decline_start_fraction = 0.8;
    p.lai_curve_point_1 = 15.01;
    p.lai_curve_point_2 = 50.95;
    // Matches the bundled weather year: HUI reaches ~1 by the Aug 20 harvest.
    p.potential_heat_units = 1700.0;
    p.sowing_month = 4;
    p.sowing_day = 15;
    p.harvest_month = 8;
    p.harvest_day = 20;
    return p;
}

CropParams potato_params() {
    CropParams p;
    p.name = "potato";
    p.harvest_index = 0.95; // tuber convention: yield ~ total tuber biomass
    p.biomass_energy_ratio = 30.0;
    p.t_base_c = 7.0;
    p.t_opt_c = 20.0;
    p.lai_max = 5.0;
    p.water_stress_yield_factor = 0.95;
    p.lai_decline_exponent = 2.0;
    p.decline_start_fraction = 0.6;
    p.lai_curve_point_1 = 15.01;
    p.lai_curve_point_2 = 50.95;
    // Matches the bundled weather year: HUI reaches ~1 by the Sep 15 harvest.
    p.potential_heat_units = 960.0;
    p.sowing_month = 5;
    p.sowing_day = 5;
    p.harvest_month = 9;
    p.harvest_day = 15;
    return p;
}

LaiCurvePoint decode_curve_point(double encoded) {
    const double ip = std::floor(encoded);
    LaiCurvePoint p;
    p.season_fraction = ip / 100.0;
    // Round to two decimals: the encoding carries exactly two.
    p.lai_fraction = std::round((encoded - ip) * 100.0) / 100.0;
    return p;
}

void validate_crop(const CropParams& params) {
    if (!(params.harvest_index > 0.0 && params.harvest_index <= 1.0))
        throw ConfigError(params.name + ": harvest_index must lie in (0, 1]");
    if (!(params.biomass_energy_ratio > 0.0))
        throw ConfigError(params.name + ": biomass_energy_ratio must be positive");
    if (!(params.t_base_c < params.t_opt_c))
        throw ConfigError(params.name + ": t_base must be below t_opt");
    if (!(params.lai_max > 0.0))
        throw ConfigError(params.name + ": lai_max must be positive");
    if (params.water_stress_yield_factor < 0.0 || params.water_stress_yield_factor > 1.0)
        throw ConfigError(params.name + ": water_stress_yield_factor must lie in [0, 1]");
    if (params.lai_decline_exponent < 0.0)
        throw ConfigError(params.name + ": lai_decline_exponent must be non-negative");
    if (!(params.decline_start_fraction > 0.0 && params.decline_start_fraction < 1.0))
        throw ConfigError(params.name + ": decline_start_fraction must lie in (0, 1)");
    if (!(params.potential_heat_units > 0.0))
        throw ConfigError(params.name + ": potential_heat_units must be positive");
    const LaiCurvePoint p1 = decode_curve_point(params.lai_curve_point_1);
    const LaiCurvePoint p2 = decode_curve_point(params.lai_curve_point_2);
    if (!(p1.season_fraction > 0.0 && p1.season_fraction < p2.season_fraction &&
          p2.season_fraction < 1.0))
        throw ConfigError(params.name + ": curve points must decode to increasing season fractions");
    if (!(p1.lai_fraction > 0.0 && p1.lai_fraction < p2.lai_fraction && p2.lai_fraction < 1.0))
        throw ConfigError(params.name + ": curve points must decode to increasing LAI fractions");
    auto valid_date = [](int month, int day) {
        return month >= 1 && month <= 12 && day >= 1 && day <= 31;
    };
    if (!valid_date(params.sowing_month, params.sowing_day) ||
        !valid_date(params.harvest_month, params.harvest_day))
        throw ConfigError(params.name + ": invalid sowing or harvest date");
    if (params.sowing_month * 100 + params.sowing_day >=
        params.harvest_month * 100 + params.harvest_day)
        throw ConfigError(params.name + ": sowing must precede harvest within the year");
    solve_lai_curve(params); // throws if the two points admit no logistic fit
}

SoilBucket SoilBucket::from_params(const SoilParams& p) {
    if (!(p.rooting_depth_m > 0.0) || !(p.available_water_mm_per_m > 0.0))
        throw ConfigError("soil depth and available water capacity must be positive");
    if (!(p.depletion_fraction > 0.0 && p.depletion_fraction < 1.0))
        throw ConfigError("soil depletion_fraction must lie in (0, 1)");
    if (!(p.crop_coefficient > 0.0))
        throw ConfigError("crop_coefficient must be positive");
    SoilBucket b;
    b.rooting_depth_m = p.rooting_depth_m;
    b.field_capacity_mm = p.rooting_depth_m * p.available_water_mm_per_m;
    b.wilting_point_mm = 0.0;
    b.current_storage_mm = b.field_capacity_mm; // season starts at field capacity
    b.depletion_fraction = p.depletion_fraction;
    return b;
}

LaiCurve solve_lai_curve(const CropParams& params) {
    const LaiCurvePoint p1 = decode_curve_point(params.lai_curve_point_1);
    const LaiCurvePoint p2 = decode_curve_point(params.lai_curve_point_2);
    // At a point (f, h): h = f/(f + exp(l1 - l2 f)), so l1 - l2 f = ln(f(1-h)/h).
    auto rhs = [](const LaiCurvePoint& p) {
        return std::log(p.season_fraction * (1.0 - p.lai_fraction) / p.lai_fraction);
    };
    const double b1 = rhs(p1);
    const double b2 = rhs(p2);
    const double df = p2.season_fraction - p1.season_fraction;
    if (!(std::fabs(df) > 1e-12))
        throw ConfigError(params.name + ": LAI curve points coincide, no logistic fit");
    LaiCurve c;
    c.l2 = (b1 - b2) / df;
    c.l1 = b1 + c.l2 * p1.season_fraction;
    if (!std::isfinite(c.l1) || !std::isfinite(c.l2))
        throw ConfigError(params.name + ": LAI curve fit produced non-finite coefficients");
    return c;
}

double heat_unit(double t_max, double t_min, double t_base) {
    return std::max(0.0, 0.5 * (t_max + t_min) - t_base);
}

double lai_curve(double hui, const CropParams& params, const LaiCurve& curve) {
    const double f = clamp01(hui);
    const double dlai = params.decline_start_fraction;
    auto huf = [&](double x) {
        if (x <= 0.0) return 0.0;
        return x / (x + std::exp(curve.l1 - curve.l2 * x));
    };
    if (f <= dlai) return params.lai_max * huf(f);
    const double lai_at_decline = params.lai_max * huf(dlai);
    const double remaining = (1.0 - f) / (1.0 - dlai);
    return lai_at_decline * std::pow(std::max(0.0, remaining), params.lai_decline_exponent);
}

double temperature_stress(double t_mean, const CropParams& params) {
    const double x = (t_mean - params.t_base_c) / (params.t_opt_c - params.t_base_c);
    if (x <= 0.0 || x >= 2.0) return 0.0;
    return clamp01(std::sin(0.5 * kPi * x));
}

double et0_hargreaves(double t_mean, double t_max, double t_min, double ra_mj) {
    if (t_max < t_min) std::swap(t_max, t_min);
    const double ra_mm = ra_mj / 2.45; // latent heat of vaporization, MJ/kg
    const double et0 = 0.0023 * ra_mm * (t_mean + 17.8) * std::sqrt(t_max - t_min);
    return std::max(0.0, et0);
}

double water_stress(SoilBucket& bucket, double et0_mm, double precip_mm,
                    double crop_coefficient) {
    const double taw = bucket.field_capacity_mm - bucket.wilting_point_mm;
    if (!(taw > 0.0)) throw ConfigError("soil bucket has no plant-available capacity");

    // Rain first; anything beyond field capacity drains away.
    bucket.current_storage_mm =
        std::min(bucket.field_capacity_mm, bucket.current_storage_mm + std::max(0.0, precip_mm));

    // Transpiration reduction from root-zone depletion: full supply down to
    // the readily-available threshold, then linear to zero at wilting point.
    const double depletion = bucket.field_capacity_mm - bucket.current_storage_mm;
    const double raw = bucket.depletion_fraction * taw;
    double ks = 1.0;
    if (depletion > raw) ks = (taw - depletion) / (taw - raw);
    ks = clamp01(ks);

    const double demand = std::max(0.0, crop_coefficient * et0_mm) * ks;
    bucket.current_storage_mm =
        std::max(bucket.wilting_point_mm, bucket.current_storage_mm - demand);
    return ks;
}

double biomass_increment(double biomass_energy_ratio, double par_tot_mj, double lai,
                         double gamma) {
    return biomass_energy_ratio * 0.001 * par_tot_mj * (1.0 - std::exp(-0.65 * lai)) * gamma;
}

bool in_season(const CropParams& params, const CivilDate& date) {
    const int key = date.month * 100 + date.day;
    return key >= params.sowing_month * 100 + params.sowing_day &&
           key <= params.harvest_month * 100 + params.harvest_day;
}

SeasonResult run_season(const CropParams& params, const SoilParams& soil,
                        const std::vector<DailyCropInput>& days) {
    validate_crop(params);
    const LaiCurve curve = solve_lai_curve(params);
    SoilBucket bucket = SoilBucket::from_params(soil);

    SeasonResult result;
    result.days.reserve(days.size());

    double hu_sum = 0.0;
    double post_decline_ws_sum = 0.0;
    int post_decline_days = 0;

    for (std::size_t i = 0; i < days.size(); ++i) {
        const DailyCropInput& in = days[i];
        if (i > 0) {
            const CivilDate& prev = days[i - 1].date;
            const std::int64_t gap = days_from_civil(in.date.year, in.date.month, in.date.day) -
                                     days_from_civil(prev.year, prev.month, prev.day);
            if (gap != 1)
                throw DataError("season days must be consecutive, gap at " +
                                std::to_string(in.date.year) + "-" +
                                std::to_string(in.date.month) + "-" +
                                std::to_string(in.date.day));
        }

        DailyCropState st;
        st.date = in.date;
        st.doy = in.doy;
        st.heat_unit = heat_unit(in.t_max, in.t_min, params.t_base_c);
        hu_sum += st.heat_unit;
        st.hui = clamp01(hu_sum / params.potential_heat_units);
        st.lai = lai_curve(st.hui, params, curve);
        st.stress_temperature = temperature_stress(in.t_mean, params);
        st.et0_mm = et0_hargreaves(in.t_mean, in.t_max, in.t_min, in.ra_mj);
        st.stress_water = water_stress(bucket, st.et0_mm, in.precip_mm, soil.crop_coefficient);
        st.gamma = std::min(std::min(st.stress_water, st.stress_temperature),
                            std::min(st.stress_aeration, st.stress_nutrient));
        st.par_tot_mj = in.par_tot_mj;
        st.biomass_t_ha =
            biomass_increment(params.biomass_energy_ratio, in.par_tot_mj, st.lai, st.gamma);
        result.biomass_t_ha += st.biomass_t_ha;

        if (st.hui > params.decline_start_fraction) {
            post_decline_ws_sum += st.stress_water;
            ++post_decline_days;
        }
        result.days.push_back(st);
    }

    // Harvest-index reduction by late-season water stress; untouched when the
    // crop never reached the decline phase.
    double hia = params.harvest_index;
    if (post_decline_days > 0) {
        const double mean_ws = post_decline_ws_sum / post_decline_days;
        hia *= 1.0 - params.water_stress_yield_factor * (1.0 - mean_ws);
    }
    result.harvest_index_used = hia;
    result.yield_t_ha = hia * result.biomass_t_ha;
    return result;
}

} // namespace agripv
