#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "agripv/common.hpp"
#include "agripv/crop.hpp"
#include "agripv/irradiance.hpp"
#include "agripv/kpi.hpp"
#include "agripv/pv.hpp"
#include "agripv/shading.hpp"
#include "agripv/solar.hpp"
#include "agripv/weather.hpp"

namespace agripv {

// Array-level electrical configuration. The module count follows from the
// scene (rows x modules per row).
struct PvSystemConfig {
    ModuleDatasheet datasheet;
    double derate = 0.96;  // wiring, inverter, soiling losses
    double noct_c = 45.0;
    double albedo = 0.2;
};

double system_capacity_kwp(const SceneConfig& scene, const ModuleDatasheet& sheet);

// Everything about one daylight hour that does not depend on the scene:
// sun position, irradiance decomposition, PAR split, and the sky-radiance
// tables the fast diffuse-shading quadrature consumes.
struct HourState {
    int record = 0;     // index into the weather record vector
    int day = 0;        // index into the daily aggregate vector
    int doy = 0;
    SolarPosition sun;
    SolarVector vec;
    double ghi = 0.0;
    double dhi = 0.0;
    double dni = 0.0;
    double par_beam = 0.0;
    double par_diffuse = 0.0;
    double t_air = 0.0;
    double f1 = 0.0, f2 = 0.0;  // transposition brightness coefficients
    RadianceTables tables;
};

// Scene-independent context for one weather year: shared read-only by every
// candidate evaluation, so the expensive per-hour sky state is paid once.
struct YearContext {
    Site site;
    WeatherSeries weather;  // PAR-filled and horizon-masked
    HorizonProfile horizon;
    PvSystemConfig pv;
    DiodeParams diode;
    SoilParams soil;
    std::vector<CropParams> crops;
    SceneConfig base_scene;  // azimuth and row distance overwritten per decision
    EnergyBasis energy_basis = EnergyBasis::PerArea;
    int block_deg = 3;

    std::vector<HourState> hours;       // daylight hours only
    std::vector<DailyAggregate> days;   // whole year
    std::vector<double> ra_mj;          // per day, extraterrestrial MJ/m2
    std::vector<SeasonResult> reference_seasons;  // per crop, unshaded
    std::vector<double> reference_yield_t_ha;
    std::uint64_t weather_hash = 0;

    // par_fill_ratio is used only when the weather series carries no PAR
    // column.
    static YearContext build(WeatherSeries weather, HorizonProfile horizon,
                             const PvSystemConfig& pv, const SoilParams& soil,
                             std::vector<CropParams> crops, const SceneConfig& base_scene,
                             EnergyBasis basis = EnergyBasis::PerArea,
                             double par_fill_ratio = 0.45, int block_deg = 3);
};

struct CropOutcome {
    std::string name;
    double yield_t_ha = 0.0;
    KpiResult kpi;
    SeasonResult season;
};

struct SceneEvaluation {
    SceneConfig scene;
    double annual_energy_kwh = 0.0;
    double std_kw = 0.0;
    double capacity_kwp = 0.0;
    std::vector<double> power_kw;  // one entry per weather record
    std::vector<CropOutcome> crops;
};

// Full-year simulation of one (azimuth, row distance) decision: shading
// matrices, hourly bifacial PV power, strip PAR, crop seasons, KPIs.
SceneEvaluation evaluate_scene(const YearContext& ctx, double azimuth_deg, double distance_m);

// Named convenience entry points over evaluate_scene.
std::vector<double> simulate_power(const YearContext& ctx, double azimuth_deg,
                                   double distance_m);
double simulate_yield(const YearContext& ctx, double azimuth_deg, double distance_m,
                      std::size_t crop_index);
double reference_yield(const YearContext& ctx, std::size_t crop_index);

struct DecisionVector {
    double azimuth_deg = -90.0;
    double distance_m = 10.0;
};

struct DecisionBounds {
    double azimuth_lo = -180.0;
    double azimuth_hi = 0.0;
    double distance_lo = 5.0;
    double distance_hi = 20.0;
};

// Objective triple plus the LER decomposition carried along for analysis.
// ler and energy_kwh are maximized, std_kw is minimized.
struct Objectives {
    double ler = 0.0;
    double std_kw = 0.0;
    double energy_kwh = 0.0;
    double ler_crop = 0.0;
    double ler_pv = 0.0;
};

struct Evaluation {
    DecisionVector decision;  // snapped to the cache bucket actually evaluated
    Objectives objectives;
};

// Caching evaluator: decisions snap to bucket centers (1 deg x 0.1 m by
// default) so the matrix-building cost is shared by nearby candidates and
// re-evaluating a stored decision is a cache hit, bit-for-bit.
class Evaluator {
  public:
    Evaluator(const YearContext& ctx, std::size_t crop_index, DecisionBounds bounds = {},
              double azimuth_bucket_deg = 1.0, double distance_bucket_m = 0.1);

    DecisionVector snap(const DecisionVector& d) const;
    Evaluation evaluate(const DecisionVector& d);
    // Results ordered by input index, independent of worker count.
    std::vector<Evaluation> evaluate_batch(const std::vector<DecisionVector>& decisions,
                                           int workers);

    const DecisionBounds& bounds() const { return bounds_; }
    std::size_t evaluation_count() const { return eval_count_; }
    std::size_t cache_size() const;

  private:
    Evaluation evaluate_snapped(const DecisionVector& snapped);

    const YearContext& ctx_;
    std::size_t crop_index_;
    DecisionBounds bounds_;
    double az_bucket_;
    double d_bucket_;
    mutable std::mutex mutex_;
    std::map<std::pair<std::int64_t, std::int64_t>, Objectives> cache_;
    std::size_t eval_count_ = 0;
};

} // namespace agripv
