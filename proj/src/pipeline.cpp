#include "agripv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <thread>

namespace agripv {

namespace {

std::uint64_t hash_weather(const WeatherSeries& w) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (const WeatherRecord& r : w.records) {
        mix(static_cast<double>(r.time.unix_sec));
        mix(r.ghi);
        mix(std::isnan(r.dhi) ? -1.0 : r.dhi);
        mix(std::isnan(r.par) ? -1.0 : r.par);
        mix(r.t_air);
        mix(std::isnan(r.precip) ? -1.0 : r.precip);
    }
    return h;
}

std::vector<DailyCropInput> season_inputs(const YearContext& ctx, const CropParams& crop,
                                          const std::vector<double>& day_par_mj) {
    std::vector<DailyCropInput> inputs;
    for (std::size_t k = 0; k < ctx.days.size(); ++k) {
        const DailyAggregate& d = ctx.days[k];
        if (!in_season(crop, d.date)) continue;
        DailyCropInput in;
        in.date = d.date;
        in.doy = d.doy;
        in.t_max = d.t_max;
        in.t_min = d.t_min;
        in.t_mean = d.t_mean;
        in.precip_mm = d.precip_mm;
        in.par_tot_mj = day_par_mj[k];
        in.ra_mj = ctx.ra_mj[k];
        inputs.push_back(in);
    }
    if (inputs.empty())
        throw DataError(crop.name + ": growing season has no days inside the weather year");
    return inputs;
}

} // namespace

double system_capacity_kwp(const SceneConfig& scene, const ModuleDatasheet& sheet) {
    return scene.n_rows * scene.modules_per_row * sheet.p_mp_w / 1000.0;
}

YearContext YearContext::build(WeatherSeries weather, HorizonProfile horizon,
                               const PvSystemConfig& pv, const SoilParams& soil,
                               std::vector<CropParams> crops, const SceneConfig& base_scene,
                               EnergyBasis basis, double par_fill_ratio, int block_deg) {
    validate_datasheet(pv.datasheet);
    validate_scene(base_scene);
    if (crops.empty()) throw ConfigError("at least one crop parameter set is required");
    for (const CropParams& c : crops) validate_crop(c);
    if (!(pv.derate > 0.0 && pv.derate <= 1.0))
        throw ConfigError("pv derate must lie in (0, 1]");
    if (!(pv.albedo >= 0.0 && pv.albedo <= 1.0))
        throw ConfigError("albedo must lie in [0, 1]");
    if (!(pv.noct_c > 20.0 && pv.noct_c < 70.0))
        throw ConfigError("noct_c must lie in (20, 70) degC");
    if (90 % block_deg != 0 || 360 % block_deg != 0)
        throw ConfigError("block_deg must divide both 90 and 360");

    YearContext ctx;
    ctx.site = weather.site;
    ctx.pv = pv;
    ctx.diode = fit_diode_params(pv.datasheet);
    ctx.soil = soil;
    ctx.crops = std::move(crops);
    ctx.base_scene = base_scene;
    ctx.energy_basis = basis;
    ctx.block_deg = block_deg;

    if (!weather.has_par) fill_par(weather, par_fill_ratio);
    apply_horizon_mask(weather, horizon, weather.site);
    ctx.weather = std::move(weather);
    ctx.horizon = std::move(horizon);
    ctx.weather_hash = hash_weather(ctx.weather);

    ctx.days = daily_aggregates(ctx.weather);
    ctx.ra_mj.resize(ctx.days.size());
    for (std::size_t k = 0; k < ctx.days.size(); ++k)
        ctx.ra_mj[k] = extraterrestrial_daily_mj(ctx.site.latitude_deg, ctx.days[k].doy);

    ctx.hours.reserve(ctx.weather.records.size() / 2);
    for (std::size_t i = 0; i < ctx.weather.records.size(); ++i) {
        const WeatherRecord& r = ctx.weather.records[i];
        if (!(r.ghi > 0.0)) continue;
        HourState h;
        h.record = static_cast<int>(i);
        const Instant mid{r.time.unix_sec - 1800, r.time.offset_min};
        h.sun = solar_position(mid.unix_sec, ctx.site);
        if (h.sun.altitude_deg <= 0.0) continue;  // twilight remnants post-mask
        h.vec = solar_vector(h.sun);
        const CivilDate date = mid.local().date;
        h.doy = day_of_year(date);
        h.day = h.doy - 1;
        h.ghi = r.ghi;
        h.dhi = (ctx.weather.has_dhi && !std::isnan(r.dhi))
                    ? std::min(r.dhi, r.ghi)
                    : diffuse_horizontal(r.ghi, h.sun.altitude_deg, h.doy);
        h.dni = direct_normal(h.ghi, h.dhi, h.sun.altitude_deg, h.doy);
        const PARSplit split = diffuse_fraction_par(r.par, h.ghi, h.dhi);
        h.par_beam = split.beam;
        h.par_diffuse = split.diffuse;
        h.t_air = r.t_air;
        const SkySituation sky = sky_situation(h.ghi, h.dhi, h.sun.altitude_deg, h.doy);
        h.tables = build_radiance_tables(perez_radiance_coefficients(sky), block_deg);
        if (h.dhi > 0.0) perez_brightness_coefficients(sky, h.f1, h.f2);
        ctx.hours.push_back(std::move(h));
    }

    // Reference (unshaded) crop seasons.
    std::vector<double> open_par(ctx.days.size(), 0.0);
    for (std::size_t k = 0; k < ctx.days.size(); ++k) open_par[k] = ctx.days[k].par_mj;
    for (const CropParams& crop : ctx.crops) {
        SeasonResult season = run_season(crop, ctx.soil, season_inputs(ctx, crop, open_par));
        ctx.reference_yield_t_ha.push_back(season.yield_t_ha);
        ctx.reference_seasons.push_back(std::move(season));
    }
    return ctx;
}

SceneEvaluation evaluate_scene(const YearContext& ctx, double azimuth_deg, double distance_m) {
    SceneConfig scene = ctx.base_scene;
    scene.azimuth_deg = azimuth_deg;
    scene.row_distance_m = distance_m;
    validate_scene(scene);

    const HorizonProfile* hz = ctx.horizon.empty() ? nullptr : &ctx.horizon;
    const ShadingMatrix m_ground = build_shading_matrix(scene, ShadingTarget::Ground, hz);
    const bool has_rows = scene.n_rows > 0;
    ShadingMatrix m_front, m_rear;
    if (has_rows) {
        m_front = build_shading_matrix(scene, ShadingTarget::PanelFront, hz);
        m_rear = build_shading_matrix(scene, ShadingTarget::PanelRear, hz);
    }

    const double rear_azimuth = wrap180(scene.azimuth_deg + 180.0);
    const DiffuseQuadrature q_ground =
        build_diffuse_quadrature(m_ground, 0.0, 0.0, ctx.block_deg);
    DiffuseQuadrature q_front, q_rear;
    if (has_rows) {
        q_front = build_diffuse_quadrature(m_front, 90.0, scene.azimuth_deg, ctx.block_deg);
        q_rear = build_diffuse_quadrature(m_rear, 90.0, rear_azimuth, ctx.block_deg);
    }

    SceneEvaluation ev;
    ev.scene = scene;
    ev.capacity_kwp = system_capacity_kwp(scene, ctx.pv.datasheet);
    ev.power_kw.assign(ctx.weather.records.size(), 0.0);

    const int module_count = scene.n_rows * scene.modules_per_row;
    std::vector<double> day_par(ctx.days.size(), 0.0);

    for (const HourState& h : ctx.hours) {
        // Crop strip: beam through the masked matrix, diffuse through Eq. 5.
        const std::optional<double> sfb_g = lookup(m_ground, h.sun);
        const double sfd_g = diffuse_shading_fast(q_ground, h.tables, h.vec);
        double par = h.par_diffuse * (1.0 - sfd_g);
        if (sfb_g) par += h.par_beam * (1.0 - *sfb_g);
        day_par[h.day] += par * 3600.0 / 1e6;

        if (!has_rows) continue;

        const PlaneIrradiance front = transpose_with_coefficients(
            h.ghi, h.dhi, h.sun, 90.0, scene.azimuth_deg, ctx.pv.albedo, h.doy, h.f1, h.f2);
        const PlaneIrradiance rear = transpose_with_coefficients(
            h.ghi, h.dhi, h.sun, 90.0, rear_azimuth, ctx.pv.albedo, h.doy, h.f1, h.f2);

        const std::optional<double> sfb_f = lookup(m_front, h.sun);
        const std::optional<double> sfb_r = lookup(m_rear, h.sun);
        const double sfd_f = diffuse_shading_fast(q_front, h.tables, h.vec);
        const double sfd_r = diffuse_shading_fast(q_rear, h.tables, h.vec);

        const double g_eff = effective_irradiance(
            front.beam, front.diffuse, front.reflected, sfb_f ? *sfb_f : 1.0, sfd_f,
            rear.beam, rear.diffuse, rear.reflected, sfb_r ? *sfb_r : 1.0, sfd_r,
            ctx.pv.datasheet.bifaciality);
        if (!(g_eff > 0.0)) continue;

        const double t_cell = cell_temperature(h.t_air, g_eff, ctx.pv.noct_c);
        const double p_module = module_power(ctx.diode, ctx.pv.datasheet, g_eff, t_cell);
        ev.power_kw[h.record] =
            std::max(0.0, p_module * module_count * ctx.pv.derate / 1000.0);
    }

    ev.annual_energy_kwh = 0.0;
    for (double p : ev.power_kw) ev.annual_energy_kwh += p;  // 1-hour steps
    ev.std_kw = power_std(ev.power_kw);

    const std::uint64_t scene_hash = scene_fingerprint(scene, ShadingTarget::Ground, hz);
    for (std::size_t c = 0; c < ctx.crops.size(); ++c) {
        CropOutcome out;
        out.name = ctx.crops[c].name;
        out.season = run_season(ctx.crops[c], ctx.soil, season_inputs(ctx, ctx.crops[c], day_par));
        out.yield_t_ha = out.season.yield_t_ha;

        // Energy side of the LER; an empty scene contributes zero.
        double e_agri = 0.0;
        double e_ref = kReferenceEnergyDensityKwhPerM2;
        if (ctx.energy_basis == EnergyBasis::PerCapacity) {
            e_ref = kReferenceSpecificYieldKwhPerKwp;
            if (ev.capacity_kwp > 0.0) e_agri = ev.annual_energy_kwh / ev.capacity_kwp;
        } else if (scene.land_area_m2() > 0.0) {
            e_agri = agrivoltaic_energy_density(ev.annual_energy_kwh, scene);
        }
        KpiResult kpi = land_equivalent_ratio(out.yield_t_ha, ctx.reference_yield_t_ha[c],
                                              e_agri, e_ref);
        kpi.std_kw = ev.std_kw;
        kpi.annual_energy_kwh = ev.annual_energy_kwh;
        kpi.energy_density_kwh_m2 =
            scene.land_area_m2() > 0.0 ? ev.annual_energy_kwh / scene.land_area_m2() : 0.0;
        kpi.scene_hash = scene_hash;
        kpi.weather_hash = ctx.weather_hash;
        kpi.crop = out.name;
        out.kpi = kpi;
        ev.crops.push_back(std::move(out));
    }
    return ev;
}

std::vector<double> simulate_power(const YearContext& ctx, double azimuth_deg,
                                   double distance_m) {
    return evaluate_scene(ctx, azimuth_deg, distance_m).power_kw;
}

double simulate_yield(const YearContext& ctx, double azimuth_deg, double distance_m,
                      std::size_t crop_index) {
    if (crop_index >= ctx.crops.size()) throw ConfigError("crop index out of range");
    return evaluate_scene(ctx, azimuth_deg, distance_m).crops[crop_index].yield_t_ha;
}

double reference_yield(const YearContext& ctx, std::size_t crop_index) {
    if (crop_index >= ctx.crops.size()) throw ConfigError("crop index out of range");
    return ctx.reference_yield_t_ha[crop_index];
}

Evaluator::Evaluator(const YearContext& ctx, std::size_t crop_index, DecisionBounds bounds,
                     double azimuth_bucket_deg, double distance_bucket_m)
    : ctx_(ctx),
      crop_index_(crop_index),
      bounds_(bounds),
      az_bucket_(azimuth_bucket_deg),
      d_bucket_(distance_bucket_m) {
    if (crop_index_ >= ctx.crops.size()) throw ConfigError("crop index out of range");
    if (!(az_bucket_ > 0.0) || !(d_bucket_ > 0.0))
        throw ConfigError("cache bucket sizes must be positive");
    if (!(bounds_.azimuth_lo < bounds_.azimuth_hi) ||
        !(bounds_.distance_lo < bounds_.distance_hi))
        throw ConfigError("decision bounds must be non-degenerate");
}

DecisionVector Evaluator::snap(const DecisionVector& d) const {
    auto center = [](double v, double lo, double hi, double bucket) {
        const double k = std::floor((v - lo) / bucket);
        double c = lo + (k + 0.5) * bucket;
        return std::min(hi, std::max(lo, c));
    };
    DecisionVector s;
    s.azimuth_deg = center(d.azimuth_deg, bounds_.azimuth_lo, bounds_.azimuth_hi, az_bucket_);
    s.distance_m = center(d.distance_m, bounds_.distance_lo, bounds_.distance_hi, d_bucket_);
    return s;
}

Evaluation Evaluator::evaluate_snapped(const DecisionVector& snapped) {
    const std::pair<std::int64_t, std::int64_t> key{
        std::llround(snapped.azimuth_deg * 1e6), std::llround(snapped.distance_m * 1e6)};
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return {snapped, it->second};
    }
    const SceneEvaluation ev = evaluate_scene(ctx_, snapped.azimuth_deg, snapped.distance_m);
    Objectives obj;
    obj.ler = ev.crops[crop_index_].kpi.ler;
    obj.std_kw = ev.std_kw;
    obj.energy_kwh = ev.annual_energy_kwh;
    obj.ler_crop = ev.crops[crop_index_].kpi.ler_crop_term;
    obj.ler_pv = ev.crops[crop_index_].kpi.ler_pv_term;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.emplace(key, obj);
        ++eval_count_;
    }
    return {snapped, obj};
}

Evaluation Evaluator::evaluate(const DecisionVector& d) {
    if (d.azimuth_deg < bounds_.azimuth_lo - 1e-9 || d.azimuth_deg > bounds_.azimuth_hi + 1e-9 ||
        d.distance_m < bounds_.distance_lo - 1e-9 || d.distance_m > bounds_.distance_hi + 1e-9)
        throw ConfigError("decision outside bounds");
    return evaluate_snapped(snap(d));
}

std::vector<Evaluation> Evaluator::evaluate_batch(const std::vector<DecisionVector>& decisions,
                                                  int workers) {
    if (workers < 1) workers = 1;
    std::vector<Evaluation> results(decisions.size());
    if (workers == 1 || decisions.size() <= 1) {
        for (std::size_t i = 0; i < decisions.size(); ++i) results[i] = evaluate(decisions[i]);
        return results;
    }
    std::vector<std::thread> pool;
    const int n = static_cast<int>(decisions.size());
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < n; i += workers) results[i] = evaluate(decisions[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

std::size_t Evaluator::cache_size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.size();
}

} // namespace agripv
