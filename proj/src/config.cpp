#include "agripv/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>

#include <json.hpp>

namespace agripv {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!ok.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + section);
    }
}

double get_num(const json& obj, const std::string& section, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(section + "." + key + " must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& section, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(section + "." + key + " must be an integer");
    return v.get<int>();
}

std::string get_str(const json& obj, const std::string& section, const char* key,
                    const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(section + "." + key + " must be a string");
    return v.get<std::string>();
}

CropParams crop_from_json(const json& entry, std::size_t index) {
    const std::string section = "crops[" + std::to_string(index) + "]";
    auto preset = [&](const std::string& name) {
        if (name == "oat") return oat_params();
        if (name == "potato") return potato_params();
        throw ConfigError(section + ": unknown crop preset '" + name + "'");
    };
    if (entry.is_string()) return preset(entry.get<std::string>());
    if (!entry.is_object())
        throw ConfigError(section + " must be a preset name or an object");
    check_keys(entry, section,
               {"preset", "name", "harvest_index", "biomass_energy_ratio", "t_base_c", "t_opt_c",
                "lai_max", "water_stress_yield_factor", "lai_decline_exponent",
                "decline_start_fraction", "lai_curve_point_1", "lai_curve_point_2",
                "potential_heat_units", "sowing_month", "sowing_day", "harvest_month",
                "harvest_day"});
    CropParams p = preset(get_str(entry, section, "preset", "oat"));
    p.name = get_str(entry, section, "name", p.name);
    p.harvest_index = get_num(entry, section, "harvest_index", p.harvest_index);
    p.biomass_energy_ratio = get_num(entry, section, "biomass_energy_ratio", p.biomass_energy_ratio);
    p.t_base_c = get_num(entry, section, "t_base_c", p.t_base_c);
    p.t_opt_c = get_num(entry, section, "t_opt_c", p.t_opt_c);
    p.lai_max = get_num(entry, section, "lai_max", p.lai_max);
    p.water_stress_yield_factor =
        get_num(entry, section, "water_stress_yield_factor", p.water_stress_yield_factor);
    p.lai_decline_exponent =
        get_num(entry, section, "lai_decline_exponent", p.lai_decline_exponent);
    p.decline_start_fraction =
        get_num(entry, section, "decline_start_fraction", p.decline_start_fraction);
    p.lai_curve_point_1 = get_num(entry, section, "lai_curve_point_1", p.lai_curve_point_1);
    p.lai_curve_point_2 = get_num(entry, section, "lai_curve_point_2", p.lai_curve_point_2);
    p.potential_heat_units =
        get_num(entry, section, "potential_heat_units", p.potential_heat_units);
    p.sowing_month = get_int(entry, section, "sowing_month", p.sowing_month);
    p.sowing_day = get_int(entry, section, "sowing_day", p.sowing_day);
    p.harvest_month = get_int(entry, section, "harvest_month", p.harvest_month);
    p.harvest_day = get_int(entry, section, "harvest_day", p.harvest_day);
    return p;
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(path + ": top level must be an object");

    check_keys(j, "config root",
               {"site", "paths", "scene", "pv", "soil", "crops", "crop_for_optimization",
                "par_fill_ratio", "energy_basis", "block_deg", "optimizer", "sweep"});

    RunConfig cfg;
    cfg.config_hash = fnv1a64(j.dump());

    if (!j.contains("site") || !j.at("site").is_object())
        throw ConfigError("config requires a 'site' object");
    {
        const json& s = j.at("site");
        check_keys(s, "site", {"latitude_deg", "longitude_deg", "elevation_m"});
        if (!s.contains("latitude_deg") || !s.contains("longitude_deg"))
            throw ConfigError("site requires latitude_deg and longitude_deg");
        cfg.site.latitude_deg = get_num(s, "site", "latitude_deg", 0.0);
        cfg.site.longitude_deg = get_num(s, "site", "longitude_deg", 0.0);
        cfg.site.elevation_m = get_num(s, "site", "elevation_m", 0.0);
    }

    if (!j.contains("paths") || !j.at("paths").is_object())
        throw ConfigError("config requires a 'paths' object");
    {
        const json& p = j.at("paths");
        check_keys(p, "paths", {"weather", "horizon", "output_dir"});
        cfg.weather_path = get_str(p, "paths", "weather", "");
        cfg.horizon_path = get_str(p, "paths", "horizon", "");
        cfg.output_dir = get_str(p, "paths", "output_dir", cfg.output_dir);
        if (cfg.weather_path.empty()) throw ConfigError("paths.weather is required");
    }

    if (j.contains("scene")) {
        const json& s = j.at("scene");
        check_keys(s, "scene",
                   {"n_rows", "modules_per_row", "stack_count", "module_width_m",
                    "module_height_m", "mounting_gap_m", "azimuth_deg", "row_distance_m"});
        cfg.scene.n_rows = get_int(s, "scene", "n_rows", cfg.scene.n_rows);
        cfg.scene.modules_per_row =
            get_int(s, "scene", "modules_per_row", cfg.scene.modules_per_row);
        cfg.scene.stack_count = get_int(s, "scene", "stack_count", cfg.scene.stack_count);
        cfg.scene.module_width_m =
            get_num(s, "scene", "module_width_m", cfg.scene.module_width_m);
        cfg.scene.module_height_m =
            get_num(s, "scene", "module_height_m", cfg.scene.module_height_m);
        cfg.scene.mounting_gap_m =
            get_num(s, "scene", "mounting_gap_m", cfg.scene.mounting_gap_m);
        cfg.scene.azimuth_deg = get_num(s, "scene", "azimuth_deg", cfg.scene.azimuth_deg);
        cfg.scene.row_distance_m =
            get_num(s, "scene", "row_distance_m", cfg.scene.row_distance_m);
    }

    if (j.contains("pv")) {
        const json& p = j.at("pv");
        check_keys(p, "pv", {"derate", "noct_c", "albedo", "datasheet"});
        cfg.pv.derate = get_num(p, "pv", "derate", cfg.pv.derate);
        cfg.pv.noct_c = get_num(p, "pv", "noct_c", cfg.pv.noct_c);
        cfg.pv.albedo = get_num(p, "pv", "albedo", cfg.pv.albedo);
        if (p.contains("datasheet")) {
            const json& d = p.at("datasheet");
            check_keys(d, "pv.datasheet",
                       {"p_mp_w", "v_mp_v", "i_mp_a", "v_oc_v", "i_sc_a", "efficiency",
                        "bifaciality", "beta_voc_pct_per_c", "alpha_isc_pct_per_c", "area_m2"});
            ModuleDatasheet& m = cfg.pv.datasheet;
            m.p_mp_w = get_num(d, "pv.datasheet", "p_mp_w", m.p_mp_w);
            m.v_mp_v = get_num(d, "pv.datasheet", "v_mp_v", m.v_mp_v);
            m.i_mp_a = get_num(d, "pv.datasheet", "i_mp_a", m.i_mp_a);
            m.v_oc_v = get_num(d, "pv.datasheet", "v_oc_v", m.v_oc_v);
            m.i_sc_a = get_num(d, "pv.datasheet", "i_sc_a", m.i_sc_a);
            m.efficiency = get_num(d, "pv.datasheet", "efficiency", m.efficiency);
            m.bifaciality = get_num(d, "pv.datasheet", "bifaciality", m.bifaciality);
            m.beta_voc_pct_per_c =
                get_num(d, "pv.datasheet", "beta_voc_pct_per_c", m.beta_voc_pct_per_c);
            m.alpha_isc_pct_per_c =
                get_num(d, "pv.datasheet", "alpha_isc_pct_per_c", m.alpha_isc_pct_per_c);
            m.area_m2 = get_num(d, "pv.datasheet", "area_m2", m.area_m2);
        }
    }

    if (j.contains("soil")) {
        const json& s = j.at("soil");
        check_keys(s, "soil",
                   {"rooting_depth_m", "available_water_mm_per_m", "depletion_fraction",
                    "crop_coefficient"});
        cfg.soil.rooting_depth_m = get_num(s, "soil", "rooting_depth_m", cfg.soil.rooting_depth_m);
        cfg.soil.available_water_mm_per_m =
            get_num(s, "soil", "available_water_mm_per_m", cfg.soil.available_water_mm_per_m);
        cfg.soil.depletion_fraction =
            get_num(s, "soil", "depletion_fraction", cfg.soil.depletion_fraction);
        cfg.soil.crop_coefficient =
            get_num(s, "soil", "crop_coefficient", cfg.soil.crop_coefficient);
    }

    if (j.contains("crops")) {
        const json& c = j.at("crops");
        if (!c.is_array() || c.empty())
            throw ConfigError("crops must be a non-empty array");
        for (std::size_t i = 0; i < c.size(); ++i)
            cfg.crops.push_back(crop_from_json(c.at(i), i));
    } else {
        cfg.crops = {oat_params(), potato_params()};
    }

    if (j.contains("crop_for_optimization")) {
        const std::string name = get_str(j, "config root", "crop_for_optimization", "");
        bool found = false;
        for (std::size_t i = 0; i < cfg.crops.size(); ++i) {
            if (cfg.crops[i].name == name) {
                cfg.optimize_crop = i;
                found = true;
                break;
            }
        }
        if (!found)
            throw ConfigError("crop_for_optimization '" + name + "' is not in the crops list");
    }

    cfg.par_fill_ratio = get_num(j, "config root", "par_fill_ratio", cfg.par_fill_ratio);
    {
        const std::string basis = get_str(j, "config root", "energy_basis", "per_area");
        if (basis == "per_area")
            cfg.energy_basis = EnergyBasis::PerArea;
        else if (basis == "per_capacity")
            cfg.energy_basis = EnergyBasis::PerCapacity;
        else
            throw ConfigError("energy_basis must be 'per_area' or 'per_capacity'");
    }
    cfg.block_deg = get_int(j, "config root", "block_deg", cfg.block_deg);

    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        check_keys(o, "optimizer",
                   {"population", "generations", "crossover_rate", "mutation_rate",
                    "eta_crossover", "eta_mutation", "seed", "workers"});
        cfg.optimizer.population = get_int(o, "optimizer", "population", cfg.optimizer.population);
        cfg.optimizer.generations =
            get_int(o, "optimizer", "generations", cfg.optimizer.generations);
        cfg.optimizer.crossover_rate =
            get_num(o, "optimizer", "crossover_rate", cfg.optimizer.crossover_rate);
        cfg.optimizer.mutation_rate =
            get_num(o, "optimizer", "mutation_rate", cfg.optimizer.mutation_rate);
        cfg.optimizer.eta_crossover =
            get_num(o, "optimizer", "eta_crossover", cfg.optimizer.eta_crossover);
        cfg.optimizer.eta_mutation =
            get_num(o, "optimizer", "eta_mutation", cfg.optimizer.eta_mutation);
        if (o.contains("seed")) {
            if (!o.at("seed").is_number_unsigned() && !o.at("seed").is_number_integer())
                throw ConfigError("optimizer.seed must be an integer");
            cfg.optimizer.seed = o.at("seed").get<std::uint64_t>();
        }
        cfg.optimizer.workers = get_int(o, "optimizer", "workers", cfg.optimizer.workers);
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        check_keys(s, "sweep", {"variable", "from", "to", "step"});
        cfg.sweep.variable = get_str(s, "sweep", "variable", cfg.sweep.variable);
        cfg.sweep.from = get_num(s, "sweep", "from", cfg.sweep.from);
        cfg.sweep.to = get_num(s, "sweep", "to", cfg.sweep.to);
        cfg.sweep.step = get_num(s, "sweep", "step", cfg.sweep.step);
    }

    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.site.latitude_deg >= -90.0 && cfg.site.latitude_deg <= 90.0))
        throw ConfigError("site.latitude_deg out of range");
    if (!(cfg.site.longitude_deg >= -180.0 && cfg.site.longitude_deg <= 180.0))
        throw ConfigError("site.longitude_deg out of range");
    if (cfg.weather_path.empty()) throw ConfigError("paths.weather is required");
    if (!std::filesystem::exists(cfg.weather_path))
        throw ConfigError("weather file does not exist: " + cfg.weather_path);
    if (!cfg.horizon_path.empty() && !std::filesystem::exists(cfg.horizon_path))
        throw ConfigError("horizon file does not exist: " + cfg.horizon_path);
    validate_scene(cfg.scene);
    validate_datasheet(cfg.pv.datasheet);
    if (!(cfg.pv.derate > 0.0 && cfg.pv.derate <= 1.0))
        throw ConfigError("pv.derate must lie in (0, 1]");
    if (!(cfg.pv.albedo >= 0.0 && cfg.pv.albedo <= 1.0))
        throw ConfigError("pv.albedo must lie in [0, 1]");
    if (!(cfg.pv.noct_c > 20.0 && cfg.pv.noct_c < 70.0))
        throw ConfigError("pv.noct_c must lie in (20, 70)");
    if (cfg.crops.empty()) throw ConfigError("at least one crop is required");
    for (const CropParams& c : cfg.crops) validate_crop(c);
    std::set<std::string> names;
    for (const CropParams& c : cfg.crops)
        if (!names.insert(c.name).second)
            throw ConfigError("duplicate crop name '" + c.name + "'");
    if (cfg.optimize_crop >= cfg.crops.size())
        throw ConfigError("crop_for_optimization index out of range");
    if (!(cfg.par_fill_ratio > 0.0 && cfg.par_fill_ratio <= 1.0))
        throw ConfigError("par_fill_ratio must lie in (0, 1]");
    if (cfg.block_deg < 1 || 90 % cfg.block_deg != 0 || 360 % cfg.block_deg != 0)
        throw ConfigError("block_deg must divide both 90 and 360");
    SoilBucket::from_params(cfg.soil);  // validates the soil block
    validate_optimizer(cfg.optimizer);
    if (cfg.sweep.variable != "distance" && cfg.sweep.variable != "azimuth")
        throw ConfigError("sweep.variable must be 'distance' or 'azimuth'");
    if (!(cfg.sweep.step > 0.0)) throw ConfigError("sweep.step must be positive");
    if (!(cfg.sweep.from < cfg.sweep.to + 1e-12))
        throw ConfigError("sweep.from must not exceed sweep.to");
    if ((cfg.sweep.to - cfg.sweep.from) / cfg.sweep.step > 1000.0)
        throw ConfigError("sweep would produce more than 1000 points");
    DecisionBounds b;
    if (cfg.sweep.variable == "distance") {
        if (cfg.sweep.from < b.distance_lo || cfg.sweep.to > b.distance_hi)
            throw ConfigError("distance sweep outside [5, 20] m");
    } else {
        if (cfg.sweep.from < b.azimuth_lo || cfg.sweep.to > b.azimuth_hi)
            throw ConfigError("azimuth sweep outside [-180, 0] deg");
    }
}

} // namespace agripv
