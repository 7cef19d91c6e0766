#include "agripv/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "agripv/version.hpp"

namespace agripv {

namespace {

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    const std::string path = (std::filesystem::path(cfg.output_dir) / name).string();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write output file '" + path + "'");
    out << "# agripv " << kVersion << " config=" << hex16(cfg.config_hash)
        << " seed=" << cfg.optimizer.seed << "\n";
    return out;
}

} // namespace

YearContext build_context(const RunConfig& cfg) {
    WeatherSeries weather = load_weather(cfg.weather_path, cfg.site);
    HorizonProfile horizon;
    if (!cfg.horizon_path.empty()) horizon = load_horizon(cfg.horizon_path);
    return YearContext::build(std::move(weather), std::move(horizon), cfg.pv, cfg.soil,
                              cfg.crops, cfg.scene, cfg.energy_basis, cfg.par_fill_ratio,
                              cfg.block_deg);
}

void cmd_simulate(const RunConfig& cfg) {
    const YearContext ctx = build_context(cfg);
    const SceneEvaluation ev =
        evaluate_scene(ctx, cfg.scene.azimuth_deg, cfg.scene.row_distance_m);

    {
        std::ofstream out = open_output(cfg, "power_series.csv");
        out << "time,power_kw\n";
        for (std::size_t i = 0; i < ctx.weather.records.size(); ++i)
            out << format_iso8601(ctx.weather.records[i].time) << ','
                << format_double(ev.power_kw[i]) << "\n";
    }
    {
        std::ofstream out = open_output(cfg, "crop_daily.csv");
        out << "crop,date,doy,hui,lai,stress_water,stress_temperature,gamma,et0_mm,"
               "par_tot_mj,biomass_t_ha\n";
        for (const CropOutcome& c : ev.crops) {
            for (const DailyCropState& d : c.season.days) {
                char date[16];
                std::snprintf(date, sizeof date, "%04d-%02d-%02d", d.date.year, d.date.month,
                              d.date.day);
                out << c.name << ',' << date << ',' << d.doy << ',' << format_double(d.hui)
                    << ',' << format_double(d.lai) << ',' << format_double(d.stress_water)
                    << ',' << format_double(d.stress_temperature) << ','
                    << format_double(d.gamma) << ',' << format_double(d.et0_mm) << ','
                    << format_double(d.par_tot_mj) << ',' << format_double(d.biomass_t_ha)
                    << "\n";
            }
        }
    }
    {
        std::ofstream out = open_output(cfg, "yield_summary.csv");
        out << "crop,yield_t_ha,reference_yield_t_ha,harvest_index_used,season_days\n";
        for (std::size_t c = 0; c < ev.crops.size(); ++c)
            out << ev.crops[c].name << ',' << format_double(ev.crops[c].yield_t_ha) << ','
                << format_double(ctx.reference_yield_t_ha[c]) << ','
                << format_double(ev.crops[c].season.harvest_index_used) << ','
                << ev.crops[c].season.days.size() << "\n";
    }
    {
        std::ofstream out = open_output(cfg, "kpi.csv");
        out << "crop,ler,ler_crop,ler_pv,std_kw,energy_kwh,energy_density_kwh_m2,"
               "capacity_kwp,scene_hash,weather_hash\n";
        for (const CropOutcome& c : ev.crops)
            out << c.name << ',' << format_double(c.kpi.ler) << ','
                << format_double(c.kpi.ler_crop_term) << ','
                << format_double(c.kpi.ler_pv_term) << ',' << format_double(c.kpi.std_kw)
                << ',' << format_double(c.kpi.annual_energy_kwh) << ','
                << format_double(c.kpi.energy_density_kwh_m2) << ','
                << format_double(ev.capacity_kwp) << ',' << hex16(c.kpi.scene_hash) << ','
                << hex16(c.kpi.weather_hash) << "\n";
    }
}

void cmd_optimize(const RunConfig& cfg) {
    const YearContext ctx = build_context(cfg);
    Evaluator evaluator(ctx, cfg.optimize_crop);
    const DecisionBounds bounds = evaluator.bounds();
    const BatchEvaluator batch = [&](const std::vector<DecisionVector>& ds) {
        return evaluator.evaluate_batch(ds, cfg.optimizer.workers);
    };
    const std::vector<ParetoSolution> archive = optimize(cfg.optimizer, bounds, batch);
    const AnalysisTables tables = analyze(archive, bounds);

    {
        std::ofstream out = open_output(cfg, "pareto_archive.csv");
        out << "azimuth_deg,distance_m,ler,ler_crop,ler_pv,std_kw,energy_kwh\n";
        for (const ParetoSolution& s : archive)
            out << format_double(s.decision.azimuth_deg) << ','
                << format_double(s.decision.distance_m) << ','
                << format_double(s.objectives.ler) << ',' << format_double(s.objectives.ler_crop)
                << ',' << format_double(s.objectives.ler_pv) << ','
                << format_double(s.objectives.std_kw) << ','
                << format_double(s.objectives.energy_kwh) << "\n";
    }
    {
        std::ofstream out = open_output(cfg, "correlations.csv");
        out << "variable,objective,pearson,defined\n";
        for (const CorrelationEntry& e : tables.correlations)
            out << e.variable << ',' << e.objective << ',' << format_double(e.value) << ','
                << (e.defined ? 1 : 0) << "\n";
    }
    {
        std::ofstream out = open_output(cfg, "ler_decomposition.csv");
        out << "azimuth_deg,distance_m,ler,ler_crop,ler_pv\n";
        for (const ParetoSolution& s : tables.solutions)
            out << format_double(s.decision.azimuth_deg) << ','
                << format_double(s.decision.distance_m) << ','
                << format_double(s.objectives.ler) << ',' << format_double(s.objectives.ler_crop)
                << ',' << format_double(s.objectives.ler_pv) << "\n";
    }
    {
        std::ofstream out = open_output(cfg, "decision_density.csv");
        out << "variable,bin_lo,bin_hi,count\n";
        for (const DensityBin& b : tables.azimuth_density)
            out << "azimuth_deg," << format_double(b.lo) << ',' << format_double(b.hi) << ','
                << b.count << "\n";
        for (const DensityBin& b : tables.distance_density)
            out << "distance_m," << format_double(b.lo) << ',' << format_double(b.hi) << ','
                << b.count << "\n";
    }
}

void cmd_sweep(const RunConfig& cfg) {
    const YearContext ctx = build_context(cfg);
    const bool sweep_distance = cfg.sweep.variable == "distance";

    std::vector<double> values;
    for (double v = cfg.sweep.from; v <= cfg.sweep.to + 1e-9; v += cfg.sweep.step)
        values.push_back(v);

    std::vector<SceneEvaluation> evals;
    evals.reserve(values.size());
    for (double v : values) {
        const double az = sweep_distance ? cfg.scene.azimuth_deg : v;
        const double d = sweep_distance ? v : cfg.scene.row_distance_m;
        evals.push_back(evaluate_scene(ctx, az, d));
    }

    std::ofstream out = open_output(cfg, "sweep.csv");
    out << "value";
    for (const CropParams& c : ctx.crops) out << ",yield_" << c.name;
    out << ",specific_pv_production";
    for (const CropParams& c : ctx.crops)
        out << ",ler_" << c.name << ",ler_crop_" << c.name << ",ler_pv_" << c.name;
    out << "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const SceneEvaluation& ev = evals[i];
        out << format_double(values[i]);
        for (const CropOutcome& c : ev.crops) out << ',' << format_double(c.yield_t_ha);
        const double specific =
            ev.capacity_kwp > 0.0 ? ev.annual_energy_kwh / ev.capacity_kwp : 0.0;
        out << ',' << format_double(specific);
        for (const CropOutcome& c : ev.crops)
            out << ',' << format_double(c.kpi.ler) << ',' << format_double(c.kpi.ler_crop_term)
                << ',' << format_double(c.kpi.ler_pv_term);
        out << "\n";
    }
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Vertical bifacial agrivoltaic simulation and optimization"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out_dir;
    bool have_seed = false, have_workers = false, have_out = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Path to the JSON run configuration")
            ->required();
        sub->add_option("--seed", seed, "Override optimizer.seed")->each([&](const std::string&) {
            have_seed = true;
        });
        sub->add_option("--workers", workers, "Override optimizer.workers")
            ->each([&](const std::string&) { have_workers = true; });
        sub->add_option("--out", out_dir, "Override paths.output_dir")
            ->each([&](const std::string&) { have_out = true; });
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Fixed-decision year simulation");
    CLI::App* optimize_cmd = app.add_subcommand("optimize", "Pareto search over azimuth/distance");
    CLI::App* sweep = app.add_subcommand("sweep", "One-variable sweep table");
    CLI::App* validate = app.add_subcommand("validate-config", "Parse and validate the config");
    for (CLI::App* sub : {simulate, optimize_cmd, sweep, validate}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (have_seed) cfg.optimizer.seed = seed;
        if (have_workers) {
            if (workers < 1) throw ConfigError("--workers must be at least 1");
            cfg.optimizer.workers = workers;
        }
        if (have_out) {
            if (out_dir.empty()) throw ConfigError("--out must not be empty");
            cfg.output_dir = out_dir;
        }
        if (simulate->parsed()) {
            cmd_simulate(cfg);
        } else if (optimize_cmd->parsed()) {
            cmd_optimize(cfg);
        } else if (sweep->parsed()) {
            cmd_sweep(cfg);
        } else if (validate->parsed()) {
            std::cout << "config ok, hash " << hex16(cfg.config_hash) << "\n";
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace agripv
