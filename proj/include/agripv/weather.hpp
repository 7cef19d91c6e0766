#pragma once

#include <string>
#include <vector>

#include "agripv/common.hpp"
#include "agripv/timeutil.hpp"

namespace agripv {

// One hour-ending record: the timestamp labels the end of the interval it
// averages over (01:00 covers 00:00-01:00). Irradiances are interval means.
struct WeatherRecord {
    Instant time;
    double ghi = 0.0;     // global horizontal irradiance, W/m2
    double dhi = 0.0;     // diffuse horizontal irradiance, W/m2 (NaN if absent)
    double par = 0.0;     // photosynthetically active radiation, W/m2 (NaN if absent)
    double t_air = 0.0;   // air temperature, degC
    double precip = 0.0;  // precipitation, mm (NaN if absent)
};

struct WeatherSeries {
    std::vector<WeatherRecord> records;
    Site site;
    bool has_dhi = false;
    bool has_par = false;
    bool has_precip = false;
    int year = 0;
};

struct DailyAggregate {
    CivilDate date;
    int doy = 0;
    double t_min = 0.0;
    double t_max = 0.0;
    double t_mean = 0.0;       // mean of the 24 hourly values
    double precip_mm = 0.0;
    double par_mj = 0.0;       // daily PAR sum, MJ/m2
    double ghi_mj = 0.0;
};

// Sky line elevation by compass azimuth (0 north, clockwise positive, the
// PVGIS convention). Samples must cover [0, 360) ascending; lookups
// interpolate linearly with wrap-around. elevation_at takes the solar
// convention used everywhere else (0 south, east negative) and converts.
struct HorizonProfile {
    std::vector<double> azimuth_deg;    // compass
    std::vector<double> elevation_deg;  // [0, 90)

    bool empty() const { return azimuth_deg.empty(); }
    double elevation_at(double azimuth_canonical_deg) const;
};

// Loads a comma- or tab-separated file (delimiter autodetected from the
// header). Columns: time, ghi, dhi, par, t_air, precip; time/ghi/t_air are
// mandatory, the rest may be absent or have empty cells. Validates a strictly
// increasing uniform hourly grid spanning one whole calendar year, value
// ranges, and dhi <= ghi row by row. Errors carry line numbers or timestamps.
// The site is not part of the file format; the caller attaches it here.
WeatherSeries load_weather(const std::string& path, const Site& site);

void save_weather(const WeatherSeries& series, const std::string& path);

// Fills missing PAR cells as ratio * ghi. ratio must lie in (0, 1].
void fill_par(WeatherSeries& series, double ratio);

// Groups records into civil days by interval midpoint. Requires exactly 24
// records per day.
std::vector<DailyAggregate> daily_aggregates(const WeatherSeries& series);

// Two-column file: azimuth_deg, elevation_deg.
HorizonProfile load_horizon(const std::string& path);

// Zeroes ghi/dhi/par for hours whose midpoint sun sits below the local sky
// line (or below the flat horizon when profile is empty). Returns the number
// of records that had irradiance removed.
int apply_horizon_mask(WeatherSeries& series, const HorizonProfile& profile, const Site& site);

} // namespace agripv
