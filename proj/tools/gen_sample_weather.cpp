// Generates the bundled synthetic weather year and horizon profile.
//
// The year is NOT a measured product: hourly clear-sky irradiance (Haurwitz)
// is attenuated by an AR(1) daily cloud regime plus AR(1) hourly clear-sky
// index noise, with matching diffuse fraction (Erbs), PAR share, seasonal
// and diurnal temperature cycles, and a wet-day precipitation chain. The
// fixed seed makes regeneration reproducible; the committed CSVs are the
// reference inputs for the test suite.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agripv/common.hpp"
#include "agripv/irradiance.hpp"
#include "agripv/solar.hpp"
#include "agripv/timeutil.hpp"
#include "agripv/weather.hpp"

using namespace agripv;

namespace {

double urand(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller, one sample per call (second discarded for simplicity).
double nrand(std::mt19937_64& rng) {
    double u1 = urand(rng);
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = urand(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double haurwitz(double sun_altitude_deg) {
    if (sun_altitude_deg <= 0.0) return 0.0;
    const double cz = std::sin(deg2rad(sun_altitude_deg));
    return 1098.0 * cz * std::exp(-0.057 / cz);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the bundled synthetic weather year"};
    std::string out_path = "data/sample_weather.csv";
    std::string horizon_path = "data/sample_horizon.csv";
    int year = 2019;
    std::uint64_t seed = 940813;
    double latitude = 59.5549, longitude = 16.7585;
    app.add_option("--out", out_path, "Weather CSV output path");
    app.add_option("--horizon-out", horizon_path, "Horizon CSV output path");
    app.add_option("--year", year, "Calendar year");
    app.add_option("--seed", seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

    const Site site{latitude, longitude, 15.0};
    const int offset_min = 60;  // CET, no DST switch for a uniform grid
    std::mt19937_64 rng(seed);

    char first_label[64];
    std::snprintf(first_label, sizeof first_label, "%04d-01-01T01:00:00+01:00", year);
    const Instant start = parse_iso8601(first_label);
    const int n_hours = 24 * days_in_year(year);

    // Daily cloud regime and temperature anomaly, AR(1) processes.
    const int n_days = days_in_year(year);
    std::vector<double> regime(static_cast<std::size_t>(n_days));
    std::vector<double> t_anom(static_cast<std::size_t>(n_days));
    std::vector<double> rain_mm(static_cast<std::size_t>(n_days), 0.0);
    double r_prev = 0.55, a_prev = 0.0;
    bool wet_prev = false;
    for (int d = 0; d < n_days; ++d) {
        const double season = std::cos(2.0 * kPi * (d + 1 - 172) / 365.25);  // 1 at Jun 21
        const double mean = 0.56 + 0.30 * season;
        r_prev = mean + 0.52 * (r_prev - mean) + (0.17 - 0.08 * season) * nrand(rng);
        regime[static_cast<std::size_t>(d)] = std::clamp(r_prev, 0.08, 0.97);
        a_prev = 0.72 * a_prev + 1.9 * nrand(rng);
        t_anom[static_cast<std::size_t>(d)] = a_prev;

        const double p_wet =
            std::clamp(1.15 - 1.05 * regime[static_cast<std::size_t>(d)], 0.10, 0.90);
        const bool wet = urand(rng) < (wet_prev ? std::min(0.92, p_wet + 0.15) : p_wet);
        if (wet) {
            const double mean_mm = 2.0 + 4.6 * (0.5 + 0.5 * season);
            rain_mm[static_cast<std::size_t>(d)] = -mean_mm * std::log(std::max(1e-12, urand(rng)));
        }
        wet_prev = wet;
    }

    std::ofstream out(out_path);
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
        return 1;
    }
    out << "# synthetic weather year, " << year << ", 59.55N 16.76E (clear-sky model with\n";
    out << "# stochastic cloud attenuation, fixed seed " << seed << "); not measured data\n";
    out << "time,ghi,dhi,par,t_air,precip\n";

    double c_prev = 0.6;
    for (int i = 0; i < n_hours; ++i) {
        const Instant label{start.unix_sec + 3600ll * i, offset_min};
        const Instant mid{label.unix_sec - 1800, offset_min};
        const CivilDateTime local = mid.local();
        const int d = day_of_year(local.date) - 1;
        const int doy = d + 1;
        const double season = std::cos(2.0 * kPi * (doy - 172) / 365.25);

        const SolarPosition sun = solar_position(mid.unix_sec, site);
        const double clear = haurwitz(sun.altitude_deg);

        const double r = regime[static_cast<std::size_t>(d)];
        c_prev = r + 0.70 * (c_prev - r) + 0.06 * nrand(rng);
        double index = std::clamp(c_prev, 0.03, 1.02);

        // Convective build-up: afternoons run cloudier than mornings, most of
        // all in the warm season. Keyed to sun azimuth (west of south > 0).
        const double west = std::clamp(sun.azimuth_deg / 55.0, 0.0, 1.0);
        index *= 1.0 - 0.32 * west * (0.4 + 0.6 * std::max(0.0, season));

        double ghi = clear * index;
        if (ghi < 1.0) ghi = 0.0;

        double dhi = 0.0, par = 0.0;
        if (ghi > 0.0) {
            const double kt = clearness_index(ghi, sun.altitude_deg, doy);
            double fd = erbs_diffuse_fraction(kt);
            dhi = std::min(ghi, fd * ghi);
            fd = dhi / ghi;
            par = ghi * (0.42 + 0.10 * fd);
        }

        // Overall brightness of the year, applied after decomposition so the
        // beam/diffuse split stays put. Tuned against mid-Sweden annual sums.
        constexpr double kBrightness = 0.90;
        ghi *= kBrightness;
        dhi *= kBrightness;
        par *= kBrightness;

        // Seasonal mean, AR(1) daily anomaly, and a 15:00-peaked diurnal cycle
        // whose amplitude grows with the clear-sky fraction.
        const double t_season = 7.5 - 10.0 * std::cos(2.0 * kPi * (doy - 15) / 365.25);
        const double hour_frac = (local.hour + local.minute / 60.0);
        const double diurnal_amp = (2.2 + 1.8 * (0.5 + 0.5 * season)) * (0.5 + 0.5 * r);
        const double diurnal = diurnal_amp * std::cos(2.0 * kPi * (hour_frac - 15.0) / 24.0);
        const double t_air = t_season + t_anom[static_cast<std::size_t>(d)] + diurnal;

        // Spread each wet day's total over six early-afternoon-biased hours.
        double precip = 0.0;
        if (rain_mm[static_cast<std::size_t>(d)] > 0.0) {
            const int h = local.hour;
            if (h >= 9 && h < 15) precip = rain_mm[static_cast<std::size_t>(d)] / 6.0;
        }

        char row[160];
        std::snprintf(row, sizeof row, "%s,%.1f,%.1f,%.1f,%.1f,%.2f",
                      format_iso8601(label).c_str(), ghi, dhi, par, t_air, precip);
        out << row << "\n";
    }
    out.close();

    std::ofstream hz(horizon_path);
    if (!hz) {
        std::fprintf(stderr, "cannot write %s\n", horizon_path.c_str());
        return 1;
    }
    hz << "# synthetic forest-edge skyline, compass azimuth (0 = north, clockwise)\n";
    hz << "azimuth_deg,elevation_deg\n";
    for (int a = 0; a < 360; a += 10) {
        const double el =
            1.1 + 0.5 * std::sin(deg2rad(a + 40.0)) + 0.25 * std::sin(deg2rad(3.0 * a));
        char row[64];
        std::snprintf(row, sizeof row, "%d,%.2f", a, std::max(0.8, el));
        hz << row << "\n";
    }
    return 0;
}
