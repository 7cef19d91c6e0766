#include "agripv/solar.hpp"

#include <algorithm>
#include <cmath>

namespace agripv {

double refraction_correction_deg(double h) {
    // NOAA solar calculator piecewise fit; h is the true altitude in degrees.
    if (h > 85.0) return 0.0;
    double corr_arcsec;
    double th = std::tan(deg2rad(h));
    if (h > 5.0) {
        corr_arcsec = 58.1 / th - 0.07 / (th * th * th) + 0.000086 / std::pow(th, 5);
    } else if (h > -0.575) {
        corr_arcsec = 1735.0 + h * (-518.2 + h * (103.4 + h * (-12.79 + h * 0.711)));
    } else {
        corr_arcsec = -20.774 / th;
    }
    return corr_arcsec / 3600.0;
}

SolarPosition solar_position(std::int64_t unix_sec, const Site& site, double delta_t_sec) {
    // Julian centuries of terrestrial time since J2000.0 for the orbital
    // elements; Earth rotation (sidereal time) stays on UT.
    const double jd_ut = unix_sec / 86400.0 + 2440587.5;
    const double jd_tt = jd_ut + delta_t_sec / 86400.0;
    const double T = (jd_tt - 2451545.0) / 36525.0;

    const double L0 = wrap360(280.46646 + T * (36000.76983 + T * 0.0003032));
    const double M = deg2rad(357.52911 + T * (35999.05029 - T * 0.0001537));
    const double C = (1.914602 - T * (0.004817 + T * 0.000014)) * std::sin(M) +
                     (0.019993 - T * 0.000101) * std::sin(2.0 * M) + 0.000289 * std::sin(3.0 * M);
    const double true_long = L0 + C;
    const double omega = deg2rad(125.04 - 1934.136 * T);
    const double lambda = deg2rad(true_long - 0.00569 - 0.00478 * std::sin(omega));

    const double eps0 =
        23.0 + (26.0 + (21.448 - T * (46.8150 + T * (0.00059 - T * 0.001813))) / 60.0) / 60.0;
    const double eps = deg2rad(eps0 + 0.00256 * std::cos(omega));

    const double decl = std::asin(std::sin(eps) * std::sin(lambda));
    const double ra = std::atan2(std::cos(eps) * std::sin(lambda), std::cos(lambda));

    // Greenwich apparent sidereal time (mean + equation-of-equinoxes nutation term).
    double gmst = 280.46061837 + 360.98564736629 * (jd_ut - 2451545.0) +
                  0.000387933 * T * T - T * T * T / 38710000.0;
    gmst += -0.00478 * std::sin(omega) * std::cos(eps);  // nutation in RA, deg

    const double H = deg2rad(wrap360(gmst + site.longitude_deg - rad2deg(ra)));
    const double lat = deg2rad(site.latitude_deg);

    const double sin_alt =
        std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(H);
    const double alt_true = rad2deg(std::asin(std::clamp(sin_alt, -1.0, 1.0)));

    // Azimuth from south, positive towards west (Meeus 13.5); this is already
    // the canonical convention (east negative).
    const double az = rad2deg(std::atan2(
        std::sin(H), std::cos(H) * std::sin(lat) - std::tan(decl) * std::cos(lat)));

    SolarPosition pos;
    pos.altitude_astro_deg = alt_true;
    pos.altitude_deg = alt_true + refraction_correction_deg(alt_true);
    pos.azimuth_deg = wrap180(az);
    pos.above_horizon = pos.altitude_deg > 0.0;
    return pos;
}

SolarVector solar_vector(double altitude_deg, double azimuth_canonical_deg) {
    // East-positive azimuth in the vector frame mirrors the canonical one.
    const double alt = deg2rad(altitude_deg);
    const double az_e = deg2rad(-azimuth_canonical_deg);
    return SolarVector{std::cos(alt) * std::cos(az_e), std::cos(alt) * std::sin(az_e),
                       std::sin(alt)};
}

SolarVector solar_vector(const SolarPosition& pos) {
    return solar_vector(pos.altitude_deg, pos.azimuth_deg);
}

double incidence_angle_deg(const SolarVector& sun, double tilt_deg, double azimuth_deg) {
    const double tilt = deg2rad(tilt_deg);
    const double az_e = deg2rad(-azimuth_deg);
    // Surface normal on the same (south, east, zenith) axes.
    const double nx = std::sin(tilt) * std::cos(az_e);
    const double ny = std::sin(tilt) * std::sin(az_e);
    const double nz = std::cos(tilt);
    const double dot = std::clamp(sun.x * nx + sun.y * ny + sun.z * nz, -1.0, 1.0);
    return rad2deg(std::acos(dot));
}

double eccentricity_factor(int doy) {
    return 1.0 + 0.033 * std::cos(2.0 * kPi * doy / 365.0);
}

double extraterrestrial_daily_mj(double latitude_deg, int doy) {
    const double phi = deg2rad(latitude_deg);
    const double dr = eccentricity_factor(doy);
    const double decl = 0.409 * std::sin(2.0 * kPi * doy / 365.0 - 1.39);
    double cos_ws = -std::tan(phi) * std::tan(decl);
    cos_ws = std::clamp(cos_ws, -1.0, 1.0);  // polar day / night
    const double ws = std::acos(cos_ws);
    const double ra = 24.0 * 60.0 / kPi * 0.0820 * dr *
                      (ws * std::sin(phi) * std::sin(decl) +
                       std::cos(phi) * std::cos(decl) * std::sin(ws));
    return std::max(0.0, ra);
}

} // namespace agripv
