#include "agripv/irradiance.hpp"

#include <algorithm>
#include <cmath>

namespace agripv {

double erbs_diffuse_fraction(double kt) {
    if (kt <= 0.22) return 1.0 - 0.09 * kt;
    if (kt <= 0.80)
        return 0.9511 - 0.1604 * kt + 4.388 * kt * kt - 16.638 * kt * kt * kt +
               12.336 * kt * kt * kt * kt;
    return 0.165;
}

double clearness_index(double ghi, double sun_altitude_deg, int doy) {
    if (ghi <= 0.0 || sun_altitude_deg <= 0.0) return 0.0;
    const double i0h = kSolarConstant * eccentricity_factor(doy) *
                       std::sin(deg2rad(sun_altitude_deg));
    return std::clamp(ghi / i0h, 0.0, 1.2);
}

double diffuse_horizontal(double ghi, double sun_altitude_deg, int doy) {
    if (ghi <= 0.0) return 0.0;
    if (sun_altitude_deg <= 0.0) return ghi;  // twilight residual is all diffuse
    return erbs_diffuse_fraction(clearness_index(ghi, sun_altitude_deg, doy)) * ghi;
}

double direct_normal(double ghi, double dhi, double sun_altitude_deg, int doy) {
    if (sun_altitude_deg <= 0.0) return 0.0;
    const double sin_alt = std::sin(deg2rad(sun_altitude_deg));
    double dni = std::max(0.0, ghi - dhi) / std::max(sin_alt, 0.01745);
    return std::min(dni, kSolarConstant * eccentricity_factor(doy));
}

PARSplit diffuse_fraction_par(double par, double ghi, double dhi) {
    if (par < 0.0 || ghi < 0.0 || dhi < 0.0) throw DataError("negative irradiance in PAR split");
    if (par == 0.0) return {0.0, 0.0};
    if (ghi <= 0.0) throw DataError("PAR > 0 with GHI = 0 is inconsistent");
    const double q = clamp01(dhi / ghi);
    const double f = std::min(1.0, q * (1.0 + 0.3 * (1.0 - q * q)));
    PARSplit out;
    out.diffuse = f * par;
    out.beam = par - out.diffuse;
    return out;
}

double relative_air_mass(double zenith_deg) {
    if (zenith_deg >= 90.0) zenith_deg = 90.0;
    const double cz = std::cos(deg2rad(zenith_deg));
    return 1.0 / (cz + 0.50572 * std::pow(96.07995 - zenith_deg, -1.6364));
}

SkySituation sky_situation(double ghi, double dhi, double sun_altitude_deg, int doy) {
    SkySituation s;
    s.zenith_rad = deg2rad(90.0 - std::max(sun_altitude_deg, 0.0));
    if (dhi <= 0.0) return s;  // overcast-bin defaults, delta 0
    const double m = relative_air_mass(90.0 - std::max(sun_altitude_deg, 0.0));
    const double i0n = kSolarConstant * eccentricity_factor(doy);
    s.delta = std::min(m * dhi / i0n, 1.0);
    const double dni = direct_normal(ghi, dhi, sun_altitude_deg, doy);
    const double z3 = 1.041 * s.zenith_rad * s.zenith_rad * s.zenith_rad;
    s.epsilon = ((dhi + dni) / dhi + z3) / (1.0 + z3);
    static constexpr double edges[7] = {1.065, 1.23, 1.5, 1.95, 2.8, 4.5, 6.2};
    s.bin = 7;
    for (int i = 0; i < 7; ++i) {
        if (s.epsilon < edges[i]) {
            s.bin = i;
            break;
        }
    }
    return s;
}

namespace {

// Perez et al. (1990) composite brightness coefficients: F11 F12 F13 F21 F22
// F23 per clearness bin.
constexpr double kTranspositionCoeff[8][6] = {
    {-0.008, 0.588, -0.062, -0.060, 0.072, -0.022},
    {0.130, 0.683, -0.151, -0.019, 0.066, -0.029},
    {0.330, 0.487, -0.221, 0.055, -0.064, -0.026},
    {0.568, 0.187, -0.295, 0.109, -0.152, -0.014},
    {0.873, -0.392, -0.362, 0.226, -0.462, 0.001},
    {1.132, -1.237, -0.412, 0.288, -0.823, 0.056},
    {1.060, -1.600, -0.359, 0.264, -1.127, 0.131},
    {0.678, -0.327, -0.250, 0.156, -1.377, 0.251},
};

// Perez et al. (1993) all-weather radiance coefficients: a1..a4 b1..b4 c1..c4
// d1..d4 e1..e4 per clearness bin.
constexpr double kRadianceCoeff[8][20] = {
    {1.3525, -0.2576, -0.2690, -1.4366, -0.7670, 0.0007, 1.2734, -0.1233, 2.8000, 0.6004,
     1.2375, 1.0000, 1.8734, 0.6297, 0.9738, 0.2809, 0.0356, -0.1246, -0.5718, 0.9938},
    {-1.2219, -0.7730, 1.4148, 1.1016, -0.2054, 0.0367, -3.9128, 0.9156, 6.9750, 0.1774,
     6.4477, -0.1239, -1.5798, -0.5081, -1.7812, 0.1080, 0.2624, 0.0672, -0.2190, -0.4285},
    {-1.1000, -0.2515, 0.8952, 0.0156, 0.2782, -0.1812, -4.5000, 1.1766, 24.7219, -13.0812,
     -37.7000, 34.8438, -5.0000, 1.5218, 3.9229, -2.6204, -0.0156, 0.1597, 0.4199, -0.5562},
    {-0.5484, -0.6654, -0.2672, 0.7117, 0.7234, -0.6219, -5.6812, 2.6297, 33.3389, -18.3000,
     -62.2500, 52.0781, -3.5000, 0.0016, 1.1477, 0.1062, 0.4659, -0.3296, -0.0876, -0.0329},
    {-0.6000, -0.3566, -2.5000, 2.3250, 0.2937, 0.0496, -5.6812, 1.8415, 21.0000, -4.7656,
     -21.5906, 7.2492, -3.5000, -0.1554, 1.4062, 0.3988, 0.0032, 0.0766, -0.0656, -0.1294},
    {-1.0156, -0.3670, 1.0078, 1.4051, 0.2875, -0.5328, -3.8500, 3.3750, 14.0000, -0.9999,
     -7.1406, 7.5469, -3.4000, -0.1078, -1.0750, 1.5702, -0.0672, 0.4016, 0.3017, -0.4844},
    {-1.0000, 0.0211, 0.5025, -0.5119, -0.3000, 0.1922, 0.7023, -1.6317, 19.0000, -5.0000,
     1.2438, -1.9094, -4.0000, 0.0250, 0.3844, 0.2656, 1.0468, -0.3788, -2.4517, 1.4656},
    {-1.0500, 0.0289, 0.4260, 0.3590, -0.3250, 0.1156, 0.7781, 0.0025, 31.0625, -14.5000,
     -46.1148, 55.3750, -7.2312, 0.4050, 13.3500, 0.6234, 1.5000, -0.6426, 1.8564, 0.5636},
};

} // namespace

void perez_brightness_coefficients(const SkySituation& sky, double& f1, double& f2) {
    const double* c = kTranspositionCoeff[sky.bin];
    f1 = std::max(0.0, c[0] + c[1] * sky.delta + c[2] * sky.zenith_rad);
    f2 = c[3] + c[4] * sky.delta + c[5] * sky.zenith_rad;
}

PlaneIrradiance transpose_with_coefficients(double ghi, double dhi, const SolarPosition& sun,
                                            double tilt_deg, double azimuth_deg, double albedo,
                                            int doy, double f1, double f2) {
    if (!(tilt_deg >= 0.0 && tilt_deg <= 90.0))
        throw ConfigError("surface tilt must lie in [0, 90] deg");
    PlaneIrradiance out;
    if (ghi <= 0.0) return out;

    const double tilt = deg2rad(tilt_deg);
    const SolarVector sv = solar_vector(sun.altitude_deg, sun.azimuth_deg);
    const double cos_inc = std::cos(deg2rad(incidence_angle_deg(sv, tilt_deg, azimuth_deg)));

    if (sun.altitude_deg > 0.0) {
        const double dni = direct_normal(ghi, dhi, sun.altitude_deg, doy);
        out.beam = dni * std::max(0.0, cos_inc);
    }
    const double a = std::max(0.0, cos_inc);
    const double b = std::max(std::cos(deg2rad(85.0)), std::cos(sky_situation(ghi, dhi, sun.altitude_deg, doy).zenith_rad));
    out.diffuse = dhi * ((1.0 - f1) * (1.0 + std::cos(tilt)) / 2.0 + f1 * a / b +
                         f2 * std::sin(tilt));
    out.diffuse = std::max(0.0, out.diffuse);
    out.reflected = albedo * ghi * (1.0 - std::cos(tilt)) / 2.0;
    return out;
}

PlaneIrradiance transpose(double ghi, double dhi, const SolarPosition& sun, double tilt_deg,
                          double azimuth_deg, double albedo, int doy) {
    double f1 = 0.0, f2 = 0.0;
    if (dhi > 0.0 && sun.altitude_deg > 0.0)
        perez_brightness_coefficients(sky_situation(ghi, dhi, sun.altitude_deg, doy), f1, f2);
    return transpose_with_coefficients(ghi, dhi, sun, tilt_deg, azimuth_deg, albedo, doy, f1, f2);
}

RadianceCoefficients perez_radiance_coefficients(const SkySituation& sky) {
    const double* t = kRadianceCoeff[sky.bin];
    const double z = sky.zenith_rad;
    const double d = sky.delta;
    RadianceCoefficients rc;
    rc.a = t[0] + t[1] * z + d * (t[2] + t[3] * z);
    rc.b = t[4] + t[5] * z + d * (t[6] + t[7] * z);
    if (sky.bin == 0) {
        // Bin-1 closures from the original model.
        rc.c = std::exp(std::pow(std::max(1e-9, d * (t[8] + t[9] * z)), t[10])) - t[11];
        rc.d = -std::exp(std::min(50.0, d * (t[12] + t[13] * z))) + t[14] + d * t[15];
    } else {
        rc.c = t[8] + t[9] * z + d * (t[10] + t[11] * z);
        rc.d = t[12] + t[13] * z + d * (t[14] + t[15] * z);
    }
    rc.e = t[16] + t[17] * z + d * (t[18] + t[19] * z);
    // Keep the indicatrix exponent decaying; inputs outside the model's
    // fitting domain can otherwise push d positive and overflow exp(d*chi).
    rc.d = std::min(rc.d, -1e-4);
    return rc;
}

SkyRadianceField sky_radiance(double ghi, double dhi, const SolarPosition& sun, int doy) {
    SkyRadianceField field;
    field.value.assign(static_cast<std::size_t>(SkyRadianceField::kAzBins) *
                           SkyRadianceField::kAltBins,
                       0.0);
    if (dhi <= 0.0) return field;

    const SkySituation sky = sky_situation(ghi, dhi, sun.altitude_deg, doy);
    const RadianceCoefficients rc = perez_radiance_coefficients(sky);
    const SolarVector sv = solar_vector(std::max(sun.altitude_deg, 0.0), sun.azimuth_deg);
    const double exp_dhalfpi = std::exp(rc.d * kPi / 2.0);
    constexpr double cell = kPi / 180.0;

    double horiz_integral = 0.0;
    for (int ai = 0; ai < SkyRadianceField::kAltBins; ++ai) {
        const double alt = ai + 0.5;
        const double cz = std::max(std::sin(deg2rad(alt)), 0.00873);  // cos of cell zenith
        const double grad = 1.0 + rc.a * std::exp(rc.b / cz);
        const double sin_alt = std::sin(deg2rad(alt));
        const double cos_alt = std::cos(deg2rad(alt));
        const double domega = cos_alt * cell * cell;
        for (int zi = 0; zi < SkyRadianceField::kAzBins; ++zi) {
            // Cell azimuth in the east-positive vector frame.
            const double az_e = deg2rad(-(wrap180(zi + 0.5)));
            const double cx = cos_alt * std::cos(az_e);
            const double cy = cos_alt * std::sin(az_e);
            const double cos_chi = std::clamp(cx * sv.x + cy * sv.y + sin_alt * sv.z, -1.0, 1.0);
            const double chi = std::acos(cos_chi);
            const double indic =
                1.0 + rc.c * (std::exp(rc.d * chi) - exp_dhalfpi) + rc.e * cos_chi * cos_chi;
            const double lv = std::max(grad * indic, 1e-6);
            field.value[static_cast<std::size_t>(ai) * SkyRadianceField::kAzBins + zi] = lv;
            horiz_integral += lv * sin_alt * domega;
        }
    }
    const double scale = dhi / horiz_integral;
    for (double& v : field.value) v *= scale;
    return field;
}

} // namespace agripv
