#pragma once

#include <vector>

#include "agripv/common.hpp"
#include "agripv/solar.hpp"

namespace agripv {

// Diffuse fraction dhi/ghi from the hourly clearness index (Erbs et al. 1982).
double erbs_diffuse_fraction(double kt);

// Hourly clearness index ghi / (extraterrestrial horizontal irradiance).
double clearness_index(double ghi, double sun_altitude_deg, int doy);

// Estimated DHI when the weather file carries none: Erbs applied to kt.
double diffuse_horizontal(double ghi, double sun_altitude_deg, int doy);

// Direct normal irradiance from closure (ghi - dhi)/sin(alt), capped at the
// eccentricity-corrected solar constant. Zero at or below the horizon.
double direct_normal(double ghi, double dhi, double sun_altitude_deg, int doy);

struct PARSplit {
    double beam = 0.0;     // W/m2
    double diffuse = 0.0;  // W/m2
};

// Splits PAR into beam and diffuse parts. The diffuse PAR fraction follows
// the spectral relation of Spitters et al. (1986): with q = dhi/ghi,
// f = q * (1 + 0.3 * (1 - q^2)), capped at 1. PAR in overcast skies is almost
// entirely diffuse because cloud transmittance is nearly spectrally flat
// while Rayleigh scattering enriches clear-sky diffuse in the PAR band.
PARSplit diffuse_fraction_par(double par, double ghi, double dhi);

// Per-hour anisotropy state shared by the transposition and radiance models.
struct SkySituation {
    double zenith_rad = kPi / 2.0;
    double delta = 0.0;    // sky brightness
    double epsilon = 1.0;  // sky clearness
    int bin = 0;           // 0..7
};

SkySituation sky_situation(double ghi, double dhi, double sun_altitude_deg, int doy);

// Circumsolar (F1, clamped >= 0) and horizon-band (F2) brightness
// coefficients of the Perez transposition for the given sky state.
void perez_brightness_coefficients(const SkySituation& sky, double& f1, double& f2);

// Kasten & Young (1989) relative air mass; zenith in degrees.
double relative_air_mass(double zenith_deg);

struct PlaneIrradiance {
    double beam = 0.0;
    double diffuse = 0.0;
    double reflected = 0.0;

    double total() const { return beam + diffuse + reflected; }
};

// Perez et al. (1990) anisotropic transposition onto a plane tilted tilt_deg
// facing azimuth_deg (canonical convention), plus isotropic ground reflection
// albedo * ghi * (1 - cos(tilt)) / 2. Below the horizon the beam is zero and
// the diffuse term falls back to zero circumsolar (F1 = 0).
PlaneIrradiance transpose(double ghi, double dhi, const SolarPosition& sun, double tilt_deg,
                          double azimuth_deg, double albedo, int doy);

// Same geometry with externally supplied brightness coefficients; F1 = F2 = 0
// is the isotropic-sky limit.
PlaneIrradiance transpose_with_coefficients(double ghi, double dhi, const SolarPosition& sun,
                                            double tilt_deg, double azimuth_deg, double albedo,
                                            int doy, double f1, double f2);

// Gradation/indicatrix coefficients of the Perez et al. (1993) all-weather
// relative sky radiance model, lv = [1 + a exp(b / cos Z)] *
// [1 + c (exp(d chi) - exp(d pi/2)) + e cos^2 chi].
struct RadianceCoefficients {
    double a = 0.0, b = -1.0, c = 0.0, d = -1.0, e = 0.0;
};

RadianceCoefficients perez_radiance_coefficients(const SkySituation& sky);

// Sky dome radiance on the 1-degree grid used by the shading integrals:
// rows are altitude bands (centers 0.5..89.5 deg), columns azimuth bands
// (canonical azimuth wrapped to [0,360), centers 0.5..359.5 deg). Values are
// scaled so the horizontal-projected integral equals dhi.
struct SkyRadianceField {
    static constexpr int kAzBins = 360;
    static constexpr int kAltBins = 90;
    std::vector<double> value;  // [alt * 360 + az]

    double at(int az_idx, int alt_idx) const { return value[alt_idx * kAzBins + az_idx]; }
};

SkyRadianceField sky_radiance(double ghi, double dhi, const SolarPosition& sun, int doy);

} // namespace agripv
