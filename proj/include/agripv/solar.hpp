#pragma once

#include <array>
#include <cstdint>

#include "agripv/common.hpp"

namespace agripv {

// Azimuth convention used throughout: 0 = south, east negative, west positive,
// wrapped to (-180, 180]. Surface azimuths follow the same convention.
struct SolarPosition {
    double altitude_deg = 0.0;        // apparent (refraction-corrected) altitude
    double azimuth_deg = 0.0;         // canonical convention above
    double altitude_astro_deg = 0.0;  // without refraction
    bool above_horizon = false;       // vs. flat horizon unless re-flagged by a profile
};

// Unit vector on axes (x south, y east, z zenith):
//   x = cos(alt) cos(az_e), y = cos(alt) sin(az_e), z = sin(alt)
// with az_e measured positive towards east (the mirror of the canonical
// user-facing azimuth).
struct SolarVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Medium-precision solar ephemeris (Meeus, as used by the NOAA solar
// calculator; apparent position better than ~0.01 deg for 1950-2050).
// delta_t_sec is the fixed TT-UT offset applied to the orbital terms.
SolarPosition solar_position(std::int64_t unix_sec, const Site& site, double delta_t_sec = 69.0);

// NOAA piecewise fit of atmospheric refraction; returns the correction in
// degrees to add to the true altitude.
double refraction_correction_deg(double altitude_true_deg);

SolarVector solar_vector(double altitude_deg, double azimuth_canonical_deg);
SolarVector solar_vector(const SolarPosition& pos);

// Angle of incidence (deg) between the sun direction and the normal of a
// surface tilted tilt_deg from horizontal, facing azimuth_deg (canonical).
// Clamped to [0, 180]: values above 90 mean the sun is behind the surface.
double incidence_angle_deg(const SolarVector& sun, double tilt_deg, double azimuth_deg);

// Daily extraterrestrial radiation on a horizontal plane, MJ/m2/day
// (FAO-56 Eq. 21). doy is the 1-based day of year.
double extraterrestrial_daily_mj(double latitude_deg, int doy);

// Sun-Earth distance correction factor (1/r^2), FAO-56 Eq. 23.
double eccentricity_factor(int doy);

} // namespace agripv
