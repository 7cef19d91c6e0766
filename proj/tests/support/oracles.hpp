#pragma once

// Independent reference implementations used only by the tests. Each one
// recomputes a quantity the library produces, by a different method, so
// agreement is evidence rather than tautology.

#include <cstdint>
#include <vector>

#include "agripv/shading.hpp"
#include "agripv/solar.hpp"

namespace oracle {

// Blanco-Muriel et al. 2001 (PSA algorithm). Topocentric, no refraction.
// Azimuth returned in the library convention (0 south, east negative).
struct PsaPosition {
    double altitude_deg;
    double azimuth_deg;
};
PsaPosition psa_solar_position(std::int64_t unix_sec, double latitude_deg, double longitude_deg);

// Monte-Carlo ray test of beam shading on the reference ground strip:
// uniform points on the strip, each traced towards the sun against every
// panel band. Standard error ~ 1/(2 sqrt(n)).
double mc_ground_shading(const agripv::SceneConfig& scene, const agripv::SolarVector& sun,
                         int n_samples, std::uint64_t seed);

// Same test for a face of the representative row (mutual row shading).
double mc_panel_shading(const agripv::SceneConfig& scene, const agripv::SolarVector& sun,
                        agripv::ShadingTarget face, int n_samples, std::uint64_t seed);

// Hypervolume of a 3-objective minimization set against a reference point
// (sweep over the third axis, staircase area per slab). Points outside the
// reference box contribute nothing.
struct Point3 {
    double a, b, c;
};
double hypervolume3(std::vector<Point3> pts, const Point3& ref);

} // namespace oracle
