#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agripv/common.hpp"
#include "agripv/irradiance.hpp"
#include "agripv/solar.hpp"
#include "agripv/weather.hpp"

namespace agripv {

// Vertically mounted bifacial array: parallel rows of panel bands, each band
// a rectangle from mounting_gap to mounting_gap + stack_count*module_height
// above ground. modules_per_row counts every module in the row, stacked
// stack_count high, so the band is modules_per_row/stack_count columns long.
// Rows are numbered along the front-face normal; the reference crop strip
// spans axis to axis between the two central rows and the full row length.
// Ground shadows treat each row structure as opaque from the ground up to the
// panel top edge (the mounting frame closes the gap); panel-face mutual
// shading is blocked by the module band alone.
struct SceneConfig {
    int n_rows = 3;
    double row_distance_m = 10.0;
    double azimuth_deg = -90.0;  // front-face azimuth (0 south, east negative)
    double module_width_m = 1.974;
    double module_height_m = 0.992;
    int modules_per_row = 20;
    int stack_count = 2;
    double mounting_gap_m = 0.8;

    int column_count() const { return modules_per_row / stack_count; }
    double row_length_m() const { return column_count() * module_width_m; }
    double band_bottom_m() const { return mounting_gap_m; }
    double band_top_m() const { return mounting_gap_m + stack_count * module_height_m; }
    double panel_area_m2() const { return row_length_m() * (band_top_m() - band_bottom_m()); }
    double land_area_m2() const { return n_rows * row_distance_m * row_length_m(); }

    // Index of the row whose faces stand for the array in per-panel shading,
    // and of the row bounding the reference strip from below.
    int representative_row() const { return (n_rows - 1) / 2; }
    // Row axis offset along the front normal, scene centered on the origin.
    double row_offset_m(int k) const { return (k - 0.5 * (n_rows - 1)) * row_distance_m; }
};

void validate_scene(const SceneConfig& scene);

enum class ShadingTarget { Ground, PanelFront, PanelRear };

const char* target_name(ShadingTarget t);

// Fraction of the reference ground strip covered by panel shadows for a given
// sun direction. Requires sun.z > 0; throws NumericalError at or below the
// horizon where the projection is undefined.
double beam_shading_ground(const SceneConfig& scene, const SolarVector& sun);

// Fraction of the representative row's face shaded by the neighbouring rows.
// Zero when the sun is behind or in the plane of the face (no beam reaches it).
double beam_shading_panel(const SceneConfig& scene, const SolarVector& sun, ShadingTarget face);

// Beam shading factor tabulated over the sky dome at 1-degree resolution.
// Cell centers sit at half degrees; masked cells lie below the local horizon.
struct ShadingMatrix {
    static constexpr int kAzBins = 360;
    static constexpr int kAltBins = 90;

    ShadingTarget target = ShadingTarget::Ground;
    std::uint64_t scene_hash = 0;
    std::vector<float> value;         // [alt * 360 + az]
    std::vector<std::uint8_t> masked;

    float at(int az_idx, int alt_idx) const { return value[alt_idx * kAzBins + az_idx]; }
    bool is_masked(int az_idx, int alt_idx) const { return masked[alt_idx * kAzBins + az_idx] != 0; }
};

std::uint64_t scene_fingerprint(const SceneConfig& scene, ShadingTarget target,
                                const HorizonProfile* horizon);

ShadingMatrix build_shading_matrix(const SceneConfig& scene, ShadingTarget target,
                                   const HorizonProfile* horizon = nullptr);

// Nearest tabulated value for a sun position (1-degree bins; a position 0.49
// degrees from a center still falls in its cell). nullopt for masked cells or
// positions below the horizon: the caller must zero the beam there.
std::optional<double> lookup(const ShadingMatrix& matrix, const SolarPosition& sun);

// Diffuse shading factor: radiance-weighted mean of the tabulated beam factor
// over the sky visible to a surface of the given orientation,
//   S_F,d = sum(S R cos(theta) dOmega) / sum(R cos(theta) dOmega).
// Masked cells and cells behind the surface are excluded from both sums.
// Throws NumericalError when the visible radiance integral is zero.
double diffuse_shading(const ShadingMatrix& matrix, const SkyRadianceField& field,
                       double tilt_deg, double azimuth_deg);

struct ShadeSample {
    double s_f_beam = 0.0;
    double s_f_diffuse = 0.0;
    double s_f_total = 0.0;
};

// Combines beam and diffuse shading into the fraction of the plane-of-array
// irradiance removed; ground-reflected irradiance passes unshaded:
//   s_f_total = (s_f_beam I_b + s_f_diffuse I_d) / (I_b + I_d + I_r),
// zero when the plane receives nothing.
ShadeSample composite_shading(double s_f_beam, double s_f_diffuse, double i_beam,
                              double i_diffuse, double i_reflected);

// Downsampled quadrature of the diffuse integral: matrix cells grouped into
// block_deg x block_deg blocks carrying exact per-block sums of cos(theta)
// dOmega and S cos(theta) dOmega, with the radiance sampled at block centers.
// Cuts the per-hour cost two orders of magnitude below the full grid.
struct DiffuseQuadrature {
    struct Block {
        float dx, dy, dz;       // block center direction (south, east, up)
        float w;                // sum of cos(theta) dOmega over visible cells
        float sw;               // sum of S cos(theta) dOmega
        std::uint16_t alt_row;  // altitude block row
    };
    int block_deg = 3;
    std::vector<Block> blocks;
};

DiffuseQuadrature build_diffuse_quadrature(const ShadingMatrix& matrix, double tilt_deg,
                                           double azimuth_deg, int block_deg);

// Per-hour radiance tables for the fast quadrature: the gradation term per
// altitude block row and the indicatrix sampled on cos(chi) in [-1, 1].
struct RadianceTables {
    std::vector<float> phi_row;  // 90 / block_deg entries
    std::vector<float> f_of_u;   // indicatrix lookup
};

RadianceTables build_radiance_tables(const RadianceCoefficients& rc, int block_deg,
                                     int f_samples = 1024);

double diffuse_shading_fast(const DiffuseQuadrature& quad, const RadianceTables& tables,
                            const SolarVector& sun);

// Text cache of a matrix with its scene fingerprint; loading verifies shape
// and returns the stored fingerprint for the caller to compare.
void save_matrix(const ShadingMatrix& matrix, const std::string& path);
ShadingMatrix load_matrix(const std::string& path);

} // namespace agripv
