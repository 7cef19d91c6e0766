#include "agripv/shading.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace agripv {

namespace {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

using Poly = std::vector<Vec2>;

double signed_area(const Poly& p) {
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % p.size()];
        a += u.x * v.y - v.x * u.y;
    }
    return 0.5 * a;
}

double poly_area(const Poly& p) { return std::fabs(signed_area(p)); }

void make_ccw(Poly& p) {
    if (signed_area(p) < 0.0) std::reverse(p.begin(), p.end());
}

// Sutherland-Hodgman: subject clipped against a convex CCW polygon.
Poly clip_convex(const Poly& subject, const Poly& clip) {
    Poly out = subject;
    for (std::size_t i = 0; i < clip.size() && !out.empty(); ++i) {
        const Vec2 a = clip[i];
        const Vec2 b = clip[(i + 1) % clip.size()];
        const double ex = b.x - a.x, ey = b.y - a.y;
        Poly in;
        in.swap(out);
        auto inside = [&](const Vec2& p) { return ex * (p.y - a.y) - ey * (p.x - a.x) >= 0.0; };
        for (std::size_t j = 0; j < in.size(); ++j) {
            const Vec2 cur = in[j];
            const Vec2 nxt = in[(j + 1) % in.size()];
            const bool cin = inside(cur), nin = inside(nxt);
            if (cin) out.push_back(cur);
            if (cin != nin) {
                const double dcur = ex * (cur.y - a.y) - ey * (cur.x - a.x);
                const double dnxt = ex * (nxt.y - a.y) - ey * (nxt.x - a.x);
                const double t = dcur / (dcur - dnxt);
                out.push_back(Vec2{cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
            }
        }
    }
    return out;
}

// |A_1 u ... u A_n| by inclusion-exclusion over convex polygons:
// sum_i ( |A_i| - |union_j>i (A_i n A_j)| ).
double union_area(const std::vector<Poly>& polys, double area_eps) {
    double total = 0.0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        std::vector<Poly> overlaps;
        for (std::size_t j = i + 1; j < polys.size(); ++j) {
            Poly q = clip_convex(polys[i], polys[j]);
            if (q.size() >= 3 && poly_area(q) > area_eps) overlaps.push_back(std::move(q));
        }
        total += poly_area(polys[i]) - union_area(overlaps, area_eps);
    }
    return total;
}

struct RowBasis {
    // Front normal n and along-row direction u on (south, east) axes.
    double nx, ny, ux, uy;
};

RowBasis scene_basis(const SceneConfig& scene) {
    const double az_e = deg2rad(-scene.azimuth_deg);
    RowBasis b;
    b.nx = std::cos(az_e);
    b.ny = std::sin(az_e);
    b.ux = -std::sin(az_e);
    b.uy = std::cos(az_e);
    return b;
}

struct Rect {
    double x1, x2, y1, y2;
    bool empty() const { return x2 <= x1 || y2 <= y1; }
};

// Area of the union of axis-aligned rectangles by slab sweep.
double rect_union_area(std::vector<Rect>& rects) {
    std::vector<double> xs;
    for (const Rect& r : rects) {
        xs.push_back(r.x1);
        xs.push_back(r.x2);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double total = 0.0;
    std::vector<std::pair<double, double>> spans;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double xm = 0.5 * (xs[i] + xs[i + 1]);
        spans.clear();
        for (const Rect& r : rects)
            if (r.x1 <= xm && xm < r.x2) spans.emplace_back(r.y1, r.y2);
        if (spans.empty()) continue;
        std::sort(spans.begin(), spans.end());
        double covered = 0.0, lo = spans[0].first, hi = spans[0].second;
        for (std::size_t k = 1; k < spans.size(); ++k) {
            if (spans[k].first > hi) {
                covered += hi - lo;
                lo = spans[k].first;
                hi = spans[k].second;
            } else {
                hi = std::max(hi, spans[k].second);
            }
        }
        covered += hi - lo;
        total += covered * (xs[i + 1] - xs[i]);
    }
    return total;
}

} // namespace

void validate_scene(const SceneConfig& scene) {
    if (scene.n_rows < 0 || scene.n_rows > 50)
        throw ConfigError("n_rows must lie in [0, 50]");
    if (!(scene.row_distance_m > 0.0))
        throw ConfigError("row_distance_m must be positive");
    if (!(scene.module_width_m > 0.0) || !(scene.module_height_m > 0.0))
        throw ConfigError("module dimensions must be positive");
    if (scene.modules_per_row < 1 || scene.stack_count < 1)
        throw ConfigError("modules_per_row and stack_count must be at least 1");
    if (scene.modules_per_row % scene.stack_count != 0)
        throw ConfigError("modules_per_row must be a multiple of stack_count");
    if (scene.mounting_gap_m < 0.0)
        throw ConfigError("mounting_gap_m must be non-negative");
    if (!(scene.azimuth_deg >= -360.0 && scene.azimuth_deg <= 360.0))
        throw ConfigError("azimuth_deg out of range");
}

const char* target_name(ShadingTarget t) {
    switch (t) {
        case ShadingTarget::Ground: return "ground";
        case ShadingTarget::PanelFront: return "panel_front";
        case ShadingTarget::PanelRear: return "panel_rear";
    }
    return "?";
}

double beam_shading_ground(const SceneConfig& scene, const SolarVector& sun) {
    if (scene.n_rows == 0) return 0.0;
    if (!(sun.z > 1e-9))
        throw NumericalError("ground shadow projection undefined for sun at or below horizon");

    const RowBasis basis = scene_basis(scene);
    const double st = sun.x * basis.nx + sun.y * basis.ny;
    const double ss = sun.x * basis.ux + sun.y * basis.uy;
    const double a = st / sun.z;  // shadow reach per unit height, along n
    const double b = ss / sun.z;  // and along the row

    const double L = scene.row_length_m();
    // Each row structure is opaque from the ground to the panel top edge:
    // mounting frames close the gap under the modules as far as ground
    // shadows are concerned. Face-to-face shading uses the module band only.
    const double zt = scene.band_top_m();
    const double t0 = scene.row_offset_m(scene.representative_row());
    const double d = scene.row_distance_m;

    Poly strip = {{t0, -L / 2}, {t0 + d, -L / 2}, {t0 + d, L / 2}, {t0, L / 2}};
    const double strip_area = d * L;
    const double area_eps = 1e-12 * strip_area;

    std::vector<Poly> shadows;
    for (int k = 0; k < scene.n_rows; ++k) {
        const double ok = scene.row_offset_m(k);
        // The structure edge at height z lands at t = ok - a z, s shifted by -b z.
        Poly shadow = {{ok, -L / 2},
                       {ok, L / 2},
                       {ok - a * zt, L / 2 - b * zt},
                       {ok - a * zt, -L / 2 - b * zt}};
        make_ccw(shadow);
        Poly clipped = clip_convex(shadow, strip);
        if (clipped.size() >= 3 && poly_area(clipped) > area_eps)
            shadows.push_back(std::move(clipped));
    }
    return clamp01(union_area(shadows, area_eps) / strip_area);
}

double beam_shading_panel(const SceneConfig& scene, const SolarVector& sun, ShadingTarget face) {
    if (face == ShadingTarget::Ground)
        throw ConfigError("beam_shading_panel requires a panel face target");
    if (scene.n_rows <= 1) return 0.0;

    const RowBasis basis = scene_basis(scene);
    const double sn = sun.x * basis.nx + sun.y * basis.ny;
    const double ss = sun.x * basis.ux + sun.y * basis.uy;
    const double face_sign = face == ShadingTarget::PanelFront ? 1.0 : -1.0;
    if (face_sign * sn <= 1e-12) return 0.0;  // no beam reaches this face

    const double L = scene.row_length_m();
    const double zb = scene.band_bottom_m();
    const double zt = scene.band_top_m();
    const int r = scene.representative_row();
    const double orow = scene.row_offset_m(r);

    std::vector<Rect> rects;
    for (int k = 0; k < scene.n_rows; ++k) {
        if (k == r) continue;
        const double dn = scene.row_offset_m(k) - orow;
        if (dn * sn <= 0.0) continue;  // occluder must stand between face and sun
        const double shift_s = -ss * dn / sn;
        const double shift_z = -sun.z * dn / sn;
        Rect rc{std::max(-L / 2 + shift_s, -L / 2), std::min(L / 2 + shift_s, L / 2),
                std::max(zb + shift_z, zb), std::min(zt + shift_z, zt)};
        if (!rc.empty()) rects.push_back(rc);
    }
    if (rects.empty()) return 0.0;
    return clamp01(rect_union_area(rects) / (L * (zt - zb)));
}

std::uint64_t scene_fingerprint(const SceneConfig& scene, ShadingTarget target,
                                const HorizonProfile* horizon) {
    std::ostringstream ss;
    ss << "v1|" << target_name(target) << '|' << scene.n_rows << '|'
       << format_double(scene.row_distance_m) << '|' << format_double(scene.azimuth_deg) << '|'
       << format_double(scene.module_width_m) << '|' << format_double(scene.module_height_m)
       << '|' << scene.modules_per_row << '|' << scene.stack_count << '|'
       << format_double(scene.mounting_gap_m);
    if (horizon && !horizon->empty()) {
        ss << "|hz";
        for (std::size_t i = 0; i < horizon->azimuth_deg.size(); ++i)
            ss << ';' << format_double(horizon->azimuth_deg[i]) << ','
               << format_double(horizon->elevation_deg[i]);
    }
    return fnv1a64(ss.str());
}

ShadingMatrix build_shading_matrix(const SceneConfig& scene, ShadingTarget target,
                                   const HorizonProfile* horizon) {
    validate_scene(scene);
    ShadingMatrix m;
    m.target = target;
    m.scene_hash = scene_fingerprint(scene, target, horizon);
    const std::size_t n = static_cast<std::size_t>(ShadingMatrix::kAzBins) * ShadingMatrix::kAltBins;
    m.value.assign(n, 0.0f);
    m.masked.assign(n, 0);

    for (int j = 0; j < ShadingMatrix::kAltBins; ++j) {
        const double alt = j + 0.5;
        for (int i = 0; i < ShadingMatrix::kAzBins; ++i) {
            const double az = wrap180(i + 0.5);
            const std::size_t idx = static_cast<std::size_t>(j) * ShadingMatrix::kAzBins + i;
            if (horizon && !horizon->empty() && alt < horizon->elevation_at(az)) {
                m.masked[idx] = 1;
                continue;
            }
            const SolarVector v = solar_vector(alt, az);
            const double s = target == ShadingTarget::Ground
                                 ? beam_shading_ground(scene, v)
                                 : beam_shading_panel(scene, v, target);
            m.value[idx] = static_cast<float>(s);
        }
    }
    return m;
}

std::optional<double> lookup(const ShadingMatrix& matrix, const SolarPosition& sun) {
    if (sun.altitude_deg < 0.0) return std::nullopt;
    const int j = std::min(ShadingMatrix::kAltBins - 1,
                           static_cast<int>(std::floor(sun.altitude_deg)));
    const int i = static_cast<int>(std::floor(wrap360(sun.azimuth_deg))) % ShadingMatrix::kAzBins;
    if (matrix.is_masked(i, j)) return std::nullopt;
    return matrix.at(i, j);
}

namespace {

void surface_normal(double tilt_deg, double azimuth_deg, double& nx, double& ny, double& nz) {
    const double tilt = deg2rad(tilt_deg);
    const double az_e = deg2rad(-azimuth_deg);
    nx = std::sin(tilt) * std::cos(az_e);
    ny = std::sin(tilt) * std::sin(az_e);
    nz = std::cos(tilt);
}

} // namespace

double diffuse_shading(const ShadingMatrix& matrix, const SkyRadianceField& field,
                       double tilt_deg, double azimuth_deg) {
    double nx, ny, nz;
    surface_normal(tilt_deg, azimuth_deg, nx, ny, nz);
    constexpr double cell = kPi / 180.0;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < ShadingMatrix::kAltBins; ++j) {
        const double alt = deg2rad(j + 0.5);
        const double ca = std::cos(alt), sa = std::sin(alt);
        const double domega = ca * cell * cell;
        for (int i = 0; i < ShadingMatrix::kAzBins; ++i) {
            if (matrix.is_masked(i, j)) continue;
            const double az_e = deg2rad(-(wrap180(i + 0.5)));
            const double ct = ca * std::cos(az_e) * nx + ca * std::sin(az_e) * ny + sa * nz;
            if (ct <= 0.0) continue;
            const double r = field.at(i, j);
            const double w = r * ct * domega;
            num += matrix.at(i, j) * w;
            den += w;
        }
    }
    if (!(den > 0.0))
        throw NumericalError("zero visible sky radiance in diffuse shading integral");
    return clamp01(num / den);
}

ShadeSample composite_shading(double s_f_beam, double s_f_diffuse, double i_beam,
                              double i_diffuse, double i_reflected) {
    ShadeSample out;
    out.s_f_beam = s_f_beam;
    out.s_f_diffuse = s_f_diffuse;
    const double total = i_beam + i_diffuse + i_reflected;
    out.s_f_total =
        total > 0.0 ? clamp01((s_f_beam * i_beam + s_f_diffuse * i_diffuse) / total) : 0.0;
    return out;
}

DiffuseQuadrature build_diffuse_quadrature(const ShadingMatrix& matrix, double tilt_deg,
                                           double azimuth_deg, int block_deg) {
    if (block_deg < 1 || 90 % block_deg != 0 || 360 % block_deg != 0)
        throw ConfigError("diffuse block size must divide both 90 and 360 degrees");
    double nx, ny, nz;
    surface_normal(tilt_deg, azimuth_deg, nx, ny, nz);
    constexpr double cell = kPi / 180.0;

    DiffuseQuadrature quad;
    quad.block_deg = block_deg;
    const int rows = ShadingMatrix::kAltBins / block_deg;
    const int cols = ShadingMatrix::kAzBins / block_deg;
    quad.blocks.reserve(static_cast<std::size_t>(rows) * cols / 2);

    for (int br = 0; br < rows; ++br) {
        for (int bc = 0; bc < cols; ++bc) {
            double w = 0.0, sw = 0.0;
            for (int j = br * block_deg; j < (br + 1) * block_deg; ++j) {
                const double alt = deg2rad(j + 0.5);
                const double ca = std::cos(alt), sa = std::sin(alt);
                const double domega = ca * cell * cell;
                for (int i = bc * block_deg; i < (bc + 1) * block_deg; ++i) {
                    if (matrix.is_masked(i, j)) continue;
                    const double az_e = deg2rad(-(wrap180(i + 0.5)));
                    const double ct =
                        ca * std::cos(az_e) * nx + ca * std::sin(az_e) * ny + sa * nz;
                    if (ct <= 0.0) continue;
                    w += ct * domega;
                    sw += matrix.at(i, j) * ct * domega;
                }
            }
            if (w <= 0.0) continue;
            const double alt_c = deg2rad((br + 0.5) * block_deg);
            const double az_c = deg2rad(-wrap180((bc + 0.5) * block_deg));
            DiffuseQuadrature::Block blk;
            blk.dx = static_cast<float>(std::cos(alt_c) * std::cos(az_c));
            blk.dy = static_cast<float>(std::cos(alt_c) * std::sin(az_c));
            blk.dz = static_cast<float>(std::sin(alt_c));
            blk.w = static_cast<float>(w);
            blk.sw = static_cast<float>(sw);
            blk.alt_row = static_cast<std::uint16_t>(br);
            quad.blocks.push_back(blk);
        }
    }
    return quad;
}

RadianceTables build_radiance_tables(const RadianceCoefficients& rc, int block_deg,
                                     int f_samples) {
    RadianceTables t;
    const int rows = ShadingMatrix::kAltBins / block_deg;
    t.phi_row.resize(rows);
    for (int r = 0; r < rows; ++r) {
        const double cz = std::max(std::sin(deg2rad((r + 0.5) * block_deg)), 0.00873);
        t.phi_row[r] = static_cast<float>(1.0 + rc.a * std::exp(rc.b / cz));
    }
    t.f_of_u.resize(f_samples);
    const double exp_dhalfpi = std::exp(rc.d * kPi / 2.0);
    for (int i = 0; i < f_samples; ++i) {
        const double u = -1.0 + 2.0 * i / (f_samples - 1);
        const double chi = std::acos(std::clamp(u, -1.0, 1.0));
        t.f_of_u[i] = static_cast<float>(1.0 + rc.c * (std::exp(rc.d * chi) - exp_dhalfpi) +
                                         rc.e * u * u);
    }
    return t;
}

double diffuse_shading_fast(const DiffuseQuadrature& quad, const RadianceTables& tables,
                            const SolarVector& sun) {
    const double scale = 0.5 * (tables.f_of_u.size() - 1);
    double num = 0.0, den = 0.0;
    for (const DiffuseQuadrature::Block& b : quad.blocks) {
        double u = b.dx * sun.x + b.dy * sun.y + b.dz * sun.z;
        u = std::clamp(u, -1.0, 1.0);
        const double f = tables.f_of_u[static_cast<std::size_t>((u + 1.0) * scale + 0.5)];
        const double lv = std::max(static_cast<double>(tables.phi_row[b.alt_row]) * f, 1e-6);
        num += b.sw * lv;
        den += b.w * lv;
    }
    if (!(den > 0.0))
        throw NumericalError("zero visible sky radiance in diffuse shading integral");
    return clamp01(num / den);
}

void save_matrix(const ShadingMatrix& matrix, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write shading matrix '" + path + "'");
    out << "# shading-matrix v1\n";
    out << "target " << target_name(matrix.target) << "\n";
    out << "scene " << hex16(matrix.scene_hash) << "\n";
    out << "rows " << ShadingMatrix::kAltBins << " cols " << ShadingMatrix::kAzBins << "\n";
    char buf[24];
    for (int j = 0; j < ShadingMatrix::kAltBins; ++j) {
        for (int i = 0; i < ShadingMatrix::kAzBins; ++i) {
            if (i) out << ' ';
            if (matrix.is_masked(i, j)) {
                out << "-1";
            } else {
                std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(matrix.at(i, j)));
                out << buf;
            }
        }
        out << "\n";
    }
}

ShadingMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open shading matrix '" + path + "'");
    std::string line, word;
    if (!std::getline(in, line) || line.rfind("# shading-matrix v1", 0) != 0)
        throw DataError(path + ": not a shading matrix cache");
    ShadingMatrix m;
    std::string tname, scene_hex;
    int rows = 0, cols = 0;
    in >> word >> tname >> word >> scene_hex >> word >> rows >> word >> cols;
    if (!in || rows != ShadingMatrix::kAltBins || cols != ShadingMatrix::kAzBins)
        throw DataError(path + ": unexpected shading matrix shape");
    if (tname == "ground") m.target = ShadingTarget::Ground;
    else if (tname == "panel_front") m.target = ShadingTarget::PanelFront;
    else if (tname == "panel_rear") m.target = ShadingTarget::PanelRear;
    else throw DataError(path + ": unknown target '" + tname + "'");
    m.scene_hash = std::stoull(scene_hex, nullptr, 16);
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    m.value.assign(n, 0.0f);
    m.masked.assign(n, 0);
    for (std::size_t idx = 0; idx < n; ++idx) {
        double v;
        if (!(in >> v)) throw DataError(path + ": truncated shading matrix");
        if (v < 0.0) m.masked[idx] = 1;
        else m.value[idx] = static_cast<float>(v);
    }
    return m;
}

} // namespace agripv
