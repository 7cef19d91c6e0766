#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace agripv {

inline constexpr double kPi = 3.14159265358979323846;
// Solar constant, W/m2 (extraterrestrial normal irradiance at mean Earth-Sun distance)
inline constexpr double kSolarConstant = 1367.0;

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

// Wrap an angle to [0, 360).
inline double wrap360(double deg) {
    double a = std::fmod(deg, 360.0);
    return a < 0.0 ? a + 360.0 : a;
}

// Wrap an angle to (-180, 180].
inline double wrap180(double deg) {
    double a = wrap360(deg);
    return a > 180.0 ? a - 360.0 : a;
}

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

struct Site {
    double latitude_deg = 0.0;   // north positive
    double longitude_deg = 0.0;  // east positive
    double elevation_m = 0.0;
};

// Bad configuration or parameter values (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (CLI exit code 3).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Solver / numerical failure (CLI exit code 4).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// FNV-1a 64-bit, used for config and scene fingerprints.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    return fnv1a64(s.data(), s.size(), seed);
}

std::string hex16(std::uint64_t v);

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

} // namespace agripv
