#include "agripv/weather.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "agripv/solar.hpp"

namespace agripv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(trim(field));
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

double parse_value(const std::string& field, const char* col, int line_no, bool optional) {
    if (field.empty() || lower(field) == "nan") {
        if (optional) return kNaN;
        throw DataError("line " + std::to_string(line_no) + ": missing value for column '" +
                        col + "'");
    }
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        throw DataError("line " + std::to_string(line_no) + ": cannot parse '" + field +
                        "' in column '" + col + "'");
    return v;
}

// Midpoint of the hour-ending interval, in local civil time.
CivilDate midpoint_date(const Instant& t) {
    Instant mid{t.unix_sec - 1800, t.offset_min};
    return mid.local().date;
}

} // namespace

WeatherSeries load_weather(const std::string& path, const Site& site) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open weather file '" + path + "'");

    std::string line;
    int line_no = 0;

    // Header (skipping leading comment lines).
    do {
        if (!std::getline(in, line)) throw DataError(path + ": empty weather file");
        ++line_no;
    } while (!line.empty() && line[0] == '#');

    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> header = split(line, delim);
    std::map<std::string, int> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name = lower(header[i]);
        if (col.count(name)) throw DataError(path + ": duplicate column '" + name + "'");
        col[name] = static_cast<int>(i);
    }
    for (const char* required : {"time", "ghi", "t_air"})
        if (!col.count(required))
            throw DataError(path + ": missing required column '" + std::string(required) + "'");

    WeatherSeries s;
    s.site = site;
    s.has_dhi = col.count("dhi") > 0;
    s.has_par = col.count("par") > 0;
    s.has_precip = col.count("precip") > 0;

    auto field = [&](const std::vector<std::string>& f, const char* name) -> const std::string& {
        static const std::string empty;
        auto it = col.find(name);
        if (it == col.end()) return empty;
        if (it->second >= static_cast<int>(f.size())) return empty;
        return f[static_cast<std::size_t>(it->second)];
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line[0] == '#') continue;
        std::vector<std::string> f = split(line, delim);
        if (f.size() != header.size())
            throw DataError(path + ": line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(f.size()));
        WeatherRecord r;
        r.time = parse_iso8601(field(f, "time"));
        r.ghi = parse_value(field(f, "ghi"), "ghi", line_no, false);
        r.t_air = parse_value(field(f, "t_air"), "t_air", line_no, false);
        r.dhi = s.has_dhi ? parse_value(field(f, "dhi"), "dhi", line_no, true) : kNaN;
        r.par = s.has_par ? parse_value(field(f, "par"), "par", line_no, true) : kNaN;
        r.precip = s.has_precip ? parse_value(field(f, "precip"), "precip", line_no, true) : kNaN;
        s.records.push_back(r);
    }
    if (s.records.empty()) throw DataError(path + ": no data rows");

    // Uniform hourly grid, whole calendar year.
    for (std::size_t i = 1; i < s.records.size(); ++i) {
        std::int64_t step = s.records[i].time.unix_sec - s.records[i - 1].time.unix_sec;
        if (step != 3600)
            throw DataError(path + ": non-hourly step before " +
                            format_iso8601(s.records[i].time));
        if (s.records[i].time.offset_min != s.records[i - 1].time.offset_min)
            throw DataError(path + ": mixed UTC offsets at " + format_iso8601(s.records[i].time));
    }
    s.year = midpoint_date(s.records.front().time).year;
    const int expected = 24 * days_in_year(s.year);
    if (static_cast<int>(s.records.size()) != expected)
        throw DataError(path + ": expected " + std::to_string(expected) + " hourly records for " +
                        std::to_string(s.year) + ", got " + std::to_string(s.records.size()));
    CivilDate first = midpoint_date(s.records.front().time);
    if (first.month != 1 || first.day != 1)
        throw DataError(path + ": series must start with the first hour of the year, starts at " +
                        format_iso8601(s.records.front().time));

    for (const WeatherRecord& r : s.records) {
        const std::string ts = format_iso8601(r.time);
        if (!(r.ghi >= 0.0)) throw DataError(path + ": negative or NaN ghi at " + ts);
        if (s.has_dhi && !std::isnan(r.dhi)) {
            if (r.dhi < 0.0) throw DataError(path + ": negative dhi at " + ts);
            if (r.dhi > r.ghi + 1e-9)
                throw DataError(path + ": dhi exceeds ghi at " + ts);
        }
        if (s.has_par && !std::isnan(r.par) && r.par < 0.0)
            throw DataError(path + ": negative par at " + ts);
        if (s.has_precip && !std::isnan(r.precip) && r.precip < 0.0)
            throw DataError(path + ": negative precip at " + ts);
        if (r.t_air < -90.0 || r.t_air > 60.0)
            throw DataError(path + ": t_air out of range at " + ts);
    }
    return s;
}

void save_weather(const WeatherSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write weather file '" + path + "'");
    out << "time,ghi";
    if (series.has_dhi) out << ",dhi";
    if (series.has_par) out << ",par";
    out << ",t_air";
    if (series.has_precip) out << ",precip";
    out << "\n";
    auto cell = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
    for (const WeatherRecord& r : series.records) {
        out << format_iso8601(r.time) << ',' << format_double(r.ghi);
        if (series.has_dhi) out << ',' << cell(r.dhi);
        if (series.has_par) out << ',' << cell(r.par);
        out << ',' << format_double(r.t_air);
        if (series.has_precip) out << ',' << cell(r.precip);
        out << "\n";
    }
}

void fill_par(WeatherSeries& series, double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw ConfigError("par fill ratio must lie in (0, 1], got " + format_double(ratio));
    for (WeatherRecord& r : series.records)
        if (std::isnan(r.par)) r.par = ratio * r.ghi;
    series.has_par = true;
}

std::vector<DailyAggregate> daily_aggregates(const WeatherSeries& series) {
    std::vector<DailyAggregate> days;
    DailyAggregate cur;
    int count = 0;
    auto flush = [&]() {
        if (count == 0) return;
        if (count != 24)
            throw DataError("incomplete day in weather series (" + std::to_string(count) +
                            " records)");
        cur.t_mean /= 24.0;
        cur.doy = day_of_year(cur.date);
        days.push_back(cur);
        count = 0;
    };
    for (const WeatherRecord& r : series.records) {
        CivilDate d = midpoint_date(r.time);
        if (count > 0 && (d.day != cur.date.day || d.month != cur.date.month)) flush();
        if (count == 0) {
            cur = DailyAggregate{};
            cur.date = d;
            cur.t_min = r.t_air;
            cur.t_max = r.t_air;
        }
        cur.t_min = std::min(cur.t_min, r.t_air);
        cur.t_max = std::max(cur.t_max, r.t_air);
        cur.t_mean += r.t_air;
        if (!std::isnan(r.precip)) cur.precip_mm += r.precip;
        if (!std::isnan(r.par)) cur.par_mj += r.par * 3600.0 / 1e6;
        cur.ghi_mj += r.ghi * 3600.0 / 1e6;
        ++count;
    }
    flush();
    return days;
}

double HorizonProfile::elevation_at(double azimuth_canonical_deg) const {
    if (azimuth_deg.empty()) return 0.0;
    if (azimuth_deg.size() == 1) return elevation_deg[0];
    // Stored samples use the compass convention (0 north, clockwise).
    const double a = wrap360(180.0 + azimuth_canonical_deg);
    // Find the bracketing pair, wrapping the last segment back to the first.
    auto it = std::upper_bound(azimuth_deg.begin(), azimuth_deg.end(), a);
    std::size_t hi = static_cast<std::size_t>(it - azimuth_deg.begin());
    std::size_t lo = (hi == 0 ? azimuth_deg.size() : hi) - 1;
    double a0 = azimuth_deg[lo], a1;
    double e0 = elevation_deg[lo], e1;
    if (hi == azimuth_deg.size() || hi == 0) {
        a1 = azimuth_deg[hi % azimuth_deg.size()] + 360.0;
        e1 = elevation_deg[hi % azimuth_deg.size()];
        if (hi == 0) a0 -= 360.0, a1 -= 360.0;
    } else {
        a1 = azimuth_deg[hi];
        e1 = elevation_deg[hi];
    }
    const double t = (a1 - a0) > 0.0 ? (a - a0) / (a1 - a0) : 0.0;
    return e0 + t * (e1 - e0);
}

HorizonProfile load_horizon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open horizon file '" + path + "'");
    HorizonProfile p;
    std::string line;
    int line_no = 0;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const char delim = t.find('\t') != std::string::npos ? '\t' : ',';
        std::vector<std::string> f = split(t, delim);
        if (!header_skipped && f.size() >= 2 && lower(f[0]).find("az") != std::string::npos) {
            header_skipped = true;
            continue;
        }
        header_skipped = true;
        if (f.size() != 2)
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": expected 'azimuth_deg, elevation_deg'");
        double az = parse_value(f[0], "azimuth_deg", line_no, false);
        double el = parse_value(f[1], "elevation_deg", line_no, false);
        if (el < 0.0 || el >= 90.0)
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": horizon elevation must lie in [0, 90)");
        p.azimuth_deg.push_back(wrap360(az));
        p.elevation_deg.push_back(el);
    }
    if (p.azimuth_deg.empty()) throw DataError(path + ": no horizon samples");
    if (!std::is_sorted(p.azimuth_deg.begin(), p.azimuth_deg.end()))
        throw DataError(path + ": horizon azimuths must be ascending in [0, 360)");
    return p;
}

int apply_horizon_mask(WeatherSeries& series, const HorizonProfile& profile, const Site& site) {
    int masked = 0;
    for (WeatherRecord& r : series.records) {
        if (r.ghi <= 0.0 && (std::isnan(r.par) || r.par <= 0.0)) continue;
        SolarPosition pos = solar_position(r.time.unix_sec - 1800, site);
        const double limit = profile.empty() ? 0.0 : profile.elevation_at(pos.azimuth_deg);
        if (pos.altitude_deg <= limit) {
            r.ghi = 0.0;
            if (!std::isnan(r.dhi)) r.dhi = 0.0;
            if (!std::isnan(r.par)) r.par = 0.0;
            ++masked;
        }
    }
    return masked;
}

} // namespace agripv
