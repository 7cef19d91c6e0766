#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "agripv/common.hpp"
#include "agripv/solar.hpp"
#include "agripv/weather.hpp"

using namespace agripv;

namespace {

const Site kSite{59.5549, 16.7585, 15.0};
const char* kBundled = "data/sample_weather.csv";

std::string temp_path(const char* tag) {
    return std::string("/tmp/agripv_weather_") + tag + ".csv";
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

} // namespace

TEST_CASE("bundled year loads and validates") {
    WeatherSeries s = load_weather(kBundled, kSite);
    CHECK(s.records.size() == 8760);
    CHECK(s.year == 2019);
    CHECK(s.has_dhi);
    CHECK(s.has_par);
    CHECK(s.has_precip);
    CHECK(s.site.latitude_deg == kSite.latitude_deg);
    for (const WeatherRecord& r : s.records) {
        CHECK(r.ghi >= 0.0);
        CHECK(r.dhi >= 0.0);
        CHECK(r.dhi <= r.ghi + 1e-9);
        CHECK(r.par >= 0.0);
        CHECK(r.time.offset_min == 60);
    }
}

TEST_CASE("save/load round trip is exact") {
    WeatherSeries s = load_weather(kBundled, kSite);
    s.records[0].precip = std::nan("");  // empty cells survive the trip
    const std::string path = temp_path("roundtrip");
    save_weather(s, path);
    WeatherSeries back = load_weather(path, kSite);
    REQUIRE(back.records.size() == s.records.size());
    CHECK(std::isnan(back.records[0].precip));
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        CHECK(back.records[i].time.unix_sec == s.records[i].time.unix_sec);
        CHECK(back.records[i].ghi == s.records[i].ghi);
        CHECK(back.records[i].dhi == s.records[i].dhi);
        CHECK(back.records[i].par == s.records[i].par);
        CHECK(back.records[i].t_air == s.records[i].t_air);
    }
    std::remove(path.c_str());
}

TEST_CASE("tab delimiter is autodetected") {
    std::ifstream in(kBundled);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (char& c : text)
        if (c == ',') c = '\t';
    const std::string path = temp_path("tabs");
    write_file(path, text);
    WeatherSeries tabs = load_weather(path, kSite);
    WeatherSeries csv = load_weather(kBundled, kSite);
    REQUIRE(tabs.records.size() == csv.records.size());
    CHECK(tabs.records[4000].ghi == csv.records[4000].ghi);
    CHECK(tabs.records[4000].par == csv.records[4000].par);
    std::remove(path.c_str());
}

TEST_CASE("validation failures") {
    WeatherSeries s = load_weather(kBundled, kSite);
    const std::string path = temp_path("invalid");

    SUBCASE("dhi above ghi") {
        s.records[5000].dhi = s.records[5000].ghi + 50.0;
        save_weather(s, path);
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("negative ghi") {
        s.records[5000].ghi = -1.0;
        save_weather(s, path);
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("absurd temperature") {
        s.records[100].t_air = 120.0;
        save_weather(s, path);
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("gap in the hourly grid") {
        s.records.erase(s.records.begin() + 3000);
        save_weather(s, path);
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("truncated year") {
        s.records.resize(8760 - 24);
        save_weather(s, path);
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("mixed UTC offsets") {
        s.records[4321].time.offset_min = 0;
        s.records[4321].time.unix_sec += 3600;  // keep the same wall-clock text
        save_weather(s, path);
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("missing required column") {
        write_file(path, "time,ghi\n2019-01-01T01:00:00+01:00,0\n");
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("duplicate column") {
        write_file(path, "time,ghi,ghi,t_air\n2019-01-01T01:00:00+01:00,0,0,1\n");
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("ragged row") {
        write_file(path, "time,ghi,t_air\n2019-01-01T01:00:00+01:00,0\n");
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("unparseable cell") {
        write_file(path, "time,ghi,t_air\n2019-01-01T01:00:00+01:00,abc,1\n");
        CHECK_THROWS_AS(load_weather(path, kSite), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_weather("/nonexistent/weather.csv", kSite), DataError);
    }
    std::remove(path.c_str());
}

TEST_CASE("fill_par") {
    WeatherSeries s = load_weather(kBundled, kSite);
    s.has_par = false;
    const std::string path = temp_path("nopar");
    save_weather(s, path);  // drops the par column entirely
    WeatherSeries bare = load_weather(path, kSite);
    CHECK_FALSE(bare.has_par);
    CHECK(std::isnan(bare.records[4000].par));

    fill_par(bare, 0.45);
    CHECK(bare.has_par);
    for (std::size_t i = 0; i < bare.records.size(); i += 137)
        CHECK(bare.records[i].par == doctest::Approx(0.45 * bare.records[i].ghi).epsilon(1e-12));

    // Existing values are left alone.
    WeatherSeries full = load_weather(kBundled, kSite);
    double before = full.records[4000].par;
    fill_par(full, 0.99);
    CHECK(full.records[4000].par == before);

    CHECK_THROWS_AS(fill_par(bare, 0.0), ConfigError);
    CHECK_THROWS_AS(fill_par(bare, 1.5), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("daily aggregation") {
    WeatherSeries s = load_weather(kBundled, kSite);
    std::vector<DailyAggregate> days = daily_aggregates(s);
    REQUIRE(days.size() == 365);
    CHECK(days.front().doy == 1);
    CHECK(days.back().doy == 365);
    CHECK(days.back().date.month == 12);
    CHECK(days.back().date.day == 31);

    // Recompute one mid-year day by hand from the raw records. Day k covers
    // records [24k, 24k+24) because the series starts at the 01:00 label.
    const int k = 180;
    double tmin = 1e9, tmax = -1e9, tsum = 0.0, par = 0.0, precip = 0.0;
    for (int i = 24 * k; i < 24 * (k + 1); ++i) {
        const WeatherRecord& r = s.records[static_cast<std::size_t>(i)];
        tmin = std::min(tmin, r.t_air);
        tmax = std::max(tmax, r.t_air);
        tsum += r.t_air;
        par += r.par * 3600.0 / 1e6;
        precip += r.precip;
    }
    CHECK(days[k].t_min == doctest::Approx(tmin));
    CHECK(days[k].t_max == doctest::Approx(tmax));
    CHECK(days[k].t_mean == doctest::Approx(tsum / 24.0));
    CHECK(days[k].par_mj == doctest::Approx(par).epsilon(1e-12));
    CHECK(days[k].precip_mm == doctest::Approx(precip).epsilon(1e-12));

    SUBCASE("partial day is rejected") {
        s.records.resize(8760 - 3);
        CHECK_THROWS_AS(daily_aggregates(s), DataError);
    }
}

TEST_CASE("horizon profile interpolation") {
    HorizonProfile p;
    p.azimuth_deg = {0.0, 90.0, 180.0, 270.0};  // compass: N, E, S, W
    p.elevation_deg = {10.0, 20.0, 30.0, 40.0};

    CHECK(p.elevation_at(0.0) == doctest::Approx(30.0));     // south
    CHECK(p.elevation_at(-90.0) == doctest::Approx(20.0));   // east
    CHECK(p.elevation_at(90.0) == doctest::Approx(40.0));    // west
    CHECK(p.elevation_at(180.0) == doctest::Approx(10.0));   // north
    CHECK(p.elevation_at(-45.0) == doctest::Approx(25.0));   // SE, between E and S samples
    // The wrap-around segment W -> N.
    CHECK(p.elevation_at(135.0) == doctest::Approx(25.0));

    HorizonProfile single;
    single.azimuth_deg = {17.0};
    single.elevation_deg = {4.5};
    CHECK(single.elevation_at(123.0) == doctest::Approx(4.5));

    HorizonProfile flat;
    CHECK(flat.empty());
    CHECK(flat.elevation_at(55.0) == 0.0);
}

TEST_CASE("horizon file loading") {
    HorizonProfile p = load_horizon("data/sample_horizon.csv");
    CHECK(p.azimuth_deg.size() == 36);
    for (double e : p.elevation_deg) {
        CHECK(e >= 0.0);
        CHECK(e < 90.0);
    }

    const std::string path = temp_path("horizon");
    SUBCASE("header is optional") {
        write_file(path, "azimuth_deg,elevation_deg\n0,1\n180,2\n");
        CHECK(load_horizon(path).azimuth_deg.size() == 2);
        write_file(path, "0,1\n180,2\n");
        CHECK(load_horizon(path).azimuth_deg.size() == 2);
    }
    SUBCASE("rejects out-of-range elevation") {
        write_file(path, "0,95\n");
        CHECK_THROWS_AS(load_horizon(path), DataError);
    }
    SUBCASE("rejects unsorted azimuths") {
        write_file(path, "10,1\n5,2\n");
        CHECK_THROWS_AS(load_horizon(path), DataError);
    }
    SUBCASE("rejects empty file") {
        write_file(path, "# nothing\n");
        CHECK_THROWS_AS(load_horizon(path), DataError);
    }
    std::remove(path.c_str());
}

TEST_CASE("horizon masking") {
    WeatherSeries s = load_weather(kBundled, kSite);

    SUBCASE("flat horizon removes nothing from the bundled year") {
        // The generator already zeroes hours whose midpoint sun is down.
        HorizonProfile flat;
        CHECK(apply_horizon_mask(s, flat, kSite) == 0);
    }
    SUBCASE("a wall removes every sunny hour") {
        HorizonProfile wall;
        wall.azimuth_deg = {0.0};
        wall.elevation_deg = {89.0};
        int sunny = 0;
        for (const WeatherRecord& r : s.records)
            if (r.ghi > 0.0) ++sunny;
        CHECK(apply_horizon_mask(s, wall, kSite) == sunny);
        for (const WeatherRecord& r : s.records) {
            CHECK(r.ghi == 0.0);
            CHECK(r.dhi == 0.0);
            CHECK(r.par == 0.0);
        }
    }
    SUBCASE("an eastern wall leaves only afternoon sun") {
        HorizonProfile east;  // compass quadrants: high NE+E+SE, open elsewhere
        east.azimuth_deg = {0.0, 44.9, 45.0, 135.0, 135.1, 359.0};
        east.elevation_deg = {0.0, 0.0, 89.0, 89.0, 0.0, 0.0};
        int masked = apply_horizon_mask(s, east, kSite);
        CHECK(masked > 500);
        for (const WeatherRecord& r : s.records) {
            if (r.ghi <= 0.0) continue;
            SolarPosition pos = solar_position(r.time.unix_sec - 1800, kSite);
            // Remaining irradiance only where the sky line is low again.
            double compass = wrap360(180.0 + pos.azimuth_deg);
            CHECK_FALSE((compass > 45.5 && compass < 134.5 && pos.altitude_deg < 88.0));
        }
    }
}
