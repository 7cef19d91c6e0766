#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agripv/common.hpp"
#include "agripv/kpi.hpp"

using namespace agripv;

namespace {

// 3 rows of 20 m at 10 m spacing: exactly 600 m2 of land.
SceneConfig round_scene() {
    SceneConfig s;
    s.n_rows = 3;
    s.row_distance_m = 10.0;
    s.modules_per_row = 20;
    s.stack_count = 2;
    s.module_width_m = 2.0;
    return s;
}

} // namespace

TEST_CASE("land equivalent ratio") {
    SUBCASE("matching both references gives exactly two") {
        const KpiResult r = land_equivalent_ratio(6.0, 6.0, 22800.0, 22800.0);
        CHECK(r.ler_crop_term == doctest::Approx(1.0));
        CHECK(r.ler_pv_term == doctest::Approx(1.0));
        CHECK(r.ler == doctest::Approx(2.0));
    }

    SUBCASE("term arithmetic") {
        const KpiResult r = land_equivalent_ratio(4.0, 5.0, 500.0, 1000.0);
        CHECK(r.ler_crop_term == doctest::Approx(0.8));
        CHECK(r.ler_pv_term == doctest::Approx(0.5));
        CHECK(r.ler == doctest::Approx(1.3));
    }

    SUBCASE("invariant under common rescaling of each ratio") {
        const KpiResult a = land_equivalent_ratio(4.0, 5.0, 500.0, 1000.0);
        const KpiResult b = land_equivalent_ratio(4.0 * 7.5, 5.0 * 7.5, 500.0 * 0.2, 1000.0 * 0.2);
        CHECK(a.ler == doctest::Approx(b.ler).epsilon(1e-12));
    }

    SUBCASE("strictly monotone in both productions") {
        const double base = land_equivalent_ratio(4.0, 5.0, 500.0, 1000.0).ler;
        CHECK(land_equivalent_ratio(4.1, 5.0, 500.0, 1000.0).ler > base);
        CHECK(land_equivalent_ratio(4.0, 5.0, 501.0, 1000.0).ler > base);
        CHECK(land_equivalent_ratio(3.9, 5.0, 500.0, 1000.0).ler < base);
    }

    SUBCASE("zero production is allowed, zero reference is not") {
        CHECK(land_equivalent_ratio(0.0, 5.0, 0.0, 1000.0).ler == 0.0);
        CHECK_THROWS_AS(land_equivalent_ratio(4.0, 0.0, 500.0, 1000.0), NumericalError);
        CHECK_THROWS_AS(land_equivalent_ratio(4.0, 5.0, 500.0, 0.0), NumericalError);
        CHECK_THROWS_AS(land_equivalent_ratio(-1.0, 5.0, 500.0, 1000.0), NumericalError);
        CHECK_THROWS_AS(land_equivalent_ratio(4.0, 5.0, -1.0, 1000.0), NumericalError);
    }
}

TEST_CASE("energy density over occupied land") {
    const SceneConfig s = round_scene();
    CHECK(s.land_area_m2() == doctest::Approx(600.0));
    CHECK(agrivoltaic_energy_density(20000.0, s) == doctest::Approx(33.333).epsilon(1e-4));

    SUBCASE("halving the row distance doubles the density") {
        SceneConfig tight = s;
        tight.row_distance_m = 5.0;
        CHECK(agrivoltaic_energy_density(20000.0, tight) ==
              doctest::Approx(2.0 * agrivoltaic_energy_density(20000.0, s)).epsilon(1e-12));
    }

    SUBCASE("zero land area is rejected") {
        SceneConfig empty = s;
        empty.n_rows = 0;
        CHECK_THROWS_AS(agrivoltaic_energy_density(20000.0, empty), NumericalError);
    }
}

TEST_CASE("ground-mount reference system") {
    // 1000 kWh per kWp: the paper-scale 22.8 kWp array produces 22.8 MWh.
    const ReferencePvEnergy r = reference_pv_energy(22.8);
    CHECK(r.annual_kwh == doctest::Approx(22800.0));
    CHECK(r.density_kwh_m2 == doctest::Approx(58.0));
    CHECK_THROWS_AS(reference_pv_energy(0.0), ConfigError);
    CHECK_THROWS_AS(reference_pv_energy(-3.0), ConfigError);
}

TEST_CASE("electricity term under both bases") {
    const SceneConfig s = round_scene();

    SUBCASE("per-area basis compares against 58 kWh/m2") {
        CHECK(ler_pv_term(58.0 * 600.0, s, 22.8, EnergyBasis::PerArea) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ler_pv_term(29.0 * 600.0, s, 22.8, EnergyBasis::PerArea) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("per-capacity basis compares against 1000 kWh/kWp") {
        CHECK(ler_pv_term(22800.0, s, 22.8, EnergyBasis::PerCapacity) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ler_pv_term(11400.0, s, 22.8, EnergyBasis::PerCapacity) ==
              doctest::Approx(0.5).epsilon(1e-12));
        CHECK_THROWS_AS(ler_pv_term(1000.0, s, 0.0, EnergyBasis::PerCapacity), ConfigError);
    }

    SUBCASE("capacity does not enter the per-area basis") {
        CHECK(ler_pv_term(10000.0, s, 1.0, EnergyBasis::PerArea) ==
              doctest::Approx(ler_pv_term(10000.0, s, 99.0, EnergyBasis::PerArea)));
    }
}
