#include "agripv/kpi.hpp"

namespace agripv {

KpiResult land_equivalent_ratio(double yield_agri_t_ha, double yield_ref_t_ha,
                                double energy_agri, double energy_ref) {
    if (!(yield_ref_t_ha > 0.0))
        throw NumericalError("reference crop yield is zero, LER undefined");
    if (!(energy_ref > 0.0))
        throw NumericalError("reference energy production is zero, LER undefined");
    if (yield_agri_t_ha < 0.0 || energy_agri < 0.0)
        throw NumericalError("negative production passed to LER");
    KpiResult r;
    r.ler_crop_term = yield_agri_t_ha / yield_ref_t_ha;
    r.ler_pv_term = energy_agri / energy_ref;
    r.ler = r.ler_crop_term + r.ler_pv_term;
    return r;
}

double agrivoltaic_energy_density(double annual_energy_kwh, const SceneConfig& scene) {
    const double area = scene.land_area_m2();
    if (!(area > 0.0))
        throw NumericalError("scene occupies no land, energy density undefined");
    return annual_energy_kwh / area;
}

ReferencePvEnergy reference_pv_energy(double capacity_kwp) {
    if (!(capacity_kwp > 0.0)) throw ConfigError("PV capacity must be positive");
    ReferencePvEnergy r;
    r.annual_kwh = kReferenceSpecificYieldKwhPerKwp * capacity_kwp;
    return r;
}

double ler_pv_term(double annual_energy_kwh, const SceneConfig& scene, double capacity_kwp,
                   EnergyBasis basis) {
    if (basis == EnergyBasis::PerCapacity) {
        if (!(capacity_kwp > 0.0)) throw ConfigError("PV capacity must be positive");
        return annual_energy_kwh / capacity_kwp / kReferenceSpecificYieldKwhPerKwp;
    }
    return agrivoltaic_energy_density(annual_energy_kwh, scene) /
           kReferenceEnergyDensityKwhPerM2;
}

} // namespace agripv
