#pragma once

#include <vector>

#include "agripv/common.hpp"

namespace agripv {

// Flat-plate module datasheet at STC (1000 W/m2, 25 degC, AM1.5).
struct ModuleDatasheet {
    double p_mp_w = 380.0;
    double v_mp_v = 40.2;
    double i_mp_a = 9.44;
    double v_oc_v = 49.5;
    double i_sc_a = 9.93;
    double efficiency = 0.1941;
    double bifaciality = 0.8;             // rear/front efficiency ratio
    double beta_voc_pct_per_c = -0.28;    // Voc temperature coefficient
    double alpha_isc_pct_per_c = 0.048;   // Isc temperature coefficient
    double area_m2 = 1.974 * 0.992;
};

void validate_datasheet(const ModuleDatasheet& sheet);

// Single-diode five-parameter model at reference conditions,
//   I = I_L - I_0 (exp((V + I Rs)/a) - 1) - (V + I Rs)/Rsh,
// with the De Soto et al. (2006) translations to other irradiance and cell
// temperature.
struct DiodeParams {
    double i_l_ref = 0.0;   // photocurrent, A
    double i_0_ref = 0.0;   // diode saturation current, A
    double r_s = 0.0;       // series resistance, ohm
    double r_sh_ref = 0.0;  // shunt resistance, ohm
    double a_ref = 0.0;     // modified ideality factor n Ns kT/q, V
};

// Fits the five parameters to the datasheet: exact match of the short-circuit,
// open-circuit and maximum-power points, zero dP/dV at the MPP, and the Voc
// temperature coefficient as the fifth closure. Throws NumericalError with
// the residual when no parameter set reproduces the datasheet.
DiodeParams fit_diode_params(const ModuleDatasheet& sheet);

// Current at voltage v for effective irradiance g_eff (W/m2) and cell
// temperature t_cell (degC).
double diode_current(const DiodeParams& p, const ModuleDatasheet& sheet, double v, double g_eff,
                     double t_cell);

double open_circuit_voltage(const DiodeParams& p, const ModuleDatasheet& sheet, double g_eff,
                            double t_cell);

// Maximum power of one module, W (golden-section search on the P-V curve).
double module_power(const DiodeParams& p, const ModuleDatasheet& sheet, double g_eff,
                    double t_cell);

// Plane-of-array irradiance absorbed by a bifacial module after shading:
// each face keeps beam*(1-S_F,b) + diffuse*(1-S_F,d) + reflected, and the
// rear face counts with the bifaciality factor.
double effective_irradiance(double front_beam, double front_diffuse, double front_reflected,
                            double front_sfb, double front_sfd, double rear_beam,
                            double rear_diffuse, double rear_reflected, double rear_sfb,
                            double rear_sfd, double bifaciality);

// NOCT cell temperature model: t_cell = t_air + (noct - 20)/800 * g_eff.
double cell_temperature(double t_air, double g_eff, double noct_c);

// Sample standard deviation (1/(N-1)) of a power series; requires N >= 2.
double power_std(const std::vector<double>& power_kw);

} // namespace agripv
