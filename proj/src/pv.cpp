#include "agripv/pv.hpp"

#include <algorithm>
#include <cmath>

namespace agripv {

namespace {

constexpr double kTrefK = 298.15;
constexpr double kBoltzmannEv = 8.617332478e-5;  // eV/K
constexpr double kEgRefEv = 1.121;               // silicon band gap at Tref

// Module parameters translated to operating conditions (De Soto et al. 2006).
struct OperatingParams {
    double i_l, i_0, a, r_s, r_sh;
};

OperatingParams translate(const DiodeParams& p, const ModuleDatasheet& sheet, double g_eff,
                          double t_cell_c) {
    const double tk = t_cell_c + 273.15;
    OperatingParams op;
    op.a = p.a_ref * tk / kTrefK;
    const double alpha_a = sheet.alpha_isc_pct_per_c / 100.0 * sheet.i_sc_a;
    op.i_l = g_eff / 1000.0 * (p.i_l_ref + alpha_a * (t_cell_c - 25.0));
    const double eg = kEgRefEv * (1.0 - 0.0002677 * (tk - kTrefK));
    op.i_0 = p.i_0_ref * std::pow(tk / kTrefK, 3.0) *
             std::exp((kEgRefEv / kTrefK - eg / tk) / kBoltzmannEv);
    op.r_s = p.r_s;
    op.r_sh = g_eff > 0.0 ? p.r_sh_ref * 1000.0 / g_eff : 1e9;
    return op;
}

// I(V) by Newton iteration; f is strictly decreasing and concave in I, so the
// iteration from I = I_L converges monotonically.
double current_at(const OperatingParams& op, double v) {
    double i = std::max(op.i_l, 0.0);
    for (int it = 0; it < 60; ++it) {
        const double arg = (v + i * op.r_s) / op.a;
        const double e = std::exp(std::min(arg, 300.0));
        const double f = op.i_l - op.i_0 * (e - 1.0) - (v + i * op.r_s) / op.r_sh - i;
        const double fp = -op.i_0 * op.r_s / op.a * e - op.r_s / op.r_sh - 1.0;
        const double step = f / fp;
        i -= step;
        if (std::fabs(step) < 1e-12) break;
    }
    return i;
}

double voc_at(const OperatingParams& op, double v_hint) {
    double lo = 0.0, hi = v_hint;
    while (current_at(op, hi) > 0.0 && hi < 20.0 * v_hint) hi *= 1.3;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (current_at(op, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Exact-match system for fixed (a, Rs): the short-circuit, open-circuit and
// maximum-power conditions are linear in (I_L, I_0, 1/Rsh).
bool solve_linear(const ModuleDatasheet& s, double a, double rs, DiodeParams& out) {
    const double e1 = std::expm1(s.i_sc_a * rs / a);
    const double e2 = std::expm1(s.v_oc_v / a);
    const double e3 = std::expm1((s.v_mp_v + s.i_mp_a * rs) / a);
    const double a11 = e2 - e1, a12 = s.v_oc_v - s.i_sc_a * rs;
    const double a21 = e2 - e3, a22 = s.v_oc_v - s.v_mp_v - s.i_mp_a * rs;
    const double det = a11 * a22 - a21 * a12;
    if (std::fabs(det) < 1e-300) return false;
    const double i0 = (s.i_sc_a * a22 - s.i_mp_a * a12) / det;
    const double y = (a11 * s.i_mp_a - a21 * s.i_sc_a) / det;
    if (!(i0 > 0.0) || !(y > 0.0)) return false;
    out.i_0_ref = i0;
    out.r_sh_ref = 1.0 / y;
    out.i_l_ref = i0 * e2 + s.v_oc_v * y;
    out.r_s = rs;
    out.a_ref = a;
    return out.i_l_ref > 0.0;
}

double dpdv_at_mpp(const ModuleDatasheet& s, const DiodeParams& p) {
    const double e = std::exp((s.v_mp_v + s.i_mp_a * p.r_s) / p.a_ref);
    const double g = p.i_0_ref / p.a_ref * e + 1.0 / p.r_sh_ref;
    const double didv = -g / (1.0 + p.r_s * g);
    return s.i_mp_a + s.v_mp_v * didv;
}

// For fixed a, find Rs in (0, (Voc-Vmp)/Imp) where dP/dV vanishes at the MPP.
bool fit_rs(const ModuleDatasheet& s, double a, DiodeParams& out) {
    const double rs_max = (s.v_oc_v - s.v_mp_v) / s.i_mp_a * 0.999;
    DiodeParams p;
    if (!solve_linear(s, a, 0.0, p)) return false;
    double g_lo = dpdv_at_mpp(s, p);
    if (g_lo <= 0.0) return false;  // MPP already left of Vmp with no series loss
    double lo = 0.0, hi = -1.0;
    const int steps = 64;
    for (int i = 1; i <= steps; ++i) {
        const double rs = rs_max * i / steps;
        if (!solve_linear(s, a, rs, p)) break;
        const double g = dpdv_at_mpp(s, p);
        if (g <= 0.0) {
            hi = rs;
            break;
        }
        lo = rs;
    }
    if (hi < 0.0) return false;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!solve_linear(s, a, mid, p)) return false;
        (dpdv_at_mpp(s, p) > 0.0 ? lo : hi) = mid;
    }
    return solve_linear(s, a, 0.5 * (lo + hi), out);
}

} // namespace

void validate_datasheet(const ModuleDatasheet& s) {
    if (!(s.p_mp_w > 0.0 && s.v_mp_v > 0.0 && s.i_mp_a > 0.0 && s.v_oc_v > 0.0 && s.i_sc_a > 0.0))
        throw ConfigError("datasheet electrical values must be positive");
    if (!(s.v_mp_v < s.v_oc_v) || !(s.i_mp_a < s.i_sc_a))
        throw ConfigError("datasheet must satisfy Vmp < Voc and Imp < Isc");
    if (std::fabs(s.v_mp_v * s.i_mp_a - s.p_mp_w) > 0.01 * s.p_mp_w)
        throw ConfigError("datasheet Pmp inconsistent with Vmp * Imp beyond 1%");
    if (!(s.efficiency > 0.0 && s.efficiency < 1.0))
        throw ConfigError("module efficiency must lie in (0, 1)");
    if (!(s.bifaciality >= 0.0 && s.bifaciality <= 1.0))
        throw ConfigError("bifaciality must lie in [0, 1]");
    if (!(s.area_m2 > 0.0)) throw ConfigError("module area must be positive");
}

DiodeParams fit_diode_params(const ModuleDatasheet& sheet) {
    validate_datasheet(sheet);
    const double beta_v = sheet.beta_voc_pct_per_c / 100.0 * sheet.v_oc_v;  // V/K
    const double dt = 5.0;

    auto beta_residual = [&](const DiodeParams& p) {
        const double voc2 = open_circuit_voltage(p, sheet, 1000.0, 25.0 + dt);
        return (voc2 - sheet.v_oc_v) / dt - beta_v;
    };

    // Outer 1-D solve on the modified ideality factor; the residual falls
    // monotonically with a (stronger diode term, faster Voc decay).
    const double a_lo_lim = 0.6, a_hi_lim = 5.0;
    const int scan = 45;
    double a_lo = -1.0, a_hi = -1.0, h_lo = 0.0, h_hi = 0.0;
    double best_a = -1.0, best_h = 1e30;
    DiodeParams p;
    for (int i = 0; i <= scan; ++i) {
        const double a = a_lo_lim + (a_hi_lim - a_lo_lim) * i / scan;
        if (!fit_rs(sheet, a, p)) continue;
        const double h = beta_residual(p);
        if (std::fabs(h) < std::fabs(best_h)) {
            best_h = h;
            best_a = a;
        }
        if (h > 0.0) {
            a_lo = a;
            h_lo = h;
        } else if (a_lo >= 0.0) {
            a_hi = a;
            h_hi = h;
            break;
        }
    }
    if (best_a < 0.0)
        throw NumericalError("diode fit: no feasible ideality factor reproduces the datasheet");

    double a_final = best_a;
    if (a_lo >= 0.0 && a_hi >= 0.0) {
        (void)h_lo;
        (void)h_hi;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (a_lo + a_hi);
            if (!fit_rs(sheet, mid, p))
                throw NumericalError("diode fit: infeasible interior point during bisection");
            (beta_residual(p) > 0.0 ? a_lo : a_hi) = mid;
        }
        a_final = 0.5 * (a_lo + a_hi);
    } else if (std::fabs(best_h) > 0.5 * std::fabs(beta_v)) {
        throw NumericalError("diode fit: Voc temperature coefficient unreachable, residual " +
                             format_double(best_h) + " V/K");
    }

    if (!fit_rs(sheet, a_final, p))
        throw NumericalError("diode fit: lost feasibility at the final ideality factor");

    // The fitted curve must hit all three datasheet points.
    const double isc_err = std::fabs(diode_current(p, sheet, 0.0, 1000.0, 25.0) - sheet.i_sc_a);
    const double ioc_err = std::fabs(diode_current(p, sheet, sheet.v_oc_v, 1000.0, 25.0));
    const double imp_err =
        std::fabs(diode_current(p, sheet, sheet.v_mp_v, 1000.0, 25.0) - sheet.i_mp_a);
    if (isc_err > 2e-3 * sheet.i_sc_a || ioc_err > 2e-3 * sheet.i_sc_a ||
        imp_err > 2e-3 * sheet.i_sc_a)
        throw NumericalError("diode fit: datasheet points not reproduced (residuals " +
                             format_double(isc_err) + ", " + format_double(ioc_err) + ", " +
                             format_double(imp_err) + " A)");
    return p;
}

double diode_current(const DiodeParams& p, const ModuleDatasheet& sheet, double v, double g_eff,
                     double t_cell) {
    if (g_eff <= 0.0) return 0.0;
    return current_at(translate(p, sheet, g_eff, t_cell), v);
}

double open_circuit_voltage(const DiodeParams& p, const ModuleDatasheet& sheet, double g_eff,
                            double t_cell) {
    if (g_eff <= 0.0) return 0.0;
    return voc_at(translate(p, sheet, g_eff, t_cell), sheet.v_oc_v);
}

double module_power(const DiodeParams& p, const ModuleDatasheet& sheet, double g_eff,
                    double t_cell) {
    if (g_eff <= 0.0) return 0.0;
    const OperatingParams op = translate(p, sheet, g_eff, t_cell);
    double lo = 0.0, hi = voc_at(op, sheet.v_oc_v);
    if (hi <= 0.0) return 0.0;
    const double tol = 1e-6 * hi;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double p1 = x1 * current_at(op, x1);
    double p2 = x2 * current_at(op, x2);
    while (hi - lo > tol) {
        if (p1 < p2) {
            lo = x1;
            x1 = x2;
            p1 = p2;
            x2 = lo + inv_phi * (hi - lo);
            p2 = x2 * current_at(op, x2);
        } else {
            hi = x2;
            x2 = x1;
            p2 = p1;
            x1 = hi - inv_phi * (hi - lo);
            p1 = x1 * current_at(op, x1);
        }
    }
    const double v = 0.5 * (lo + hi);
    return std::max(0.0, v * current_at(op, v));
}

double effective_irradiance(double front_beam, double front_diffuse, double front_reflected,
                            double front_sfb, double front_sfd, double rear_beam,
                            double rear_diffuse, double rear_reflected, double rear_sfb,
                            double rear_sfd, double bifaciality) {
    const double front = front_beam * (1.0 - front_sfb) + front_diffuse * (1.0 - front_sfd) +
                         front_reflected;
    const double rear =
        rear_beam * (1.0 - rear_sfb) + rear_diffuse * (1.0 - rear_sfd) + rear_reflected;
    return std::max(0.0, front) + bifaciality * std::max(0.0, rear);
}

double cell_temperature(double t_air, double g_eff, double noct_c) {
    return t_air + (noct_c - 20.0) / 800.0 * g_eff;
}

double power_std(const std::vector<double>& power_kw) {
    const std::size_t n = power_kw.size();
    if (n < 2) throw ConfigError("power_std needs at least two samples");
    double mean = 0.0;
    for (double v : power_kw) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : power_kw) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

} // namespace agripv
