#include "xpair/report.hpp"

#include <cmath>
#include <numbers>

#include "xpair/units.hpp"

#ifndef XPAIR_VERSION
#define XPAIR_VERSION "0.0.0"
#endif

namespace xpair {

namespace {

using json = nlohmann::ordered_json;

json quantity(double value, const char* unit, const char* op)
{
    return json{{"value", value}, {"unit", unit}, {"op", op}};
}

DetectorConfig det1_at(const Scenario& s, double omega1_keV)
{
    DetectorConfig d = s.det1->config;
    d.center_energy_keV = omega1_keV;
    if (s.det1->window_keV)
        d.fractional_bandwidth = *s.det1->window_keV / omega1_keV;
    return d;
}

} // namespace

const char* version_string() { return XPAIR_VERSION; }

std::vector<RatePoint> rate_curve(const Scenario& s)
{
    if (!s.det1 || !s.det2)
        throw ValidationError("rates need a [detectors] section; required keys: detectors.det1.theta, detectors.det1.phi, "
                              "detectors.det1.solid_angle, detectors.det1.energy, detectors.det2.theta, "
                              "detectors.det2.phi, detectors.det2.solid_angle");
    if (!s.target && !s.collider)
        throw ValidationError("rates need a [target] section or collider keys in [beam] (laser_intensity, "
                              "pulse_duration, electrons_per_bunch)");
    std::vector<double> energies;
    if (s.scan_keV) {
        for (int i = 0; i < s.scan_steps; ++i)
            energies.push_back(s.scan_steps == 1 ? s.scan_keV->lo
                                                 : s.scan_keV->lo + (s.scan_keV->hi - s.scan_keV->lo) * i / (s.scan_steps - 1));
    } else {
        energies.push_back(s.det1->config.center_energy_keV);
    }

    const ScatterConfig<double> cfg = s.scatter_config();
    std::vector<RatePoint> out;
    for (double e : energies) {
        RatePoint p;
        p.omega1_keV = e;
        const double w1 = e / constants.mc2_keV;
        p.omega2_keV = natural_to_kev(omega2(cfg, w1));
        p.xsec_barn_per_keV_sr2 = triple_diff_xsec(cfg, w1).value;
        const DetectorConfig d1 = det1_at(s, e);
        if (s.target && s.fixed_target()) {
            p.rate = fixed_target_rate(*s.target, d1, s.det2->config, s.photon_energy_keV, {s.acceptance});
        } else if (s.collider) {
            const double lum = luminosity_per_electron(*s.collider).per_barn();
            const double ne = s.collider->electrons_per_bunch;
            p.rate = pairs_per_pulse(p.xsec_barn_per_keV_sr2 * lum, ne, d1, s.det2->config);
            p.rate_quoted_luminosity = pairs_per_pulse(p.xsec_barn_per_keV_sr2 * quoted_luminosity_per_electron_per_barn,
                                                       ne, d1, s.det2->config);
        } else {
            throw ValidationError("target: a fixed target needs beam.gamma = 1");
        }
        out.push_back(p);
    }
    return out;
}

json build_report(const Scenario& s, const ScenarioTree& inputs, const ReportOptions& opts)
{
    json doc;
    doc["schema"] = 1;
    doc["scenario"] = s.name;

    json in = json::object();
    for (const auto& [section, keys] : inputs)
        for (const auto& [k, v] : keys)
            in[section][k] = v;
    doc["inputs"] = in;

    json d = json::object();
    const ScatterConfig<double> cfg = s.scatter_config();
    d["omega1_max"] = quantity(natural_to_kev(omega1_max(cfg)), "keV", "kinematics.omega1_max");
    if (s.det1 && s.det1->symmetric_energy)
        d["symmetric_energy"] = quantity(s.det1->config.center_energy_keV, "keV", "scenario.symmetric_energy_keV");
    if (s.target)
        d["target_electrons_per_barn"] = quantity(s.target->electrons_per_barn, "1/b", "TargetConfig.from_material");

    if (s.collider) {
        const BeamParams& b = *s.collider;
        const double omega_L = s.photon_energy_keV / constants.mc2_keV;
        const double lambda = wavelength_m(b.laser_photon_energy_eV);
        const double field = laser_field_strength(b.laser_intensity_W_per_cm2);
        const LaserStrength aL = laser_strength_aL(field, lambda);
        const LaserStrength quoted{quoted_laser_strength};
        d["laser_wavelength"] = quantity(lambda, "m", "units.wavelength_m");
        d["laser_field"] = quantity(field, "V/m", "rates.laser_field_strength");
        d["a_L"] = quantity(aL.a, "1", "rates.laser_strength_aL");
        d["a_L_quoted"] = quantity(quoted.a, "1", "quoted value (lambda = 1 um convention)");
        d["unruh_temperature"] = quantity(unruh_temperature(aL, b.laser_photon_energy_eV), "K", "rates.unruh_temperature");
        d["unruh_temperature_quoted_a_L"] =
            quantity(unruh_temperature(quoted, b.laser_photon_energy_eV), "K", "rates.unruh_temperature");
        d["effective_mass"] = quantity(effective_mass(aL), "m_e", "kinematics.effective_mass");
        d["effective_mass_quoted_a_L"] = quantity(effective_mass(quoted), "m_e", "kinematics.effective_mass");
        d["luminosity_per_electron"] =
            quantity(luminosity_per_electron(b).per_barn(), "1/b", "rates.luminosity_per_electron");
        d["luminosity_per_electron_quoted"] = quantity(quoted_luminosity_per_electron_per_barn, "1/b", "quoted value");
        if (b.photons_per_bunch > 0 && (b.electron_transverse_rms_m > 0 || b.photon_transverse_rms_m > 0))
            d["luminosity_per_crossing"] =
                quantity(luminosity_per_crossing(b).per_m2, "1/m^2", "rates.luminosity_per_crossing");
        if (b.electron_bunch_length_rms_m > 0)
            d["two_photon_pulse_duration"] =
                quantity(two_photon_pulse_duration_s(b), "s", "rates.two_photon_pulse_duration_s");
        const double tau = b.pulse_duration_s * constants.mc2_eV() / constants.hbar_eV_s;
        d["omega_L_tau_L"] = quantity(omega_L * tau, "1", "SingleComptonConfig.bandwidth_product");

        const double beta = s.electron().beta();
        if (beta > 0) {
            const double alpha0 = std::numbers::pi - s.alpha;
            const auto eq = undulator_from_laser({field, lambda}, alpha0, beta);
            d["undulator_period"] = quantity(eq.magnetic.period_m, "m", "rates.undulator_from_laser");
            d["undulator_field"] = quantity(eq.magnetic.field_T, "T", "rates.undulator_from_laser");
        }
        if (s.gamma >= 10) {
            const double alpha0 = std::numbers::pi - s.alpha;
            const double th = cfg.theta1p;
            const double approx = omega1_max_approx(s.gamma, omega_L, alpha0, th);
            const double dressed = omega1_max_dressed(s.gamma, omega_L, s.alpha, th, aL);
            const double dressed_q = omega1_max_dressed(s.gamma, omega_L, s.alpha, th, quoted);
            const double bare = omega1_max_dressed(s.gamma, omega_L, s.alpha, th, LaserStrength{0.0});
            d["omega1_max_approx"] = quantity(natural_to_kev(approx), "keV", "kinematics.omega1_max_approx");
            d["omega1_max_dressed"] = quantity(natural_to_kev(dressed), "keV", "kinematics.omega1_max_dressed");
            d["omega1_max_dressed_quoted_a_L"] =
                quantity(natural_to_kev(dressed_q), "keV", "kinematics.omega1_max_dressed");
            d["dressed_reduction"] = quantity(1.0 - dressed / bare, "1", "kinematics.omega1_max_dressed");
            d["dressed_reduction_quoted_a_L"] = quantity(1.0 - dressed_q / bare, "1", "kinematics.omega1_max_dressed");
        }
    }
    doc["derived"] = d;

    json out = json::object();
    if (opts.include_rates && s.det1 && s.det2 && (s.target || s.collider)) {
        const auto curve = rate_curve(s);
        const char* unit = s.collider ? "pairs/pulse" : "pairs/s";
        json rows = json::array();
        for (const auto& p : curve) {
            json r{{"omega1_keV", p.omega1_keV},
                   {"omega2_keV", p.omega2_keV},
                   {"xsec_barn_per_keV_sr2", p.xsec_barn_per_keV_sr2},
                   {"rate", p.rate}};
            if (s.collider)
                r["rate_quoted_luminosity"] = p.rate_quoted_luminosity;
            rows.push_back(r);
        }
        out["rate_unit"] = unit;
        out["rate_op"] = s.collider ? "rates.pairs_per_pulse" : "rates.fixed_target_rate";
        out["rate_curve"] = rows;
        if (s.collider) {
            const double lum = luminosity_per_electron(*s.collider).per_barn();
            out["yield"] = quantity(curve.front().xsec_barn_per_keV_sr2 * lum, "pairs/(keV sr^2 electron)",
                                    "rates.pair_yield_per_electron");
            out["pairs_per_pulse"] = quantity(curve.front().rate, "pairs/pulse", "rates.pairs_per_pulse");
            out["pairs_per_pulse_quoted_luminosity"] =
                quantity(curve.front().rate_quoted_luminosity, "pairs/pulse", "rates.pairs_per_pulse");
        }
    }
    doc["outputs"] = out;

    json prov{{"version", version_string()}, {"tolerance", opts.tolerance}};
    if (opts.seed)
        prov["seed"] = *opts.seed;
    prov["mc2_keV"] = constants.mc2_keV;
    doc["provenance"] = prov;
    return doc;
}

} // namespace xpair
