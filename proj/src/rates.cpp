#include "xpair/rates.hpp"

#include <cmath>
#include <numbers>

#include "xpair/units.hpp"

namespace xpair {

namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw PreconditionError(std::string(what) + " must be positive and finite");
}

} // namespace

AreaDensity luminosity_per_crossing(const BeamParams& b)
{
    const double s2 = b.electron_transverse_rms_m * b.electron_transverse_rms_m
                      + b.photon_transverse_rms_m * b.photon_transverse_rms_m;
    if (!(s2 > 0.0))
        throw PreconditionError("luminosity_per_crossing: transverse sizes must not both vanish");
    return {b.electrons_per_bunch * b.photons_per_bunch / (2.0 * std::numbers::pi * s2)};
}

AreaDensity luminosity_per_electron(const BeamParams& b)
{
    require_positive(b.laser_photon_energy_eV, "laser photon energy");
    if (!(b.laser_intensity_W_per_cm2 >= 0.0) || !(b.pulse_duration_s >= 0.0))
        throw PreconditionError("luminosity_per_electron: intensity and duration must be non-negative");
    const double intensity_W_m2 = b.laser_intensity_W_per_cm2 * 1e4;
    const double photon_J = b.laser_photon_energy_eV * constants.elementary_charge_C;
    return {intensity_W_m2 * b.pulse_duration_s / (4.0 * photon_J)};
}

double two_photon_pulse_duration_s(const BeamParams& b) { return b.electron_bunch_length_rms_m / constants.c_m_per_s; }

double pair_yield_per_electron(double xsec_barn_per_keV_sr2, AreaDensity lum_per_electron)
{
    return xsec_barn_per_keV_sr2 * lum_per_electron.per_barn();
}

double pair_yield_per_electron(const ScatterConfig<double>& cfg, double omega1, const BeamParams& b)
{
    return pair_yield_per_electron(triple_diff_xsec(cfg, omega1).value, luminosity_per_electron(b));
}

double pairs_per_pulse(double yield, double electrons_per_bunch, const DetectorConfig& det1,
                       const DetectorConfig& det2)
{
    det1.validate();
    det2.validate();
    return yield * electrons_per_bunch * det1.solid_angle * det2.solid_angle * det1.energy_window_keV();
}

TargetConfig TargetConfig::from_material(std::string name, double atomic_number, double molar_mass,
                                         double density_g_per_cm3, double thickness_m, double flux_per_s)
{
    require_positive(atomic_number, "atomic number");
    require_positive(molar_mass, "molar mass");
    require_positive(density_g_per_cm3, "density");
    require_positive(thickness_m, "thickness");
    const double electrons_per_cm3 = atomic_number * density_g_per_cm3 * constants.avogadro / molar_mass;
    const double per_cm2 = electrons_per_cm3 * thickness_m * 100.0;
    TargetConfig t{AreaDensity::from_per_cm2(per_cm2).per_barn(), flux_per_s, std::move(name), thickness_m};
    t.validate();
    return t;
}

void TargetConfig::validate() const
{
    require_positive(electrons_per_barn, "target electron areal density");
    if (!(photon_flux_per_s >= 0.0))
        throw PreconditionError("TargetConfig: flux must be non-negative");
}

double fixed_target_rate(const TargetConfig& t, const DetectorConfig& det1, const DetectorConfig& det2,
                         double omega_keV, const AcceptanceOptions& acceptance)
{
    t.validate();
    const double omega = kev_to_natural(omega_keV).value;
    auto xsec = [omega](double e1_keV, double th1, double ph1, double th2, double ph2) {
        const auto cfg = ScatterConfig<double>::fixed_target(omega, th1, ph1, th2, ph2);
        return triple_diff_xsec(cfg, e1_keV / constants.mc2_keV).value;
    };
    const AcceptanceResult acc = detector_rate_integral(xsec, det1, det2, acceptance);
    return t.photon_flux_per_s * t.electrons_per_barn * acc.barn;
}

double laser_field_strength(double intensity_W_per_cm2)
{
    require_positive(intensity_W_per_cm2, "laser intensity");
    return std::sqrt(2.0 * intensity_W_per_cm2 * 1e4 / (constants.epsilon0_F_per_m * constants.c_m_per_s));
}

LaserStrength laser_strength_aL(double field_V_per_m, double wavelength_m)
{
    require_positive(field_V_per_m, "field strength");
    require_positive(wavelength_m, "wavelength");
    return LaserStrength{constants.elementary_charge_C * field_V_per_m * wavelength_m
                         / (2.0 * std::numbers::pi * constants.mc2_J())};
}

double unruh_temperature(LaserStrength a_L, double laser_photon_energy_eV)
{
    if (!(laser_photon_energy_eV >= 0.0))
        throw PreconditionError("unruh_temperature: photon energy must be non-negative");
    return laser_photon_energy_eV * a_L.a / (2.0 * std::numbers::pi * constants.kB_eV_per_K);
}

double undulator_parameter(const MagneticUndulator& mu)
{
    const double mc = constants.mc2_J() / constants.c_m_per_s;
    return constants.elementary_charge_C * mu.field_T * mu.period_m / (2.0 * std::numbers::pi * mc);
}

namespace {

double period_ratio(double alpha0, double beta)
{
    if (!(beta > 0.0 && beta <= 1.0))
        throw PreconditionError("undulator map: beta must lie in (0, 1]");
    const double r = std::cos(alpha0) + 1.0 / beta;
    if (!(r > 0.0))
        throw PreconditionError("undulator map: degenerate geometry (cos alpha0 + 1/beta <= 0)");
    return r;
}

double energy_of_period_eV(double period_m) { return photon_energy_eV(period_m); }

} // namespace

UndulatorEquivalence undulator_from_laser(const LaserUndulator& laser, double alpha0, double beta)
{
    const double r = period_ratio(alpha0, beta);
    const double a = laser_strength_aL(laser.field_V_per_m, laser.wavelength_m).a;
    UndulatorEquivalence eq;
    eq.laser = laser;
    eq.strength = a;
    eq.magnetic.period_m = laser.wavelength_m / r;
    const double mc = constants.mc2_J() / constants.c_m_per_s;
    eq.magnetic.field_T = a * 2.0 * std::numbers::pi * mc / (constants.elementary_charge_C * eq.magnetic.period_m);
    eq.undulator_energy_eV = energy_of_period_eV(eq.magnetic.period_m);
    return eq;
}

UndulatorEquivalence laser_from_undulator(const MagneticUndulator& mu, double alpha0, double beta)
{
    require_positive(mu.field_T, "undulator field");
    require_positive(mu.period_m, "undulator period");
    const double r = period_ratio(alpha0, beta);
    const double K = undulator_parameter(mu);
    UndulatorEquivalence eq;
    eq.magnetic = mu;
    eq.strength = K;
    eq.laser.wavelength_m = mu.period_m * r;
    eq.laser.field_V_per_m = K * 2.0 * std::numbers::pi * constants.mc2_J()
                             / (constants.elementary_charge_C * eq.laser.wavelength_m);
    eq.undulator_energy_eV = energy_of_period_eV(mu.period_m);
    return eq;
}

double undulator_fundamental(double gamma, double omega_U, double K, double theta)
{
    const double gt = gamma * theta;
    return 2.0 * gamma * gamma * omega_U / (1.0 + K * K + gt * gt);
}

} // namespace xpair
