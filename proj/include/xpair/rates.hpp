#pragma once

#include <string>

#include "xpair/dcs.hpp"
#include "xpair/detector.hpp"
#include "xpair/kinematics.hpp"
#include "xpair/quadrature.hpp"

namespace xpair {

//! Inverse area (luminosity, areal density).
struct AreaDensity {
    double per_m2 = 0;

    double per_cm2() const { return per_m2 * 1e-4; }
    double per_barn() const { return per_m2 / 1e28; }

    static AreaDensity from_per_barn(double v) { return {v * 1e28}; }
    static AreaDensity from_per_cm2(double v) { return {v * 1e4}; }
};

//! Electron bunch and laser pulse of an inverse-Compton collision.
struct BeamParams {
    double electrons_per_bunch = 0;
    double photons_per_bunch = 0;
    double electron_transverse_rms_m = 0;
    double photon_transverse_rms_m = 0;
    double electron_bunch_length_rms_m = 0;
    double laser_photon_energy_eV = 0;
    double laser_intensity_W_per_cm2 = 0;
    double pulse_duration_s = 0;
};

// Values printed alongside the formulas they are compared with.
inline constexpr double quoted_luminosity_per_electron_per_barn = 0.06;
inline constexpr double quoted_laser_strength = 0.85;

//! L = N_e N_gamma / (2 pi (sigma_te^2 + sigma_tgamma^2)) for perfect overlap.
AreaDensity luminosity_per_crossing(const BeamParams& b);

//! L / N_e = I_L tau_L / (4 hbar omega_L).
AreaDensity luminosity_per_electron(const BeamParams& b);

//! Duration of the emitted pair pulse for a head-on collision, sigma_le / c.
double two_photon_pulse_duration_s(const BeamParams& b);

//! Yield density d3sigma * (L/N_e), in pairs/(keV sr^2 electron).
double pair_yield_per_electron(double xsec_barn_per_keV_sr2, AreaDensity lum_per_electron);

double pair_yield_per_electron(const ScatterConfig<double>& cfg, double omega1, const BeamParams& b);

//! Y N_e dOmega1 dOmega2 d omega1.
double pairs_per_pulse(double yield, double electrons_per_bunch, const DetectorConfig& det1,
                       const DetectorConfig& det2);

//! Solid target described by its free-electron areal density.
struct TargetConfig {
    double electrons_per_barn = 0;
    double photon_flux_per_s = 0;
    std::string material;
    double thickness_m = 0;

    //! Z rho N_A / A times thickness; rho in g/cm^3, A in g/mol.
    static TargetConfig from_material(std::string name, double atomic_number, double molar_mass,
                                      double density_g_per_cm3, double thickness_m, double flux_per_s);

    void validate() const;
};

/*!
 * Coincidence rate in pairs/s for an electron-at-rest target. The detector
 * axes are primed angles measured from the incident photon; omega is the
 * incident photon energy in keV.
 */
double fixed_target_rate(const TargetConfig& t, const DetectorConfig& det1, const DetectorConfig& det2,
                         double omega_keV, const AcceptanceOptions& acceptance = {AcceptanceMode::midpoint});

//! Peak electric field of a linearly polarized wave, sqrt(2 I / (eps0 c)), V/m.
double laser_field_strength(double intensity_W_per_cm2);

//! a_L = e E_L lambda_L / (2 pi m c^2).
LaserStrength laser_strength_aL(double field_V_per_m, double wavelength_m);

//! T = hbar omega_L a_L / (2 pi k_B), kelvin.
double unruh_temperature(LaserStrength a_L, double laser_photon_energy_eV);

struct MagneticUndulator {
    double field_T = 0;
    double period_m = 0;
};

struct LaserUndulator {
    double field_V_per_m = 0;
    double wavelength_m = 0;
};

struct UndulatorEquivalence {
    MagneticUndulator magnetic;
    LaserUndulator laser;
    double strength = 0;         //!< K = a_L
    double undulator_energy_eV = 0;  //!< hbar omega_U = 2 pi hbar c / lambda_U
};

//! Equivalent magnetic undulator of a laser wave; alpha0 = 0 is head-on.
UndulatorEquivalence undulator_from_laser(const LaserUndulator& laser, double alpha0, double beta);

//! Equivalent laser wave of a magnetic undulator.
UndulatorEquivalence laser_from_undulator(const MagneticUndulator& mu, double alpha0, double beta);

//! K = e B_U lambda_U / (2 pi m c).
double undulator_parameter(const MagneticUndulator& mu);

//! Fundamental 2 gamma^2 omega_U / (1 + K^2 + (gamma theta)^2), same energy unit as omega_U.
double undulator_fundamental(double gamma, double omega_U, double K, double theta);

} // namespace xpair
