#pragma once

#include <cmath>
#include <numbers>

#include "xpair/errors.hpp"

// Natural units: hbar = m = c = 1. Energies are in units of the electron rest
// energy, lengths in units of the reduced Compton wavelength. Everything inside
// the library is natural; laboratory units appear only at the I/O boundary.

namespace xpair {

struct PhysicalConstants {
    double r0_m = 2.8179403262e-15;          //!< classical electron radius
    double alpha_qed = 7.2973525693e-3;      //!< fine-structure constant
    double mc2_keV = 510.999;                //!< electron rest energy
    double barn_per_m2 = 1e28;
    double kB_eV_per_K = 8.617333262e-5;
    double hbar_eV_s = 6.582119569e-16;
    double hbar_c_eV_m = 1.973269804e-7;
    double elementary_charge_C = 1.602176634e-19;
    double epsilon0_F_per_m = 8.8541878128e-12;
    double c_m_per_s = 299792458.0;
    double avogadro = 6.02214076e23;

    constexpr double r0_squared_barn() const { return r0_m * r0_m * barn_per_m2; }
    constexpr double mc2_eV() const { return mc2_keV * 1e3; }
    constexpr double mc2_J() const { return mc2_eV() * elementary_charge_C; }
};

inline constexpr PhysicalConstants constants{};

//! Energy in units of m c^2.
struct NaturalEnergy {
    double value = 0.0;

    constexpr double keV() const { return value * constants.mc2_keV; }
    constexpr double eV() const { return value * constants.mc2_eV(); }
};

inline NaturalEnergy kev_to_natural(double e_keV)
{
    if (!(e_keV >= 0.0) || !std::isfinite(e_keV))
        throw PreconditionError("kev_to_natural: energy must be finite and non-negative");
    return {e_keV / constants.mc2_keV};
}

inline NaturalEnergy ev_to_natural(double e_eV)
{
    if (!(e_eV >= 0.0) || !std::isfinite(e_eV))
        throw PreconditionError("ev_to_natural: energy must be finite and non-negative");
    return {e_eV / constants.mc2_eV()};
}

inline constexpr double natural_to_kev(double e) { return e * constants.mc2_keV; }

//! Cross-section density in r0^2 per natural energy unit per sr^2 -> b/(keV sr^2).
inline double xsec_natural_to_barn_per_keV_sr2(double v)
{
    if (!std::isfinite(v))
        throw PreconditionError("xsec_natural_to_barn_per_keV_sr2: non-finite input");
    return v * constants.r0_squared_barn() / constants.mc2_keV;
}

inline double xsec_barn_per_keV_sr2_to_natural(double v)
{
    if (!std::isfinite(v))
        throw PreconditionError("xsec_barn_per_keV_sr2_to_natural: non-finite input");
    return v * constants.mc2_keV / constants.r0_squared_barn();
}

//! Dimensionless product omega_L * tau_L for a photon energy in eV and a duration in s.
inline double phase_cycles(double omega_eV, double tau_s)
{
    return omega_eV / constants.hbar_eV_s * tau_s;
}

//! Vacuum wavelength (m) of a photon with energy given in eV.
inline double wavelength_m(double e_eV) { return 2.0 * std::numbers::pi * constants.hbar_c_eV_m / e_eV; }

//! Photon energy (eV) for a vacuum wavelength in m.
inline double photon_energy_eV(double lambda_m) { return 2.0 * std::numbers::pi * constants.hbar_c_eV_m / lambda_m; }

} // namespace xpair
