#pragma once

#include <cmath>
#include <numbers>

#include "xpair/dcs.hpp"
#include "xpair/kinematics.hpp"
#include "xpair/units.hpp"

namespace xpair {

// Inverse single Compton scattering of laser photons on a moving electron,
// with a Gaussian laser spectrum of relative width 1/(omega_L tau_L).

template <typename Scalar = double>
struct SingleComptonConfig {
    ElectronState<Scalar> electron{};
    Scalar omega_L = 0;  //!< laser photon energy (natural)
    Scalar alpha = 0;    //!< angle between laser photon and electron axis
    Scalar thetap = 0;   //!< observation angle about the electron axis
    Scalar tau_L = 0;    //!< pulse duration in natural time units (hbar / m c^2)

    //! Pulse duration in seconds to natural time.
    static Scalar natural_time(double seconds)
    {
        return static_cast<Scalar>(seconds * constants.mc2_eV() / constants.hbar_eV_s);
    }

    //! The product omega_L tau_L that sets the spectral width.
    Scalar bandwidth_product() const { return omega_L * tau_L; }

    void validate() const
    {
        const Scalar pi = std::numbers::pi_v<Scalar>;
        if (!(omega_L > Scalar(0)))
            throw PreconditionError("SingleComptonConfig: omega_L must be positive");
        if (!(alpha >= Scalar(0) && alpha <= pi) || !(thetap >= Scalar(0) && thetap <= pi))
            throw PreconditionError("SingleComptonConfig: angles must lie in [0, pi]");
        if (!(tau_L > Scalar(0)))
            throw PreconditionError("SingleComptonConfig: tau_L must be positive");
    }
};

//! Scattered photon energy at observation angle thetap.
template <typename Scalar>
Scalar omega_prime(const SingleComptonConfig<Scalar>& cfg)
{
    using std::cos;
    using std::sin;
    const auto& e = cfg.electron;
    const Scalar s = sin(cfg.alpha / 2);
    const Scalar den = e.gamma * e.doppler(cfg.thetap) + cfg.omega_L * Scalar(2) * s * s;
    if (!(den > Scalar(0)))
        throw PreconditionError("omega_prime: non-positive denominator");
    return e.gamma * cfg.omega_L * e.doppler(cfg.alpha) / den;
}

//! d sigma_S / dOmega in b/sr (unpolarized).
template <typename Scalar>
XsecValue single_diff_xsec(const SingleComptonConfig<Scalar>& cfg_in)
{
    using W = working_t<Scalar>;
    using std::sin;
    SingleComptonConfig<W> cfg{cfg_in.electron.template cast<W>(), W(cfg_in.omega_L), W(cfg_in.alpha),
                               W(cfg_in.thetap), W(cfg_in.tau_L)};
    const auto& e = cfg.electron;
    const W wp = omega_prime(cfg);
    const W kappa = -e.gamma * cfg.omega_L * e.doppler(cfg.alpha);
    const W kappa_p = -e.gamma * wp * e.doppler(cfg.thetap);
    // 1/kappa - 1/kappa' = (kappa' - kappa) / (kappa kappa') with
    // kappa' - kappa = omega' omega_L (1 - cos alpha), which follows from omega'.
    const W s = sin(cfg.alpha / 2);
    const W diff = wp * cfg.omega_L * W(2) * s * s / (kappa * kappa_p);
    const W bracket = kappa_p / kappa + kappa / kappa_p - W(2) * diff + diff * diff;
    const W ratio = wp / kappa;
    const W value = W(constants.r0_squared_barn()) / W(2) * ratio * ratio * bracket;
    return {static_cast<double>(value), XsecUnit::barn_per_sr};
}

//! Gaussian laser spectral function, per natural energy unit.
template <typename Scalar>
Scalar spectral_G(Scalar omega, const SingleComptonConfig<Scalar>& cfg)
{
    using std::exp;
    using std::sqrt;
    const Scalar wt = cfg.bandwidth_product();
    const Scalar wp = omega_prime(cfg);
    const Scalar d = omega / wp - Scalar(1);
    return wt / (wp * sqrt(Scalar(2) * std::numbers::pi_v<Scalar>)) * exp(-Scalar(0.5) * wt * wt * d * d);
}

//! Relative full width at half maximum of spectral_G.
inline double spectral_relative_fwhm(double omega_tau) { return 2.0 * std::sqrt(2.0 * std::log(2.0)) / omega_tau; }

//! d2 sigma_S / (d omega dOmega) in b/(keV sr).
template <typename Scalar>
XsecValue single_double_diff(Scalar omega, const SingleComptonConfig<Scalar>& cfg)
{
    const double per_natural = static_cast<double>(spectral_G(omega, cfg));
    return {single_diff_xsec(cfg).value * per_natural / constants.mc2_keV, XsecUnit::barn_per_keV_sr};
}

} // namespace xpair
