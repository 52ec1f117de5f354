#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "xpair/errors.hpp"
#include "xpair/four_vector.hpp"

namespace xpair {

/*!
 * Circular photon detector centred on (theta, phi) in the primed frame.
 * The acceptance is the cone whose solid angle equals `solid_angle`.
 */
struct DetectorConfig {
    double theta = 0;                 //!< polar angle of the detector axis (rad)
    double phi = 0;                   //!< azimuth of the detector axis (rad)
    double solid_angle = 0;           //!< sr, in (0, 4 pi]
    double center_energy_keV = 0;     //!< nominal photon energy
    std::optional<double> fractional_bandwidth;  //!< energy gate; none = all energies

    void validate() const
    {
        if (!(solid_angle >= 0.0) || solid_angle > 4.0 * std::numbers::pi * (1 + 1e-12))
            throw PreconditionError("DetectorConfig: solid angle must lie in [0, 4 pi]");
        if (fractional_bandwidth && !(*fractional_bandwidth > 0.0 && *fractional_bandwidth < 1.0))
            throw PreconditionError("DetectorConfig: fractional bandwidth must lie in (0, 1)");
        if (!(center_energy_keV >= 0.0))
            throw PreconditionError("DetectorConfig: centre energy must be non-negative");
    }

    //! Half opening angle of the acceptance cone.
    double half_angle() const
    {
        const double c = std::clamp(1.0 - solid_angle / (2.0 * std::numbers::pi), -1.0, 1.0);
        return std::acos(c);
    }

    //! Width of the energy window, 0 when ungated.
    double energy_window_keV() const { return fractional_bandwidth ? *fractional_bandwidth * center_energy_keV : 0.0; }

    Vector3<double> axis() const
    {
        return unit_from_angles(theta, phi);
    }

    bool accepts_direction(const Vector3<double>& dir) const
    {
        if (solid_angle >= 4.0 * std::numbers::pi * (1 - 1e-12))
            return true;
        // 1 - cos(angle) = |a - b|^2 / 2, compared against 1 - cos(half angle)
        const double one_minus_cos = (dir - axis()).squaredNorm() / 2.0;
        return one_minus_cos <= solid_angle / (2.0 * std::numbers::pi);
    }

    bool accepts_energy(double e_keV) const
    {
        if (!fractional_bandwidth)
            return true;
        const double half = energy_window_keV() / 2.0;
        return e_keV >= center_energy_keV - half && e_keV <= center_energy_keV + half;
    }
};

} // namespace xpair
