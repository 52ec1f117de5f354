#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "xpair/errors.hpp"
#include "xpair/four_vector.hpp"

namespace xpair {

// Angle convention: the primed frame has its polar axis along the electron
// velocity. Azimuths are measured from the plane spanned by the incident
// photon and the electron velocity, right-handed about the electron axis, with
// phi' = 0 on the side of the incident photon. In local coordinates the
// electron moves along +z and the incident photon direction is
// (sin alpha, 0, cos alpha).

template <typename Scalar = double>
struct ElectronState {
    Scalar gamma = 1;
    Vector3<Scalar> axis = Vector3<Scalar>::UnitZ();

    static ElectronState at_rest() { return {}; }

    static ElectronState with_gamma(Scalar g, Vector3<Scalar> direction = Vector3<Scalar>::UnitZ())
    {
        if (!(g >= Scalar(1)))
            throw PreconditionError("ElectronState: gamma must be >= 1");
        using std::abs;
        if (abs(direction.norm() - Scalar(1)) > Scalar(1e-12))
            throw PreconditionError("ElectronState: axis must be a unit vector");
        return {g, direction};
    }

    Scalar beta() const
    {
        using std::sqrt;
        return sqrt((gamma - Scalar(1)) * (gamma + Scalar(1))) / gamma;
    }

    //! 1 - beta without cancellation.
    Scalar one_minus_beta() const { return Scalar(1) / (gamma * gamma * (Scalar(1) + beta())); }

    //! 1 - beta cos(theta), accurate for gamma >> 1 and small theta.
    Scalar doppler(Scalar theta) const
    {
        using std::sin;
        const Scalar s = sin(theta / 2);
        return one_minus_beta() + beta() * Scalar(2) * s * s;
    }

    template <typename Other>
    ElectronState<Other> cast() const
    {
        return {static_cast<Other>(gamma), axis.template cast<Other>()};
    }
};

template <typename Scalar = double>
struct ScatterConfig {
    Scalar omega = 0;     //!< incident photon energy
    Scalar alpha = 0;     //!< angle between incident photon and electron axis
    Scalar theta1p = 0;
    Scalar phi1p = 0;
    Scalar theta2p = 0;
    Scalar phi2p = 0;
    ElectronState<Scalar> electron{};

    //! Electron at rest with photon angles measured from the incident photon.
    static ScatterConfig fixed_target(Scalar omega, Scalar theta1, Scalar phi1, Scalar theta2, Scalar phi2)
    {
        ScatterConfig c;
        c.omega = omega;
        c.theta1p = theta1;
        c.phi1p = phi1;
        c.theta2p = theta2;
        c.phi2p = phi2;
        c.validate();
        return c;
    }

    void validate() const
    {
        using std::isfinite;
        const Scalar pi = std::numbers::pi_v<Scalar>;
        if (!(omega > Scalar(0)) || !isfinite(omega))
            throw PreconditionError("ScatterConfig: omega must be positive and finite");
        auto polar_ok = [&](Scalar t) { return t >= Scalar(0) && t <= pi; };
        if (!polar_ok(alpha) || !polar_ok(theta1p) || !polar_ok(theta2p))
            throw PreconditionError("ScatterConfig: polar angles must lie in [0, pi]");
        if (!isfinite(phi1p) || !isfinite(phi2p))
            throw PreconditionError("ScatterConfig: azimuths must be finite");
        if (!(electron.gamma >= Scalar(1)))
            throw PreconditionError("ScatterConfig: gamma must be >= 1");
    }

    template <typename Other>
    ScatterConfig<Other> cast() const
    {
        return {static_cast<Other>(omega),   static_cast<Other>(alpha),
                static_cast<Other>(theta1p), static_cast<Other>(phi1p),
                static_cast<Other>(theta2p), static_cast<Other>(phi2p),
                electron.template cast<Other>()};
    }
};

//! Emission geometry relative to the incident photon.
template <typename Scalar = double>
struct EmissionAngles {
    Scalar theta1 = 0;
    Scalar theta2 = 0;
    Scalar theta12 = 0;
    // 1 - cos of each angle, computed from chord lengths.
    Scalar one_minus_cos1 = 0;
    Scalar one_minus_cos2 = 0;
    Scalar one_minus_cos12 = 0;
};

struct LaserStrength {
    double a = 0;

    explicit LaserStrength(double value = 0) : a(value)
    {
        if (!(value >= 0) || !std::isfinite(value))
            throw PreconditionError("LaserStrength: a_L must be finite and >= 0");
    }
};

namespace detail {

template <typename Scalar>
Vector3<Scalar> incident_direction(Scalar alpha)
{
    using std::cos;
    using std::sin;
    return {sin(alpha), Scalar(0), cos(alpha)};
}

template <typename Scalar>
void angle_between(const Vector3<Scalar>& a, const Vector3<Scalar>& b, Scalar& theta, Scalar& one_minus_cos)
{
    using std::asin;
    using std::min;
    const Scalar chord = (a - b).norm();
    one_minus_cos = chord * chord / 2;
    theta = Scalar(2) * asin(min(Scalar(1), chord / 2));
}

} // namespace detail

template <typename Scalar>
EmissionAngles<Scalar> emission_angles(const ScatterConfig<Scalar>& cfg)
{
    const Vector3<Scalar> k = detail::incident_direction(cfg.alpha);
    const Vector3<Scalar> n1 = unit_from_angles(cfg.theta1p, cfg.phi1p);
    const Vector3<Scalar> n2 = unit_from_angles(cfg.theta2p, cfg.phi2p);
    EmissionAngles<Scalar> out;
    detail::angle_between(k, n1, out.theta1, out.one_minus_cos1);
    detail::angle_between(k, n2, out.theta2, out.one_minus_cos2);
    detail::angle_between(n1, n2, out.theta12, out.one_minus_cos12);
    return out;
}

/*!
 * Upper edge of the photon-1 spectrum, reached when photon 2 carries no
 * energy. Does not depend on the photon-2 direction.
 */
template <typename Scalar>
Scalar omega1_max(const ScatterConfig<Scalar>& cfg, const EmissionAngles<Scalar>& ang)
{
    const auto& e = cfg.electron;
    return e.gamma * cfg.omega * e.doppler(cfg.alpha)
           / (e.gamma * e.doppler(cfg.theta1p) + cfg.omega * ang.one_minus_cos1);
}

template <typename Scalar>
Scalar omega1_max(const ScatterConfig<Scalar>& cfg)
{
    return omega1_max(cfg, emission_angles(cfg));
}

//! Energy of photon 2 fixed by four-momentum conservation.
template <typename Scalar>
Scalar omega2(const ScatterConfig<Scalar>& cfg, const EmissionAngles<Scalar>& ang, Scalar omega1)
{
    const auto& e = cfg.electron;
    if (!(omega1 >= Scalar(0)))
        throw PreconditionError("omega2: omega1 must be non-negative");
    if (ang.one_minus_cos1 == Scalar(0) && ang.one_minus_cos2 == Scalar(0))
        throw KinematicsError(KinematicsErrc::forbidden_configuration,
                              "both photons along the incident photon (no momentum transfer)");
    const Scalar w1max = omega1_max(cfg, ang);
    if (omega1 > w1max)
        throw KinematicsError(KinematicsErrc::above_phase_space, "omega1 exceeds omega1_max");
    const Scalar den = e.gamma * e.doppler(cfg.theta2p) + cfg.omega * ang.one_minus_cos2
                       - omega1 * ang.one_minus_cos12;
    if (!(den > Scalar(0)))
        throw KinematicsError(KinematicsErrc::forbidden_configuration, "non-positive omega2 denominator");
    if (omega1 == w1max)
        return Scalar(0);
    // num = (gamma D1 + omega (1 - cos1)) (w1max - omega1), exact rearrangement
    const Scalar slope = e.gamma * e.doppler(cfg.theta1p) + cfg.omega * ang.one_minus_cos1;
    const Scalar num = slope * (w1max - omega1);
    return num / den;
}

template <typename Scalar>
Scalar omega2(const ScatterConfig<Scalar>& cfg, Scalar omega1)
{
    return omega2(cfg, emission_angles(cfg), omega1);
}

//! Small-angle inverse-Compton edge for gamma >> 1; alpha0 = pi - alpha.
template <typename Scalar>
Scalar omega1_max_approx(Scalar gamma, Scalar omega_L, Scalar alpha0, Scalar theta1p)
{
    using std::cos;
    using std::sqrt;
    if (!(gamma >= Scalar(10)))
        throw PreconditionError("omega1_max_approx: requires gamma >= 10");
    const Scalar c = cos(alpha0 / 2);
    const Scalar x = Scalar(4) * gamma * omega_L * c * c;
    const Scalar omega_m = gamma * x / (Scalar(1) + x);
    const Scalar theta0 = sqrt(Scalar(1) + x) / gamma;
    const Scalar r = theta1p / theta0;
    return omega_m / (Scalar(1) + r * r);
}

//! Edge energy for an electron dressed by a laser of strength a_L (gamma >> 1).
template <typename Scalar>
Scalar omega1_max_dressed(Scalar gamma, Scalar omega_L, Scalar alpha, Scalar theta1p, LaserStrength a_L)
{
    if (!(gamma >= Scalar(10)))
        throw PreconditionError("omega1_max_dressed: requires gamma >= 10");
    const auto e = ElectronState<Scalar>::with_gamma(gamma);
    const Scalar a2 = Scalar(a_L.a) * Scalar(a_L.a);
    const Scalar gt = gamma * theta1p;
    return Scalar(2) * gamma * gamma * omega_L * e.doppler(alpha) / (Scalar(1) + a2 + gt * gt);
}

template <typename Scalar = double>
struct ScatterFourVectors {
    FourVector<Scalar> p;   //!< initial electron
    FourVector<Scalar> k;   //!< incident photon
    FourVector<Scalar> k1;
    FourVector<Scalar> k2;
};

/*!
 * Explicit four-vectors of the incoming particles and the two photons, in a
 * frame whose z axis is rotated onto the electron axis.
 */
template <typename Scalar>
ScatterFourVectors<Scalar> scatter_four_vectors(const ScatterConfig<Scalar>& cfg, Scalar omega1, Scalar omega2)
{
    const auto& e = cfg.electron;
    const Eigen::Matrix<Scalar, 3, 3> rot = rotation_from_z<Scalar>(e.axis);
    ScatterFourVectors<Scalar> v;
    const Scalar gb = e.gamma * e.beta();
    v.p = make_four_vector<Scalar>(e.gamma, gb * e.axis);
    v.k = photon_four_vector<Scalar>(cfg.omega, rot * detail::incident_direction(cfg.alpha));
    v.k1 = photon_four_vector<Scalar>(omega1, rot * unit_from_angles(cfg.theta1p, cfg.phi1p));
    v.k2 = photon_four_vector<Scalar>(omega2, rot * unit_from_angles(cfg.theta2p, cfg.phi2p));
    return v;
}

//! p' = p + k - k1 - k2, checked against the closed-form omega2 and the mass shell.
template <typename Scalar>
FourVector<Scalar> reconstruct_final_electron(const ScatterConfig<Scalar>& cfg, Scalar omega1, Scalar omega2_value)
{
    using std::abs;
    using std::max;
    const Scalar expected = omega2(cfg, omega1);
    const Scalar scale = max({omega1 + omega2_value, cfg.omega, Scalar(1e-300)});
    if (abs(expected - omega2_value) > Scalar(1e-9) * scale)
        throw KinematicsError(KinematicsErrc::inconsistent_kinematics,
                              "omega2 does not satisfy energy-momentum conservation");
    const auto v = scatter_four_vectors(cfg, omega1, omega2_value);
    const FourVector<Scalar> pf = v.p + v.k - v.k1 - v.k2;
    if (abs(minkowski_norm2(pf) + Scalar(1)) > Scalar(1e-9))
        throw KinematicsError(KinematicsErrc::inconsistent_kinematics, "final electron is off its mass shell");
    return pf;
}

/*!
 * Quasimomentum of an electron inside a plane wave of wave vector k and
 * normalized strength a_L; q.q = -(1 + a_L^2).
 */
template <typename Scalar>
FourVector<Scalar> quasimomentum(const FourVector<Scalar>& p, const FourVector<Scalar>& k, LaserStrength a_L)
{
    using std::abs;
    const Scalar kk = minkowski_norm2(k);
    if (abs(kk) > Scalar(1e-10) * k(0) * k(0))
        throw PreconditionError("quasimomentum: k must be null");
    if (abs(minkowski_norm2(p) + Scalar(1)) > Scalar(1e-10) * p(0) * p(0))
        throw PreconditionError("quasimomentum: p must be on the electron mass shell");
    const Scalar kp = minkowski_dot(k, p);
    if (kp == Scalar(0))
        throw KinematicsError(KinematicsErrc::degenerate_geometry, "quasimomentum: k.p = 0");
    const Scalar a2 = Scalar(a_L.a) * Scalar(a_L.a);
    return p - (a2 / (Scalar(2) * kp)) * k;
}

//! Effective mass sqrt(1 + a_L^2) of the dressed electron.
inline double effective_mass(LaserStrength a_L) { return std::sqrt(1.0 + a_L.a * a_L.a); }

} // namespace xpair
