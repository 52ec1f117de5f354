#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <type_traits>

#include "xpair/errors.hpp"
#include "xpair/kinematics.hpp"
#include "xpair/units.hpp"

namespace xpair {

//! Working precision used internally by the cross-section evaluation.
template <typename Scalar>
struct WorkingPrecision {
    using type = Scalar;
};

// The term groups of X cancel against each other by up to ~1e8 for soft
// photons, so double-precision callers are evaluated in long double.
template <>
struct WorkingPrecision<double> {
    using type = long double;
};

template <typename Scalar>
using working_t = typename WorkingPrecision<Scalar>::type;

//! Lorentz invariants kappa_i (from p) and kappa_i' (from p').
template <typename Scalar = double>
struct KappaSet {
    Scalar k1 = 0, k2 = 0, k3 = 0;
    Scalar k1p = 0, k2p = 0, k3p = 0;

    KappaSet swapped_photons() const { return {k2, k1, k3, k2p, k1p, k3p}; }

    template <typename Other>
    KappaSet<Other> cast() const
    {
        return {Other(k1), Other(k2), Other(k3), Other(k1p), Other(k2p), Other(k3p)};
    }
};

template <typename Scalar = double>
struct Abbreviations {
    Scalar a = 0, b = 0, c = 0, x = 0, z = 0, A = 0, B = 0, rho = 0;
};

namespace detail {

template <typename Scalar>
Scalar magnitude(Scalar v)
{
    return v < Scalar(0) ? -v : v;
}

//! Neumaier compensated summation.
template <typename Scalar>
class CompensatedSum {
public:
    CompensatedSum& operator+=(Scalar v)
    {
        const Scalar t = sum_ + v;
        if (magnitude(sum_) >= magnitude(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
        return *this;
    }
    Scalar value() const { return sum_ + comp_; }

private:
    Scalar sum_ = 0;
    Scalar comp_ = 0;
};

template <typename Scalar>
Scalar sum3(Scalar u, Scalar v, Scalar w)
{
    CompensatedSum<Scalar> s;
    s += u;
    s += v;
    s += w;
    return s.value();
}

} // namespace detail

template <typename Scalar>
Abbreviations<Scalar> abbreviations(const KappaSet<Scalar>& ks)
{
    using detail::sum3;
    const std::array<Scalar, 3> k{ks.k1, ks.k2, ks.k3};
    const std::array<Scalar, 3> kp{ks.k1p, ks.k2p, ks.k3p};
    Abbreviations<Scalar> ab;
    ab.a = sum3(1 / k[0], 1 / k[1], 1 / k[2]);
    ab.b = sum3(1 / kp[0], 1 / kp[1], 1 / kp[2]);
    ab.c = sum3(1 / (k[0] * kp[0]), 1 / (k[1] * kp[1]), 1 / (k[2] * kp[2]));
    ab.x = sum3(k[0], k[1], k[2]);
    ab.z = sum3(k[0] * kp[0], k[1] * kp[1], k[2] * kp[2]);
    ab.A = k[0] * k[1] * k[2];
    ab.B = kp[0] * kp[1] * kp[2];
    detail::CompensatedSum<Scalar> rho;
    for (int i = 0; i < 3; ++i) {
        rho += k[i] / kp[i];
        rho += kp[i] / k[i];
    }
    ab.rho = rho.value();
    return ab;
}

namespace detail {

template <typename W>
W x_core(const KappaSet<W>& ks)
{
    const Abbreviations<W> s = abbreviations(ks);
    const W ab_c = s.a * s.b - s.c;
    const W x = s.x;
    const W z = s.z;

    CompensatedSum<W> bracket;
    bracket += (s.A + s.B) * (x * x + x);
    bracket += -(s.a * s.A + s.b * s.B) * (W(2) * x + z * (W(1) - x));
    bracket += x * x * x * (W(1) - z);
    bracket += W(2) * z * x;

    CompensatedSum<W> total;
    total += W(2) * ab_c * ((s.a + s.b) * (x + W(2)) - ab_c - W(8));
    total += -W(2) * x * (s.a * s.a + s.b * s.b);
    total += -W(8) * s.c;
    total += W(4) / (s.A * s.B) * bracket.value();
    total += -W(2) * s.rho * (s.a * s.b + s.c * (W(1) - x));
    return total.value();
}

} // namespace detail

/*!
 * The unpolarized double-Compton cross-section function X of the six
 * invariants. Evaluated in working_t<Scalar>; in long double the
 * disagreement with a plain double evaluation estimates the cancellation,
 * and badly conditioned points are redone in binary128 where available.
 */
template <typename Scalar>
Scalar x_function(const KappaSet<Scalar>& ks_in)
{
    using W = working_t<Scalar>;
    using std::isfinite;
    const KappaSet<W> ks = ks_in.template cast<W>();
    const W A = ks.k1 * ks.k2 * ks.k3;
    const W B = ks.k1p * ks.k2p * ks.k3p;
    if (A == W(0) || B == W(0) || !isfinite(A) || !isfinite(B))
        throw SingularityError("x_function: vanishing invariant (infrared or collinear singularity)");
    const W value = detail::x_core(ks);
#if defined(__SIZEOF_FLOAT128__)
    if constexpr (std::is_same_v<W, long double>) {
        // long double carries 11 more bits than double
        const W coarse = static_cast<W>(detail::x_core(ks.template cast<double>()));
        const W error = detail::magnitude(value - coarse) / W(2048);
        if (!(error <= W(1e-15) * detail::magnitude(value)))
            return static_cast<Scalar>(detail::x_core(ks.template cast<__float128>()));
    }
#endif
    return static_cast<Scalar>(value);
}

//! kappa invariants for a given energy pair; no consistency check.
template <typename Scalar>
KappaSet<Scalar> kappas_unchecked(const ScatterConfig<Scalar>& cfg, const EmissionAngles<Scalar>& ang,
                                  Scalar omega1, Scalar omega2_value)
{
    const auto& e = cfg.electron;
    const Scalar w = cfg.omega;
    const Scalar w1 = omega1;
    const Scalar w2 = omega2_value;
    KappaSet<Scalar> ks;
    ks.k1 = e.gamma * w1 * e.doppler(cfg.theta1p);
    ks.k2 = e.gamma * w2 * e.doppler(cfg.theta2p);
    ks.k3 = -e.gamma * w * e.doppler(cfg.alpha);
    const Scalar pair = w1 * w2 * ang.one_minus_cos12;
    const Scalar in1 = w * w1 * ang.one_minus_cos1;
    const Scalar in2 = w * w2 * ang.one_minus_cos2;
    ks.k1p = detail::sum3(-ks.k1, -in1, pair);
    ks.k2p = detail::sum3(-ks.k2, -in2, pair);
    ks.k3p = detail::sum3(-ks.k3, -in1, -in2);
    return ks;
}

template <typename Scalar>
KappaSet<Scalar> kappas(const ScatterConfig<Scalar>& cfg, Scalar omega1, Scalar omega2_value)
{
    using std::abs;
    using std::max;
    const auto ang = emission_angles(cfg);
    const Scalar expected = omega2(cfg, ang, omega1);
    if (abs(expected - omega2_value) > Scalar(1e-9) * max(omega1 + omega2_value, cfg.omega))
        throw KinematicsError(KinematicsErrc::inconsistent_kinematics,
                              "kappas: (omega1, omega2) violates conservation");
    return kappas_unchecked(cfg, ang, omega1, omega2_value);
}

enum class XsecUnit {
    natural,             //!< r0^2 per (m c^2) per sr^2
    barn_per_keV_sr2,
    barn_per_keV_sr,
    barn_per_sr,
};

struct XsecValue {
    double value = 0;
    XsecUnit unit = XsecUnit::natural;
};

struct XsecOptions {
    //! Both photon energies must be at least this large (natural units).
    double ir_cutoff = 0;
};

//! Everything computed along the way to one triple-differential value.
template <typename Scalar = double>
struct TripleDiffPoint {
    Scalar omega1 = 0;
    Scalar omega2 = 0;
    Scalar omega1_max = 0;
    KappaSet<Scalar> kappas{};
    Scalar x_value = 0;
    //! gamma (1 - beta cos theta2') + omega (1 - cos theta2) - omega1 (1 - cos theta12)
    Scalar denominator = 0;
    Scalar natural = 0;  //!< d3sigma in r0^2 / (m c^2 sr^2)
};

template <typename Scalar>
TripleDiffPoint<Scalar> evaluate_triple(const ScatterConfig<Scalar>& cfg_in, Scalar omega1_in,
                                        const XsecOptions& opts = {})
{
    using W = working_t<Scalar>;
    const ScatterConfig<W> cfg = cfg_in.template cast<W>();
    const W omega1 = static_cast<W>(omega1_in);
    const auto ang = emission_angles(cfg);
    const W w1max = omega1_max(cfg, ang);
    if (!(omega1 > W(0)) || !(omega1 < w1max)) {
        if (omega1 == w1max || omega1 == W(0))
            throw SingularityError("triple_diff_xsec: infrared divergence at the phase-space edge");
        throw KinematicsError(KinematicsErrc::above_phase_space,
                              "triple_diff_xsec: omega1 outside (0, omega1_max)");
    }
    const W w2 = omega2(cfg, ang, omega1);
    const W cut = static_cast<W>(opts.ir_cutoff);
    if (omega1 < cut || w2 < cut || !(w2 > W(0)))
        throw SingularityError("triple_diff_xsec: photon energy below the infrared cutoff");

    const auto& e = cfg.electron;
    const KappaSet<W> ks = kappas_unchecked(cfg, ang, omega1, w2);
    const W X = x_function(ks);
    const W den = e.gamma * e.doppler(cfg.theta2p) + cfg.omega * ang.one_minus_cos2 - omega1 * ang.one_minus_cos12;
    const W flux = e.gamma * cfg.omega * e.doppler(cfg.alpha);
    const W prefactor = W(constants.alpha_qed) / (W(16) * std::numbers::pi_v<W> * std::numbers::pi_v<W>);

    TripleDiffPoint<Scalar> out;
    out.omega1 = omega1_in;
    out.omega2 = static_cast<Scalar>(w2);
    out.omega1_max = static_cast<Scalar>(w1max);
    out.kappas = KappaSet<Scalar>{Scalar(ks.k1), Scalar(ks.k2), Scalar(ks.k3),
                                  Scalar(ks.k1p), Scalar(ks.k2p), Scalar(ks.k3p)};
    out.x_value = static_cast<Scalar>(X);
    out.denominator = static_cast<Scalar>(den);
    out.natural = static_cast<Scalar>(prefactor * X * omega1 * w2 / (flux * den));
    return out;
}

//! d3sigma / (d omega1 dOmega1' dOmega2') in b/(keV sr^2).
template <typename Scalar>
XsecValue triple_diff_xsec(const ScatterConfig<Scalar>& cfg, Scalar omega1, const XsecOptions& opts = {})
{
    const auto pt = evaluate_triple(cfg, omega1, opts);
    return {xsec_natural_to_barn_per_keV_sr2(static_cast<double>(pt.natural)), XsecUnit::barn_per_keV_sr2};
}

/*!
 * Both photons into one and the same solid angle: d2sigma/(d omega1 dOmega)
 * = 4 pi d3sigma/(d omega1 dOmega1 dOmega2), in b/(keV sr).
 */
template <typename Scalar>
XsecValue same_direction_double_diff(const ScatterConfig<Scalar>& cfg, Scalar omega1, const XsecOptions& opts = {})
{
    using std::abs;
    using std::cos;
    const Scalar tol = Scalar(1e-12);
    const bool same_polar = abs(cfg.theta1p - cfg.theta2p) <= tol;
    const bool same_azimuth = abs(cfg.phi1p - cfg.phi2p) <= tol
                              || (abs(cos(cfg.phi1p - cfg.phi2p) - Scalar(1)) <= tol);
    if (!same_polar || !same_azimuth)
        throw PreconditionError("same_direction_double_diff: photons must share one direction");
    const XsecValue triple = triple_diff_xsec(cfg, omega1, opts);
    return {4.0 * std::numbers::pi * triple.value, XsecUnit::barn_per_keV_sr};
}

} // namespace xpair
