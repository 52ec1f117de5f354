#pragma once

// Independent reference implementations used only by the tests. Everything
// here is built from explicit four-vectors at 50 significant digits and
// shares no code with the library.

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

inline mp pi() { return boost::math::constants::pi<mp>(); }

struct Vec4 {
    mp t, x, y, z;
};

inline Vec4 operator+(const Vec4& a, const Vec4& b) { return {a.t + b.t, a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec4 operator-(const Vec4& a, const Vec4& b) { return {a.t - b.t, a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec4 operator*(const mp& s, const Vec4& a) { return {s * a.t, s * a.x, s * a.y, s * a.z}; }

// signature (-+++)
inline mp dot(const Vec4& a, const Vec4& b) { return -a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z; }

// Electron along +z; incident photon in the x-z plane at angle alpha.
struct Setup {
    mp gamma = 1;
    mp omega = 0;
    mp alpha = 0;
    mp th1 = 0, ph1 = 0, th2 = 0, ph2 = 0;
};

inline Vec4 null_vector(const mp& e, const mp& th, const mp& ph)
{
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    return {e, e * sin(th) * cos(ph), e * sin(th) * sin(ph), e * cos(th)};
}

inline Vec4 electron(const Setup& s)
{
    using boost::multiprecision::sqrt;
    const mp gb = sqrt(s.gamma * s.gamma - 1);
    return {s.gamma, 0, 0, gb};
}

inline Vec4 incident(const Setup& s) { return null_vector(s.omega, s.alpha, mp(0)); }

//! Solves (p + k - k1 - k2)^2 = -1 for omega2 by bracketing root search.
inline mp omega2_by_root(const Setup& s, const mp& w1)
{
    const Vec4 p = electron(s), k = incident(s), k1 = null_vector(w1, s.th1, s.ph1);
    auto f = [&](const mp& w2) {
        const Vec4 pf = p + k - k1 - null_vector(w2, s.th2, s.ph2);
        return dot(pf, pf) + 1;
    };
    // f rises linearly from 1 - M^2 <= 0, M the invariant mass of p + k - k1
    if (f(mp(0)) > 0)
        return mp(-1);
    mp hi = p.t + k.t;
    while (f(hi) < 0)
        hi *= 2;
    boost::uintmax_t iters = 400;
    const auto r = boost::math::tools::toms748_solve(f, mp(0), hi, boost::math::tools::eps_tolerance<mp>(160), iters);
    return (r.first + r.second) / 2;
}

struct Kappas {
    std::array<mp, 3> k, kp;
};

//! kappa_i and kappa_i' straight from their dot-product definitions.
inline Kappas kappas_from_vectors(const Vec4& p, const Vec4& k, const Vec4& k1, const Vec4& k2)
{
    const Vec4 pf = p + k - k1 - k2;
    Kappas out;
    out.k = {-dot(p, k1), -dot(p, k2), dot(p, k)};
    out.kp = {dot(pf, k1), dot(pf, k2), -dot(pf, k)};
    return out;
}

inline Kappas kappas(const Setup& s, const mp& w1, const mp& w2)
{
    return kappas_from_vectors(electron(s), incident(s), null_vector(w1, s.th1, s.ph1), null_vector(w2, s.th2, s.ph2));
}

//! Cross-section function, transcribed term by term without regrouping.
inline mp x_function(const Kappas& q)
{
    const mp& k1 = q.k[0];
    const mp& k2 = q.k[1];
    const mp& k3 = q.k[2];
    const mp& l1 = q.kp[0];
    const mp& l2 = q.kp[1];
    const mp& l3 = q.kp[2];
    const mp a = 1 / k1 + 1 / k2 + 1 / k3;
    const mp b = 1 / l1 + 1 / l2 + 1 / l3;
    const mp c = 1 / (k1 * l1) + 1 / (k2 * l2) + 1 / (k3 * l3);
    const mp x = k1 + k2 + k3;
    const mp z = k1 * l1 + k2 * l2 + k3 * l3;
    const mp A = k1 * k2 * k3;
    const mp B = l1 * l2 * l3;
    const mp rho = k1 / l1 + l1 / k1 + k2 / l2 + l2 / k2 + k3 / l3 + l3 / k3;

    const mp line1 = 2 * (a * b - c) * ((a + b) * (x + 2) - (a * b - c) - 8);
    const mp line2 = -2 * x * (a * a + b * b) - 8 * c;
    const mp bracket = (A + B) * (x * x + x) - (a * A + b * B) * (2 * x + z * (1 - x)) + x * x * x * (1 - z) + 2 * z * x;
    const mp line3 = 4 / (A * B) * bracket;
    const mp line4 = -2 * rho * (a * b + c * (1 - x));
    return line1 + line2 + line3 + line4;
}

//! d3sigma in r0^2/(m c^2 sr^2); the flux and denominator come from dot products.
inline mp triple_natural(const Setup& s, const mp& w1, const mp& alpha_qed)
{
    const mp w2 = omega2_by_root(s, w1);
    const Vec4 p = electron(s), k = incident(s), k1 = null_vector(w1, s.th1, s.ph1);
    const Vec4 n2 = null_vector(mp(1), s.th2, s.ph2);
    const mp flux = -dot(p, k);
    const mp den = -dot(p + k - k1, n2);
    const mp X = x_function(kappas(s, w1, w2));
    return alpha_qed / (16 * pi() * pi()) * X * w1 * w2 / (flux * den);
}

//! Boost along z by -beta of the electron: the electron ends at rest.
inline Vec4 to_rest_frame(const Vec4& v, const mp& gamma)
{
    using boost::multiprecision::sqrt;
    const mp gb = sqrt(gamma * gamma - 1);
    return {gamma * v.t - gb * v.z, v.x, v.y, gamma * v.z - gb * v.t};
}

//! Klein-Nishina total cross section in units of r0^2, k = omega / m c^2.
inline double klein_nishina_total(double k)
{
    const double l = std::log1p(2 * k);
    return 2 * std::numbers::pi
           * ((1 + k) / (k * k) * (2 * (1 + k) / (1 + 2 * k) - l / k) + l / (2 * k) - (1 + 3 * k) / ((1 + 2 * k) * (1 + 2 * k)));
}

//! Klein-Nishina dsigma/dOmega in units of r0^2 at scattering angle theta.
inline mp klein_nishina_differential(const mp& k, const mp& theta)
{
    using boost::multiprecision::cos;
    using boost::multiprecision::sin;
    const mp ratio = 1 / (1 + k * (1 - cos(theta)));  // omega' / omega
    const mp s = sin(theta);
    return ratio * ratio * (ratio + 1 / ratio - s * s) / 2;
}

} // namespace oracle
