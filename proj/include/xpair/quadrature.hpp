#pragma once

#include <array>
#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "xpair/dcs.hpp"
#include "xpair/detector.hpp"
#include "xpair/kinematics.hpp"

namespace xpair {

//! Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

GaussRule gauss_legendre(int n);

//! Rule mapped onto [a, b].
GaussRule gauss_legendre(int n, double a, double b);

struct CubatureOptions {
    double rel_tol = 1e-4;
    double abs_tol = 0.0;
    std::size_t max_regions = 4000;
    //! Throw IntegrationError when the tolerance is not met.
    bool throw_on_failure = true;
};

struct CubatureResult {
    double value = 0;
    double error = 0;
    std::size_t evaluations = 0;
    std::size_t regions = 0;
    bool converged = false;
};

struct Interval {
    double lo = 0;
    double hi = 0;
};

/*!
 * Globally adaptive Gauss-Kronrod (7, 15) integration over [lo, hi]. The
 * error estimate per interval is |K15 - G7|.
 */
CubatureResult integrate_adaptive(const std::function<double(double)>& f, Interval range,
                                  const CubatureOptions& opts = {});

/*!
 * Globally adaptive tensor-product Gauss-Kronrod (7, 15) cubature over a
 * rectangle. Each region is bisected along the axis whose embedded
 * Gauss-rule difference is larger.
 */
CubatureResult integrate_adaptive_2d(const std::function<double(double, double)>& f, Interval x, Interval y,
                                     const CubatureOptions& opts = {});

/*!
 * Parameterisation of a polar angle about the electron axis. For fast
 * electrons the variable is ln(1 - beta cos theta), which spreads the
 * Doppler cone over the unit range; otherwise it is cos theta.
 */
class PolarMap {
public:
    PolarMap(const ElectronState<double>& electron, double theta_min, double theta_max);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool logarithmic() const { return log_; }

    struct Point {
        double theta;
        double jacobian;  //!< |d cos theta / d v|
    };

    Point at(double v) const;
    double variable(double theta) const;

private:
    double beta_;
    double one_minus_beta_;
    bool log_;
    double lo_;
    double hi_;
};

struct Photon2Options {
    CubatureOptions cubature{};
    //! Photon energies below this (natural units) contribute nothing.
    double ir_cutoff = 0;
};

struct IntegratedXsec {
    XsecValue value;     //!< b/(keV sr)
    double error_bound;  //!< same unit
    std::size_t evaluations;
};

/*!
 * d2sigma/(d omega1 dOmega1') with the second photon integrated over the
 * full sphere. Photon-2 angles in `cfg` are ignored.
 */
IntegratedXsec integrate_photon2(const ScatterConfig<double>& cfg, double omega1, const Photon2Options& opts = {});

//! Cross-section callable: (omega1 in keV, theta1', phi1', theta2', phi2') -> b/(keV sr^2).
using XsecCallable = std::function<double(double, double, double, double, double)>;

enum class AcceptanceMode { midpoint, quadrature, automatic };

struct AcceptanceOptions {
    AcceptanceMode mode = AcceptanceMode::automatic;
    //! Relative spread across the window above which quadrature is used.
    double flatness_threshold = 0.01;
    int points_per_axis = 6;
};

struct AcceptanceResult {
    double barn = 0;  //!< effective cross section: pairs per incident quantum per (electron/b)
    bool used_quadrature = false;
    double spread = 0;  //!< observed relative variation across the window
};

/*!
 * Integral of the cross section over the acceptance of two detectors:
 * the photon-1 energy window of det1 and the two solid-angle cones.
 * Midpoint rule d3sigma * dOmega1 * dOmega2 * d omega1 unless the window
 * is not flat, in which case a Gauss-Legendre product rule is used.
 */
AcceptanceResult detector_rate_integral(const XsecCallable& xsec, const DetectorConfig& det1,
                                        const DetectorConfig& det2, const AcceptanceOptions& opts = {});

//! Direction at local cone coordinates (1 - cos rho, chi) about the detector axis.
Vector3<double> cone_direction(const DetectorConfig& det, double one_minus_cos_rho, double chi);

//! (theta, phi) of a unit vector, phi in [0, 2 pi).
std::array<double, 2> polar_angles(const Vector3<double>& dir);

} // namespace xpair
