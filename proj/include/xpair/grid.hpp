#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "xpair/kinematics.hpp"
#include "xpair/quadrature.hpp"

namespace xpair {

enum class GridQuantity {
    triple_xsec,         //!< d3sigma, b/(keV sr^2)
    pair_yield,          //!< d3sigma L/N_e, pairs/(keV sr^2 electron)
    single_compton,      //!< d2sigma_S/(d omega dOmega), b/(keV sr)
    photon2_integrated,  //!< d2sigma_D/(d omega1 dOmega1), b/(keV sr)
};

enum class AngleAxis {
    theta,        //!< axis values are angles in rad
    gamma_theta,  //!< axis values are gamma * theta'
};

//! Azimuths of the two photons: opposite (phi2 - phi1 = pi), equal, or explicit.
enum class GeometryMode { one_mode, two_mode, custom };

enum class MaskCode : std::uint8_t {
    ok = 0,
    forbidden = 1,            //!< above the kinematic edge
    ir_cutoff = 2,            //!< within the infrared cutoff of either edge
    degenerate = 3,           //!< no momentum transfer possible
    integration_failure = 4,  //!< value is the best estimate of a failed integral
    below_floor = 5,          //!< finite value under the logarithmic floor
};

const char* to_string(GridQuantity q);
const char* to_string(GeometryMode g);
const char* to_string(AngleAxis a);
const char* unit_of(GridQuantity q);

struct GridSpec {
    Interval omega1_keV{1.0, 100.0};
    int omega1_steps = 100;
    Interval angle{0.0, 3.14};
    int angle_steps = 100;
    AngleAxis angle_axis = AngleAxis::theta;
    GeometryMode geometry = GeometryMode::one_mode;
    double phi1 = 0.0;  //!< used by GeometryMode::custom
    double phi2 = 0.0;
    GridQuantity quantity = GridQuantity::triple_xsec;
    //! Evaluation is restricted to omega1 in [cutoff, omega1_max - cutoff].
    double ir_cutoff_keV = 0.1;
    //! Values below this are floored in the log10 column.
    double log_floor = 1e-30;

    void validate() const;
    double azimuth1() const;
    double azimuth2() const;
};

//! Physical setting shared by every grid cell.
struct GridPhysics {
    //! Incident photon energy (or laser photon energy), alpha and electron; photon angles are overwritten.
    ScatterConfig<double> base{};
    double luminosity_per_electron_per_barn = 0;  //!< for pair_yield
    double tau_natural = 0;                        //!< for single_compton
    Photon2Options photon2{};
};

struct GridResult {
    GridSpec spec;
    double gamma = 1;
    Eigen::VectorXd omega1_keV;
    Eigen::VectorXd angle;       //!< axis values as requested (rad or gamma theta)
    Eigen::VectorXd theta_rad;   //!< the corresponding theta'
    Eigen::MatrixXd values;      //!< rows: omega1, columns: angle
    Eigen::MatrixXd log10_values;
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> mask;

    //! Number of cells carrying the given mask code.
    Eigen::Index count(MaskCode code) const;
};

//! Value and mask of one cell; the building block of compute_grid.
struct CellValue {
    double value = 0;
    MaskCode mask = MaskCode::ok;
};

CellValue evaluate_cell(const GridSpec& spec, const GridPhysics& phys, double omega1_keV, double theta_rad);

GridResult compute_grid(const GridSpec& spec, const GridPhysics& phys, unsigned threads = 1);

/*!
 * CSV with a `# schema=1 ...` metadata line, a column header, then one row
 * per cell: omega1_keV, theta_rad, value, log10_value, mask_code.
 */
void write_grid_csv(std::ostream& out, const GridResult& grid);

} // namespace xpair
