#include "xpair/grid.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "xpair/parallel.hpp"
#include "xpair/scs.hpp"
#include "xpair/units.hpp"

namespace xpair {

const char* to_string(GridQuantity q)
{
    switch (q) {
    case GridQuantity::triple_xsec: return "triple_xsec";
    case GridQuantity::pair_yield: return "pair_yield";
    case GridQuantity::single_compton: return "single_compton";
    case GridQuantity::photon2_integrated: return "photon2_integrated";
    }
    return "unknown";
}

const char* to_string(GeometryMode g)
{
    switch (g) {
    case GeometryMode::one_mode: return "one_mode";
    case GeometryMode::two_mode: return "two_mode";
    case GeometryMode::custom: return "custom";
    }
    return "unknown";
}

const char* to_string(AngleAxis a)
{
    return a == AngleAxis::theta ? "theta" : "gamma_theta";
}

const char* unit_of(GridQuantity q)
{
    switch (q) {
    case GridQuantity::triple_xsec: return "b/(keV sr^2)";
    case GridQuantity::pair_yield: return "pairs/(keV sr^2 electron)";
    case GridQuantity::single_compton: return "b/(keV sr)";
    case GridQuantity::photon2_integrated: return "b/(keV sr)";
    }
    return "";
}

void GridSpec::validate() const
{
    auto check_axis = [](Interval r, int steps, const char* name) {
        if (steps < 1 || (steps == 1 && r.lo != r.hi) || (steps > 1 && !(r.hi > r.lo)))
            throw ValidationError(std::string("grid: ") + name
                                  + " needs steps >= 2 over an increasing range (or 1 step on a point)");
    };
    check_axis(omega1_keV, omega1_steps, "omega1");
    check_axis(angle, angle_steps, "angle");
    if (!(omega1_keV.lo > 0.0))
        throw ValidationError("grid: omega1 range must be positive");
    if (!(angle.lo >= 0.0))
        throw ValidationError("grid: angle range must be non-negative");
    if (!(ir_cutoff_keV >= 0.0))
        throw ValidationError("grid: ir_cutoff must be non-negative");
    if (!(log_floor > 0.0))
        throw ValidationError("grid: log floor must be positive");
}

double GridSpec::azimuth1() const
{
    return geometry == GeometryMode::custom ? phi1 : 0.0;
}

double GridSpec::azimuth2() const
{
    switch (geometry) {
    case GeometryMode::one_mode: return std::numbers::pi;
    case GeometryMode::two_mode: return 0.0;
    case GeometryMode::custom: return phi2;
    }
    return 0.0;
}

Eigen::Index GridResult::count(MaskCode code) const
{
    return (mask.array() == static_cast<std::uint8_t>(code)).count();
}

namespace {

Eigen::VectorXd axis_values(Interval r, int steps)
{
    if (steps == 1)
        return Eigen::VectorXd::Constant(1, r.lo);
    return Eigen::VectorXd::LinSpaced(steps, r.lo, r.hi);
}

CellValue finish(double value, const GridSpec& spec)
{
    return {value, value < spec.log_floor ? MaskCode::below_floor : MaskCode::ok};
}

} // namespace

CellValue evaluate_cell(const GridSpec& spec, const GridPhysics& phys, double omega1_keV, double theta)
{
    const double omega1 = omega1_keV / constants.mc2_keV;

    if (spec.quantity == GridQuantity::single_compton) {
        SingleComptonConfig<double> scs{phys.base.electron, phys.base.omega, phys.base.alpha, theta, phys.tau_natural};
        scs.validate();
        return finish(single_double_diff(omega1, scs).value, spec);
    }

    ScatterConfig<double> cfg = phys.base;
    cfg.theta1p = theta;
    cfg.theta2p = theta;
    cfg.phi1p = spec.azimuth1();
    cfg.phi2p = spec.azimuth2();
    const auto ang = emission_angles(cfg);
    if (spec.quantity != GridQuantity::photon2_integrated && ang.one_minus_cos1 == 0.0 && ang.one_minus_cos2 == 0.0)
        return {0.0, MaskCode::degenerate};
    const double w1max = omega1_max(cfg, ang);
    const double cut = spec.ir_cutoff_keV / constants.mc2_keV;
    if (omega1 > w1max)
        return {0.0, MaskCode::forbidden};
    if (omega1 < cut || omega1 > w1max - cut || omega1 >= w1max)
        return {0.0, MaskCode::ir_cutoff};

    try {
        switch (spec.quantity) {
        case GridQuantity::triple_xsec:
            return finish(triple_diff_xsec(cfg, omega1).value, spec);
        case GridQuantity::pair_yield:
            return finish(triple_diff_xsec(cfg, omega1).value * phys.luminosity_per_electron_per_barn, spec);
        case GridQuantity::photon2_integrated:
            return finish(integrate_photon2(cfg, omega1, phys.photon2).value.value, spec);
        case GridQuantity::single_compton:
            break;
        }
    } catch (const IntegrationError& e) {
        return {e.best_estimate() * constants.r0_squared_barn() / constants.mc2_keV, MaskCode::integration_failure};
    } catch (const SingularityError&) {
        return {0.0, MaskCode::ir_cutoff};
    } catch (const KinematicsError& e) {
        return {0.0, e.code() == KinematicsErrc::above_phase_space ? MaskCode::forbidden : MaskCode::degenerate};
    }
    return {0.0, MaskCode::degenerate};
}

GridResult compute_grid(const GridSpec& spec, const GridPhysics& phys, unsigned threads)
{
    spec.validate();
    phys.base.validate();
    GridResult g;
    g.spec = spec;
    g.gamma = phys.base.electron.gamma;
    g.omega1_keV = axis_values(spec.omega1_keV, spec.omega1_steps);
    g.angle = axis_values(spec.angle, spec.angle_steps);
    g.theta_rad = spec.angle_axis == AngleAxis::gamma_theta ? Eigen::VectorXd(g.angle / g.gamma) : g.angle;
    if (g.theta_rad.maxCoeff() > std::numbers::pi)
        throw ValidationError("grid: angle range exceeds pi");

    const Eigen::Index rows = g.omega1_keV.size(), cols = g.angle.size();
    g.values.resize(rows, cols);
    g.mask.resize(rows, cols);
    parallel_for(static_cast<std::size_t>(rows * cols), threads, [&](std::size_t idx) {
        const Eigen::Index i = static_cast<Eigen::Index>(idx) / cols;
        const Eigen::Index j = static_cast<Eigen::Index>(idx) % cols;
        const CellValue c = evaluate_cell(spec, phys, g.omega1_keV(i), g.theta_rad(j));
        g.values(i, j) = c.value;
        g.mask(i, j) = static_cast<std::uint8_t>(c.mask);
    });
    g.log10_values = g.values.array().max(spec.log_floor).log10().matrix();
    return g;
}

void write_grid_csv(std::ostream& out, const GridResult& g)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "# schema=1 quantity=%s unit=%s geometry=%s angle_axis=%s gamma=%.17g log_floor=%.6g\n",
                  to_string(g.spec.quantity), unit_of(g.spec.quantity), to_string(g.spec.geometry),
                  to_string(g.spec.angle_axis), g.gamma, g.spec.log_floor);
    out << buf;
    out << "omega1_keV,theta_rad,value,log10_value,mask_code\n";
    for (Eigen::Index i = 0; i < g.values.rows(); ++i)
        for (Eigen::Index j = 0; j < g.values.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10e,%.6f,%u\n", g.omega1_keV(i), g.theta_rad(j),
                          g.values(i, j), g.log10_values(i, j), static_cast<unsigned>(g.mask(i, j)));
            out << buf;
        }
}

} // namespace xpair
