#include "xpair/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "xpair/units.hpp"

namespace xpair {

namespace {

constexpr std::array<double, 8> kronrod_x{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kronrod_w{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_x[1], [3], [5], [7].
constexpr std::array<double, 4> gauss_w{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule15 {
    std::array<double, 15> x{};
    std::array<double, 15> wk{};
    std::array<double, 15> wg{};
};

Rule15 make_rule15()
{
    Rule15 r;
    int n = 0;
    for (int j = 0; j < 7; ++j) {
        const double g = (j % 2 == 1) ? gauss_w[j / 2] : 0.0;
        r.x[n] = -kronrod_x[j];
        r.wk[n] = kronrod_w[j];
        r.wg[n] = g;
        ++n;
        r.x[n] = kronrod_x[j];
        r.wk[n] = kronrod_w[j];
        r.wg[n] = g;
        ++n;
    }
    r.x[14] = 0.0;
    r.wk[14] = kronrod_w[7];
    r.wg[14] = gauss_w[3];
    return r;
}

const Rule15& rule15()
{
    static const Rule15 r = make_rule15();
    return r;
}

struct Region1 {
    Interval x;
    double value;
    double error;
    bool operator<(const Region1& o) const { return error < o.error; }
};

Region1 evaluate_region(const std::function<double(double)>& f, Interval x)
{
    const auto& r = rule15();
    const double c = 0.5 * (x.lo + x.hi);
    const double h = 0.5 * (x.hi - x.lo);
    double ik = 0, ig = 0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * r.x[i]);
        ik += r.wk[i] * v;
        ig += r.wg[i] * v;
    }
    return {x, ik * h, std::abs(ik - ig) * h};
}

struct Region2 {
    Interval x;
    Interval y;
    double value;
    double error;
    int split_axis;
    bool operator<(const Region2& o) const { return error < o.error; }
};

Region2 evaluate_region(const std::function<double(double, double)>& f, Interval x, Interval y)
{
    const auto& r = rule15();
    const double cx = 0.5 * (x.lo + x.hi), hx = 0.5 * (x.hi - x.lo);
    const double cy = 0.5 * (y.lo + y.hi), hy = 0.5 * (y.hi - y.lo);
    double kk = 0, gk = 0, kg = 0;
    for (int i = 0; i < 15; ++i) {
        const double xi = cx + hx * r.x[i];
        double row_k = 0, row_g = 0;
        for (int j = 0; j < 15; ++j) {
            const double v = f(xi, cy + hy * r.x[j]);
            row_k += r.wk[j] * v;
            row_g += r.wg[j] * v;
        }
        kk += r.wk[i] * row_k;
        gk += r.wg[i] * row_k;
        kg += r.wk[i] * row_g;
    }
    const double area = hx * hy;
    const double ex = std::abs(kk - gk) * area;
    const double ey = std::abs(kk - kg) * area;
    return {x, y, kk * area, ex + ey, ex >= ey ? 0 : 1};
}

template <typename Region>
void sum_regions(const std::vector<Region>& regions, double& value, double& error)
{
    detail::CompensatedSum<double> v, e;
    for (const auto& r : regions) {
        v += r.value;
        e += r.error;
    }
    value = v.value();
    error = e.value();
}

template <typename Region, typename Split>
CubatureResult run_adaptive(Region first, std::size_t evals_per_region, const CubatureOptions& opts, Split split)
{
    std::priority_queue<Region> queue;
    queue.push(first);
    double total = first.value;
    double error = first.error;
    std::size_t evaluations = evals_per_region;
    auto done = [&] { return error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (!done() && queue.size() < opts.max_regions) {
        const Region worst = queue.top();
        queue.pop();
        const auto [a, b] = split(worst);
        evaluations += 2 * evals_per_region;
        total += a.value + b.value - worst.value;
        error += a.error + b.error - worst.error;
        queue.push(a);
        queue.push(b);
    }
    std::vector<Region> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    CubatureResult res;
    sum_regions(all, res.value, res.error);
    res.evaluations = evaluations;
    res.regions = all.size();
    res.converged = res.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(res.value));
    if (!res.converged && opts.throw_on_failure)
        throw IntegrationError("adaptive integration did not converge after " + std::to_string(res.regions)
                                   + " regions",
                               res.value, res.error);
    return res;
}

} // namespace

GaussRule gauss_legendre(int n)
{
    if (n < 1)
        throw PreconditionError("gauss_legendre: need at least one node");
    GaussRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1, p2 = 0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        // recompute the derivative at the converged node
        double p1 = 1, p2 = 0;
        for (int j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        dp = n * (z * p1 - p2) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes(i) = -z;
        rule.nodes(n - 1 - i) = z;
        rule.weights(i) = w;
        rule.weights(n - 1 - i) = w;
    }
    return rule;
}

GaussRule gauss_legendre(int n, double a, double b)
{
    GaussRule r = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    r.nodes = (c + h * r.nodes.array()).matrix();
    r.weights *= h;
    return r;
}

CubatureResult integrate_adaptive(const std::function<double(double)>& f, Interval range, const CubatureOptions& opts)
{
    return run_adaptive(evaluate_region(f, range), 15, opts, [&](const Region1& r) {
        const double mid = 0.5 * (r.x.lo + r.x.hi);
        return std::pair{evaluate_region(f, {r.x.lo, mid}), evaluate_region(f, {mid, r.x.hi})};
    });
}

CubatureResult integrate_adaptive_2d(const std::function<double(double, double)>& f, Interval x, Interval y,
                                     const CubatureOptions& opts)
{
    return run_adaptive(evaluate_region(f, x, y), 225, opts, [&](const Region2& r) {
        if (r.split_axis == 0) {
            const double mid = 0.5 * (r.x.lo + r.x.hi);
            return std::pair{evaluate_region(f, {r.x.lo, mid}, r.y), evaluate_region(f, {mid, r.x.hi}, r.y)};
        }
        const double mid = 0.5 * (r.y.lo + r.y.hi);
        return std::pair{evaluate_region(f, r.x, {r.y.lo, mid}), evaluate_region(f, r.x, {mid, r.y.hi})};
    });
}

PolarMap::PolarMap(const ElectronState<double>& electron, double theta_min, double theta_max)
    : beta_(electron.beta()), one_minus_beta_(electron.one_minus_beta()), log_(beta_ >= 0.5)
{
    if (!(theta_min >= 0 && theta_max <= std::numbers::pi && theta_min <= theta_max))
        throw PreconditionError("PolarMap: need 0 <= theta_min <= theta_max <= pi");
    lo_ = variable(theta_min);
    hi_ = variable(theta_max);
}

double PolarMap::variable(double theta) const
{
    const double s = std::sin(theta / 2);
    const double one_minus_cos = 2 * s * s;
    if (log_)
        return std::log(one_minus_beta_ + beta_ * one_minus_cos);
    return one_minus_cos;
}

PolarMap::Point PolarMap::at(double v) const
{
    double one_minus_cos;
    double jac;
    if (log_) {
        const double d = std::exp(v);
        one_minus_cos = (d - one_minus_beta_) / beta_;
        jac = d / beta_;
    } else {
        one_minus_cos = v;
        jac = 1.0;
    }
    one_minus_cos = std::clamp(one_minus_cos, 0.0, 2.0);
    return {2.0 * std::asin(std::sqrt(one_minus_cos / 2.0)), jac};
}

IntegratedXsec integrate_photon2(const ScatterConfig<double>& cfg_in, double omega1, const Photon2Options& opts)
{
    cfg_in.validate();
    if (!(omega1 > 0))
        throw PreconditionError("integrate_photon2: omega1 must be positive");
    if (!(omega1 < omega1_max(cfg_in)))
        throw KinematicsError(KinematicsErrc::above_phase_space, "integrate_photon2: omega1 >= omega1_max");

    const PolarMap map(cfg_in.electron, 0.0, std::numbers::pi);
    ScatterConfig<double> cfg = cfg_in;
    const XsecOptions xopts{opts.ir_cutoff};
    auto integrand = [&](double v, double phi) {
        const auto pt = map.at(v);
        cfg.theta2p = pt.theta;
        cfg.phi2p = phi;
        try {
            return evaluate_triple(cfg, omega1, xopts).natural * pt.jacobian;
        } catch (const SingularityError&) {
            return 0.0;
        } catch (const KinematicsError&) {
            return 0.0;
        }
    };
    const CubatureResult r =
        integrate_adaptive_2d(integrand, {map.lo(), map.hi()}, {0.0, 2.0 * std::numbers::pi}, opts.cubature);
    const double scale = constants.r0_squared_barn() / constants.mc2_keV;
    return {{r.value * scale, XsecUnit::barn_per_keV_sr}, r.error * scale, r.evaluations};
}

Vector3<double> cone_direction(const DetectorConfig& det, double one_minus_cos_rho, double chi)
{
    const double u = std::clamp(one_minus_cos_rho, 0.0, 2.0);
    const double sin_rho = std::sqrt(u * (2.0 - u));
    const Vector3<double> local(sin_rho * std::cos(chi), sin_rho * std::sin(chi), 1.0 - u);
    return rotation_from_z<double>(det.axis()) * local;
}

std::array<double, 2> polar_angles(const Vector3<double>& dir)
{
    const double theta = std::atan2(std::hypot(dir.x(), dir.y()), dir.z());
    double phi = std::atan2(dir.y(), dir.x());
    if (phi < 0)
        phi += 2.0 * std::numbers::pi;
    return {theta, phi};
}

AcceptanceResult detector_rate_integral(const XsecCallable& xsec, const DetectorConfig& det1,
                                        const DetectorConfig& det2, const AcceptanceOptions& opts)
{
    det1.validate();
    det2.validate();
    if (!det1.fractional_bandwidth)
        throw PreconditionError("detector_rate_integral: detector 1 needs an energy bandwidth");
    const double d_omega = det1.energy_window_keV();
    if (det1.solid_angle == 0.0 || det2.solid_angle == 0.0 || d_omega == 0.0)
        return {};

    const double e0 = det1.center_energy_keV;
    double centre;
    try {
        centre = xsec(e0, det1.theta, det1.phi, det2.theta, det2.phi);
    } catch (const KinematicsError& e) {
        throw KinematicsError(e.code(), std::string("acceptance window centre outside phase space: ") + e.what());
    }
    const double midpoint = centre * det1.solid_angle * det2.solid_angle * d_omega;

    AcceptanceResult out;
    out.barn = midpoint;
    if (opts.mode == AcceptanceMode::midpoint)
        return out;

    // value at a direction on a detector rim, or at an energy edge
    auto probe = [&](double e, const Vector3<double>& n1, const Vector3<double>& n2) {
        const auto a1 = polar_angles(n1);
        const auto a2 = polar_angles(n2);
        try {
            return xsec(e, a1[0], a1[1], a2[0], a2[1]);
        } catch (const Error&) {
            return 0.0;
        }
    };

    if (opts.mode == AcceptanceMode::automatic) {
        const Vector3<double> c1 = det1.axis(), c2 = det2.axis();
        const double u1 = det1.solid_angle / (2.0 * std::numbers::pi);
        const double u2 = det2.solid_angle / (2.0 * std::numbers::pi);
        double spread = 0;
        auto account = [&](double v) { spread = std::max(spread, std::abs(v / centre - 1.0)); };
        account(probe(e0 - d_omega / 2, c1, c2));
        account(probe(e0 + d_omega / 2, c1, c2));
        for (int q = 0; q < 4; ++q) {
            const double chi = q * std::numbers::pi / 2;
            account(probe(e0, cone_direction(det1, u1, chi), c2));
            account(probe(e0, c1, cone_direction(det2, u2, chi)));
        }
        out.spread = spread;
        if (spread <= opts.flatness_threshold)
            return out;
    }

    const int n = opts.points_per_axis;
    const GaussRule re = gauss_legendre(n, e0 - d_omega / 2, e0 + d_omega / 2);
    const GaussRule ru1 = gauss_legendre(n, 0.0, det1.solid_angle / (2.0 * std::numbers::pi));
    const GaussRule ru2 = gauss_legendre(n, 0.0, det2.solid_angle / (2.0 * std::numbers::pi));
    const GaussRule rchi = gauss_legendre(n, 0.0, 2.0 * std::numbers::pi);
    std::vector<Vector3<double>> dirs1, dirs2;
    std::vector<double> w1, w2;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            dirs1.push_back(cone_direction(det1, ru1.nodes(a), rchi.nodes(b)));
            dirs2.push_back(cone_direction(det2, ru2.nodes(a), rchi.nodes(b)));
            w1.push_back(ru1.weights(a) * rchi.weights(b));
            w2.push_back(ru2.weights(a) * rchi.weights(b));
        }
    detail::CompensatedSum<double> sum;
    for (int ie = 0; ie < n; ++ie)
        for (std::size_t i = 0; i < dirs1.size(); ++i)
            for (std::size_t j = 0; j < dirs2.size(); ++j)
                sum += re.weights(ie) * w1[i] * w2[j] * probe(re.nodes(ie), dirs1[i], dirs2[j]);
    out.barn = sum.value();
    out.used_quadrature = true;
    return out;
}

} // namespace xpair
