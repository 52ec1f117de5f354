#include "xpair/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "xpair/scs.hpp"
#include "xpair/units.hpp"

namespace xpair {

namespace {

enum class Dim { energy, angle, solid_angle, time, length, intensity, density, molar_mass, rate, number, count, text };

struct KeySpec {
    const char* key;
    Dim dim;
    bool required;
};

// clang-format off
const std::map<std::string, std::vector<KeySpec>> schema{
    {"beam", {
        {"photon_energy", Dim::energy, true},
        {"gamma", Dim::number, false},
        {"alpha", Dim::angle, false},
        {"electrons_per_bunch", Dim::number, false},
        {"photons_per_bunch", Dim::number, false},
        {"electron_sigma_t", Dim::length, false},
        {"photon_sigma_t", Dim::length, false},
        {"electron_sigma_l", Dim::length, false},
        {"laser_intensity", Dim::intensity, false},
        {"pulse_duration", Dim::time, false},
    }},
    {"target", {
        {"material", Dim::text, false},
        {"atomic_number", Dim::number, true},
        {"molar_mass", Dim::molar_mass, true},
        {"density", Dim::density, true},
        {"thickness", Dim::length, true},
        {"flux", Dim::rate, true},
    }},
    {"detectors", {
        {"det1.theta", Dim::angle, true},
        {"det1.phi", Dim::angle, true},
        {"det1.solid_angle", Dim::solid_angle, true},
        {"det1.energy", Dim::energy, true},
        {"det1.bandwidth", Dim::number, false},
        {"det1.window", Dim::energy, false},
        {"det2.theta", Dim::angle, true},
        {"det2.phi", Dim::angle, true},
        {"det2.solid_angle", Dim::solid_angle, true},
        {"scan.omega1_min", Dim::energy, false},
        {"scan.omega1_max", Dim::energy, false},
        {"scan.steps", Dim::count, false},
        {"acceptance", Dim::text, false},
    }},
    {"grid", {
        {"quantity", Dim::text, true},
        {"geometry", Dim::text, true},
        {"omega1_min", Dim::energy, true},
        {"omega1_max", Dim::energy, true},
        {"omega1_steps", Dim::count, true},
        {"angle_min", Dim::angle, true},
        {"angle_max", Dim::angle, true},
        {"angle_steps", Dim::count, true},
        {"phi1", Dim::angle, false},
        {"phi2", Dim::angle, false},
        {"ir_cutoff", Dim::energy, false},
        {"log_floor", Dim::number, false},
        {"tolerance", Dim::number, false},
    }},
    {"sampler", {
        {"n_events", Dim::count, true},
        {"seed", Dim::count, false},
        {"ir_cutoff", Dim::energy, false},
        {"resolution", Dim::count, false},
        {"safety", Dim::number, false},
        {"window1.theta_min", Dim::angle, false},
        {"window1.theta_max", Dim::angle, false},
        {"window1.phi_min", Dim::angle, false},
        {"window1.phi_max", Dim::angle, false},
        {"window2.theta_min", Dim::angle, false},
        {"window2.theta_max", Dim::angle, false},
        {"window2.phi_min", Dim::angle, false},
        {"window2.phi_max", Dim::angle, false},
    }},
};
// clang-format on

const char* example_unit(Dim d)
{
    switch (d) {
    case Dim::energy: return "keV";
    case Dim::angle: return "rad";
    case Dim::solid_angle: return "sr";
    case Dim::time: return "fs";
    case Dim::length: return "um";
    case Dim::intensity: return "W/cm2";
    case Dim::density: return "g/cm3";
    case Dim::molar_mass: return "g/mol";
    case Dim::rate: return "/s";
    default: return "";
    }
}

// Scale to the internal unit of each dimension: keV, rad, sr, s, m, W/cm2, g/cm3, g/mol, 1/s.
std::optional<double> unit_scale(Dim d, const std::string& u)
{
    static const std::map<std::string, double> energy{{"eV", 1e-3}, {"keV", 1.0}, {"MeV", 1e3}};
    static const std::map<std::string, double> angle{{"rad", 1.0}, {"mrad", 1e-3}, {"urad", 1e-6},
                                                     {"deg", std::numbers::pi / 180.0}};
    static const std::map<std::string, double> solid{{"sr", 1.0}, {"msr", 1e-3}, {"usr", 1e-6}};
    static const std::map<std::string, double> time{{"s", 1.0}, {"ps", 1e-12}, {"fs", 1e-15}};
    static const std::map<std::string, double> length{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
    static const std::map<std::string, double> intensity{{"W/cm2", 1.0}};
    static const std::map<std::string, double> density{{"g/cm3", 1.0}};
    static const std::map<std::string, double> molar{{"g/mol", 1.0}};
    static const std::map<std::string, double> rate{{"/s", 1.0}, {"1/s", 1.0}, {"Hz", 1.0}};
    const std::map<std::string, double>* table = nullptr;
    switch (d) {
    case Dim::energy: table = &energy; break;
    case Dim::angle: table = &angle; break;
    case Dim::solid_angle: table = &solid; break;
    case Dim::time: table = &time; break;
    case Dim::length: table = &length; break;
    case Dim::intensity: table = &intensity; break;
    case Dim::density: table = &density; break;
    case Dim::molar_mass: table = &molar; break;
    case Dim::rate: table = &rate; break;
    default: return u.empty() ? std::optional<double>(1.0) : std::nullopt;
    }
    const auto it = table->find(u);
    if (it == table->end())
        return std::nullopt;
    return it->second;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Typed access to one section; unknown keys are rejected on construction.
class Section {
public:
    Section(const ScenarioTree& tree, const std::string& name) : name_(name)
    {
        const auto it = tree.find(name);
        if (it != tree.end())
            values_ = &it->second;
        const auto& specs = schema.at(name);
        if (values_) {
            for (const auto& [k, v] : *values_) {
                const auto s = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& ks) { return k == ks.key; });
                if (s == specs.end())
                    throw ValidationError("unknown key " + path(k));
            }
        }
    }

    bool present() const { return values_ != nullptr; }
    std::string path(const std::string& key) const { return name_ + "." + key; }

    //! Required keys of the schema that are absent, as full paths.
    std::vector<std::string> missing() const
    {
        std::vector<std::string> out;
        for (const auto& ks : schema.at(name_))
            if (ks.required && !has(ks.key))
                out.push_back(path(ks.key));
        return out;
    }

    void require_complete() const
    {
        const auto m = missing();
        if (m.empty())
            return;
        std::string msg = "missing required key";
        msg += m.size() > 1 ? "s: " : ": ";
        for (std::size_t i = 0; i < m.size(); ++i)
            msg += (i ? ", " : "") + m[i];
        throw ValidationError(msg);
    }

    bool has(const std::string& key) const { return values_ && values_->count(key); }

    std::string text(const std::string& key, const std::string& fallback = {}) const
    {
        return has(key) ? values_->at(key) : fallback;
    }

    Quantity quantity(const std::string& key) const
    {
        try {
            return parse_quantity(values_->at(key));
        } catch (const ValidationError& e) {
            throw ValidationError(path(key) + ": " + e.what());
        }
    }

    double number(const std::string& key, Dim d) const
    {
        const Quantity q = quantity(key);
        if (d != Dim::number && d != Dim::count && q.unit.empty())
            throw ValidationError(path(key) + ": unit suffix required (e.g. " + example_unit(d) + ")");
        const auto scale = unit_scale(d, q.unit);
        if (!scale)
            throw ValidationError(path(key) + ": unit '" + q.unit + "' not accepted here"
                                  + (d == Dim::number || d == Dim::count ? " (dimensionless value expected)" : ""));
        return q.value * *scale;
    }

    double get(const std::string& key, Dim d, double fallback) const { return has(key) ? number(key, d) : fallback; }

    long long count(const std::string& key, long long fallback) const
    {
        if (!has(key))
            return fallback;
        const double v = number(key, Dim::count);
        if (v < 0 || v != std::floor(v) || v > 9.2e18)
            throw ValidationError(path(key) + ": non-negative integer expected");
        return static_cast<long long>(v);
    }

    //! Angle in rad; "/gamma" values are gamma * theta and are divided by gamma.
    double angle(const std::string& key, double gamma, bool* scaled = nullptr) const
    {
        const Quantity q = quantity(key);
        if (scaled)
            *scaled = q.unit == "/gamma";
        if (q.unit == "/gamma")
            return q.value / gamma;
        return number(key, Dim::angle);
    }

private:
    std::string name_;
    const std::map<std::string, std::string>* values_ = nullptr;
};

template <typename Fn>
auto checked(const std::string& key, Fn&& fn)
{
    try {
        return fn();
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(key + ": " + e.what());
    }
}

} // namespace

std::uint64_t parse_seed(const std::string& text_in, const std::string& key)
{
    const std::string text = trim(text_in);
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ValidationError(key + ": unsigned 64-bit integer expected");
    return v;
}

Quantity parse_quantity(const std::string& text_in)
{
    const std::string text = trim(text_in);
    double v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || !std::isfinite(v))
        throw ValidationError("'" + text + "' is not a number with an optional unit");
    return {v, trim(std::string(res.ptr, last))};
}

ScenarioTree parse_scenario_text(const std::string& text)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(std::string("scenario syntax: ") + e.what());
    }
    ScenarioTree out;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ValidationError("key '" + section + "' outside of a section");
        if (!schema.count(section))
            throw ValidationError("unknown section [" + section + "]");
        auto& dst = out[section];
        for (const auto& [key, value] : body)
            dst[key] = trim(value.data());
    }
    return out;
}

ScenarioTree read_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read scenario file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

std::string serialize_scenario(const ScenarioTree& tree)
{
    std::string out;
    for (const auto& [section, keys] : tree) {
        out += "[" + section + "]\n";
        for (const auto& [k, v] : keys)
            out += k + " = " + v + "\n";
        out += "\n";
    }
    return out;
}

ElectronState<double> Scenario::electron() const { return ElectronState<double>::with_gamma(gamma); }

ScatterConfig<double> Scenario::scatter_config() const
{
    ScatterConfig<double> cfg;
    cfg.omega = kev_to_natural(photon_energy_keV).value;
    cfg.alpha = alpha;
    cfg.electron = electron();
    if (det1) {
        cfg.theta1p = det1->config.theta;
        cfg.phi1p = det1->config.phi;
    }
    if (det2) {
        cfg.theta2p = det2->config.theta;
        cfg.phi2p = det2->config.phi;
    }
    return cfg;
}

GridPhysics Scenario::grid_physics() const
{
    GridPhysics p;
    p.base = scatter_config();
    if (collider) {
        p.luminosity_per_electron_per_barn = luminosity_per_electron(*collider).per_barn();
        p.tau_natural = SingleComptonConfig<double>::natural_time(collider->pulse_duration_s);
    }
    p.photon2.cubature.rel_tol = grid_tolerance;
    p.photon2.cubature.throw_on_failure = true;
    if (grid)
        p.photon2.ir_cutoff = grid->ir_cutoff_keV / constants.mc2_keV;
    return p;
}

double symmetric_energy_keV(const ScatterConfig<double>& cfg)
{
    const double w1max = omega1_max(cfg);
    auto g = [&](double w1) { return w1 - omega2(cfg, w1); };
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(g, 0.0, w1max, boost::math::tools::eps_tolerance<double>(50), iters);
    return natural_to_kev((r.first + r.second) / 2);
}

Scenario build_scenario(const ScenarioTree& tree, std::string name)
{
    Scenario s;
    s.name = std::move(name);

    const Section beam(tree, "beam");
    if (!beam.present())
        throw ValidationError("missing section [beam]; required keys: beam.photon_energy");
    beam.require_complete();
    s.photon_energy_keV = beam.number("photon_energy", Dim::energy);
    if (!(s.photon_energy_keV > 0))
        throw ValidationError("beam.photon_energy: must be positive");
    s.gamma = beam.get("gamma", Dim::number, 1.0);
    if (!(s.gamma >= 1.0))
        throw ValidationError("beam.gamma: must be >= 1");
    s.alpha = beam.has("alpha") ? beam.angle("alpha", s.gamma) : 0.0;
    if (!(s.alpha >= 0 && s.alpha <= std::numbers::pi * (1 + 1e-12)))
        throw ValidationError("beam.alpha: must lie in [0, pi]");
    s.alpha = std::min(s.alpha, std::numbers::pi);
    if (beam.has("laser_intensity")) {
        for (const char* k : {"electrons_per_bunch", "pulse_duration"})
            if (!beam.has(k))
                throw ValidationError(std::string("missing required key: beam.") + k + " (needed with beam.laser_intensity)");
        BeamParams b;
        b.electrons_per_bunch = beam.number("electrons_per_bunch", Dim::number);
        b.photons_per_bunch = beam.get("photons_per_bunch", Dim::number, 0.0);
        b.electron_transverse_rms_m = beam.get("electron_sigma_t", Dim::length, 0.0);
        b.photon_transverse_rms_m = beam.get("photon_sigma_t", Dim::length, 0.0);
        b.electron_bunch_length_rms_m = beam.get("electron_sigma_l", Dim::length, 0.0);
        b.laser_photon_energy_eV = s.photon_energy_keV * 1e3;
        b.laser_intensity_W_per_cm2 = beam.number("laser_intensity", Dim::intensity);
        b.pulse_duration_s = beam.number("pulse_duration", Dim::time);
        if (!(b.electrons_per_bunch > 0) || !(b.laser_intensity_W_per_cm2 > 0) || !(b.pulse_duration_s > 0))
            throw ValidationError("beam: electrons_per_bunch, laser_intensity and pulse_duration must be positive");
        s.collider = b;
    }

    const Section target(tree, "target");
    if (target.present()) {
        target.require_complete();
        s.target = checked("target", [&] {
            return TargetConfig::from_material(target.text("material", "unnamed"),
                                               target.number("atomic_number", Dim::number),
                                               target.number("molar_mass", Dim::molar_mass),
                                               target.number("density", Dim::density),
                                               target.number("thickness", Dim::length), target.number("flux", Dim::rate));
        });
    }

    const Section det(tree, "detectors");
    if (det.present()) {
        det.require_complete();
        auto read = [&](const std::string& p) {
            DetectorSetup d;
            d.config.theta = det.angle(p + ".theta", s.gamma);
            d.config.phi = det.angle(p + ".phi", s.gamma);
            d.config.solid_angle = det.number(p + ".solid_angle", Dim::solid_angle);
            return d;
        };
        DetectorSetup d1 = read("det1");
        DetectorSetup d2 = read("det2");
        for (const auto* d : {&d1, &d2})
            if (!(d->config.theta >= 0 && d->config.theta <= std::numbers::pi))
                throw ValidationError("detectors: detector polar angles must lie in [0, pi]");
        if (det.text("det1.energy") == "symmetric") {
            d1.symmetric_energy = true;
        } else {
            d1.config.center_energy_keV = det.number("det1.energy", Dim::energy);
        }
        if (det.has("det1.bandwidth") == det.has("det1.window"))
            throw ValidationError("detectors: give exactly one of detectors.det1.bandwidth, detectors.det1.window");
        if (det.has("det1.window"))
            d1.window_keV = det.number("det1.window", Dim::energy);
        else
            d1.config.fractional_bandwidth = det.number("det1.bandwidth", Dim::number);
        s.det1 = d1;
        s.det2 = d2;
        if (d1.symmetric_energy) {
            s.det1->config.center_energy_keV = checked("detectors.det1.energy", [&] {
                return symmetric_energy_keV(s.scatter_config());
            });
        }
        if (d1.window_keV) {
            if (!(*d1.window_keV > 0 && *d1.window_keV < s.det1->config.center_energy_keV))
                throw ValidationError("detectors.det1.window: must be positive and below the centre energy");
            s.det1->config.fractional_bandwidth = *d1.window_keV / s.det1->config.center_energy_keV;
        }
        checked("detectors.det1", [&] { s.det1->config.validate(); return 0; });
        checked("detectors.det2", [&] { s.det2->config.validate(); return 0; });

        const int scan_keys = det.has("scan.omega1_min") + det.has("scan.omega1_max") + det.has("scan.steps");
        if (scan_keys != 0 && scan_keys != 3)
            throw ValidationError("detectors: scan needs detectors.scan.omega1_min, detectors.scan.omega1_max and "
                                  "detectors.scan.steps together");
        if (scan_keys == 3) {
            s.scan_keV = Interval{det.number("scan.omega1_min", Dim::energy), det.number("scan.omega1_max", Dim::energy)};
            s.scan_steps = static_cast<int>(det.count("scan.steps", 0));
            if (s.scan_steps < 1 || !(s.scan_keV->lo > 0) || s.scan_keV->hi < s.scan_keV->lo)
                throw ValidationError("detectors.scan: need 0 < omega1_min <= omega1_max and steps >= 1");
        }
        const std::string acc = det.text("acceptance", "midpoint");
        if (acc == "midpoint")
            s.acceptance = AcceptanceMode::midpoint;
        else if (acc == "quadrature")
            s.acceptance = AcceptanceMode::quadrature;
        else if (acc == "automatic")
            s.acceptance = AcceptanceMode::automatic;
        else
            throw ValidationError("detectors.acceptance: expected midpoint, quadrature or automatic");
    }

    const Section grid(tree, "grid");
    if (grid.present()) {
        grid.require_complete();
        GridSpec g;
        const std::string q = grid.text("quantity");
        if (q == "triple_xsec")
            g.quantity = GridQuantity::triple_xsec;
        else if (q == "pair_yield")
            g.quantity = GridQuantity::pair_yield;
        else if (q == "single_compton")
            g.quantity = GridQuantity::single_compton;
        else if (q == "photon2_integrated")
            g.quantity = GridQuantity::photon2_integrated;
        else
            throw ValidationError("grid.quantity: expected triple_xsec, pair_yield, single_compton or photon2_integrated");
        const std::string geo = grid.text("geometry");
        if (geo == "one_mode")
            g.geometry = GeometryMode::one_mode;
        else if (geo == "two_mode")
            g.geometry = GeometryMode::two_mode;
        else if (geo == "custom")
            g.geometry = GeometryMode::custom;
        else
            throw ValidationError("grid.geometry: expected one_mode, two_mode or custom");
        if (g.geometry == GeometryMode::custom) {
            if (!grid.has("phi1") || !grid.has("phi2"))
                throw ValidationError("missing required keys for custom geometry: grid.phi1, grid.phi2");
            g.phi1 = grid.angle("phi1", s.gamma);
            g.phi2 = grid.angle("phi2", s.gamma);
        }
        g.omega1_keV = {grid.number("omega1_min", Dim::energy), grid.number("omega1_max", Dim::energy)};
        g.omega1_steps = static_cast<int>(grid.count("omega1_steps", 0));
        bool lo_scaled = false, hi_scaled = false;
        const double a_lo = grid.angle("angle_min", s.gamma, &lo_scaled);
        const double a_hi = grid.angle("angle_max", s.gamma, &hi_scaled);
        if (lo_scaled != hi_scaled)
            throw ValidationError("grid.angle_min/grid.angle_max: both or neither must be given in /gamma");
        g.angle_axis = lo_scaled ? AngleAxis::gamma_theta : AngleAxis::theta;
        g.angle = lo_scaled ? Interval{a_lo * s.gamma, a_hi * s.gamma} : Interval{a_lo, a_hi};
        g.angle_steps = static_cast<int>(grid.count("angle_steps", 0));
        g.ir_cutoff_keV = grid.get("ir_cutoff", Dim::energy, 0.1);
        g.log_floor = grid.get("log_floor", Dim::number, 1e-30);
        s.grid_tolerance = grid.get("tolerance", Dim::number, 1e-4);
        if (!(s.grid_tolerance > 0 && s.grid_tolerance < 1))
            throw ValidationError("grid.tolerance: must lie in (0, 1)");
        if (g.quantity == GridQuantity::pair_yield && !s.collider)
            throw ValidationError("grid.quantity = pair_yield needs beam.laser_intensity and beam.pulse_duration");
        if (g.quantity == GridQuantity::single_compton && !s.collider)
            throw ValidationError("grid.quantity = single_compton needs beam.pulse_duration");
        checked("grid", [&] { g.validate(); return 0; });
        s.grid = g;
    }

    const Section smp(tree, "sampler");
    if (smp.present()) {
        smp.require_complete();
        SamplerConfig c;
        c.scenario = s.scatter_config();
        c.n_events = static_cast<std::size_t>(smp.count("n_events", 1));
        c.seed = smp.has("seed") ? parse_seed(smp.text("seed"), "sampler.seed") : 0;
        c.ir_cutoff_keV = smp.get("ir_cutoff", Dim::energy, 0.1);
        const int res = static_cast<int>(smp.count("resolution", 12));
        c.envelope_resolution = {res, res, res, res, res};
        c.envelope_safety = smp.get("safety", Dim::number, 1.2);
        auto window = [&](const std::string& p, AngularWindow w) {
            if (smp.has(p + ".theta_min"))
                w.theta.lo = smp.angle(p + ".theta_min", s.gamma);
            if (smp.has(p + ".theta_max"))
                w.theta.hi = smp.angle(p + ".theta_max", s.gamma);
            if (smp.has(p + ".phi_min"))
                w.phi.lo = smp.angle(p + ".phi_min", s.gamma);
            if (smp.has(p + ".phi_max"))
                w.phi.hi = smp.angle(p + ".phi_max", s.gamma);
            return w;
        };
        c.window1 = window("window1", {});
        c.window2 = window("window2", {});
        if (c.n_events > 0) {
            checked("sampler", [&] { c.validate(); return 0; });
        } else {
            SamplerConfig probe = c;
            probe.n_events = 1;
            checked("sampler", [&] { probe.validate(); return 0; });
        }
        s.sampler = c;
    }
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::string name = path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (const auto dot = name.find_last_of('.'); dot != std::string::npos)
        name = name.substr(0, dot);
    return build_scenario(read_scenario_file(path), name);
}

} // namespace xpair
