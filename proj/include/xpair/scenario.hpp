#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "xpair/detector.hpp"
#include "xpair/grid.hpp"
#include "xpair/rates.hpp"
#include "xpair/sampler.hpp"

namespace xpair {

//! Raw scenario document: section -> key -> value text.
using ScenarioTree = std::map<std::string, std::map<std::string, std::string>>;

ScenarioTree parse_scenario_text(const std::string& text);
ScenarioTree read_scenario_file(const std::string& path);
std::string serialize_scenario(const ScenarioTree& tree);

//! A number with its unit suffix, e.g. "100 keV" -> {100, "keV"}.
struct Quantity {
    double value = 0;
    std::string unit;
};

Quantity parse_quantity(const std::string& text);

//! Unsigned 64-bit integer; `key` names the value in error messages.
std::uint64_t parse_seed(const std::string& text, const std::string& key = "seed");

struct DetectorSetup {
    DetectorConfig config;
    bool symmetric_energy = false;  //!< energy chosen where omega1 = omega2
    std::optional<double> window_keV;  //!< absolute window replacing the fractional bandwidth
};

struct Scenario {
    std::string name;

    // [beam]
    double photon_energy_keV = 0;
    double gamma = 1;
    double alpha = 0;
    std::optional<BeamParams> collider;  //!< present when bunch and laser parameters are given

    // [target]
    std::optional<TargetConfig> target;

    // [detectors]
    std::optional<DetectorSetup> det1, det2;
    std::optional<Interval> scan_keV;
    int scan_steps = 0;
    AcceptanceMode acceptance = AcceptanceMode::midpoint;

    // [grid]
    std::optional<GridSpec> grid;
    double grid_tolerance = 1e-4;

    // [sampler]
    std::optional<SamplerConfig> sampler;

    bool fixed_target() const { return gamma == 1.0; }
    ElectronState<double> electron() const;
    //! Incident photon and electron with the photon angles of the detectors (or zero).
    ScatterConfig<double> scatter_config() const;
    GridPhysics grid_physics() const;
};

//! Typed scenario; throws ValidationError naming the offending key path.
Scenario build_scenario(const ScenarioTree& tree, std::string name = {});

Scenario load_scenario(const std::string& path);

//! Energy where omega1 = omega2 for the given photon directions, keV.
double symmetric_energy_keV(const ScatterConfig<double>& cfg);

} // namespace xpair
