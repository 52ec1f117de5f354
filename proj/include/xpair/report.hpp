#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "xpair/scenario.hpp"

namespace xpair {

struct ReportOptions {
    bool include_rates = true;
    std::optional<std::uint64_t> seed;
    double tolerance = 1e-4;
};

/*!
 * Machine-readable summary of a scenario: the input echo, derived
 * quantities (each with value, unit and producing operation), rate outputs
 * and provenance.
 */
nlohmann::ordered_json build_report(const Scenario& s, const ScenarioTree& inputs, const ReportOptions& opts = {});

//! One rate-curve point; rates in pairs/s (fixed target) or pairs/pulse (collider).
struct RatePoint {
    double omega1_keV = 0;
    double omega2_keV = 0;
    double xsec_barn_per_keV_sr2 = 0;
    double rate = 0;
    double rate_quoted_luminosity = 0;  //!< collider only
};

//! Rate at each scan energy (or at the detector-1 energy when no scan is given).
std::vector<RatePoint> rate_curve(const Scenario& s);

const char* version_string();

} // namespace xpair
