#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "xpair/detector.hpp"
#include "xpair/errors.hpp"
#include "xpair/four_vector.hpp"
#include "xpair/kinematics.hpp"
#include "xpair/quadrature.hpp"

namespace xpair {

//! Range of primed emission angles allowed for one photon.
struct AngularWindow {
    Interval theta{0.0, std::numbers::pi};
    Interval phi{0.0, 2.0 * std::numbers::pi};

    static AngularWindow full_sphere() { return {}; }
    //! Window of half-widths (dtheta, dphi) about a direction.
    static AngularWindow around(double theta, double phi, double dtheta, double dphi);
};

struct SamplerConfig {
    //! Incident photon, alpha and electron; the photon angles are ignored.
    ScatterConfig<double> scenario{};
    double ir_cutoff_keV = 0.1;  //!< both photons carry at least this energy
    std::size_t n_events = 1;
    std::uint64_t seed = 0;
    //! Envelope cells along (t, v1, phi1, v2, phi2).
    std::array<int, 5> envelope_resolution{12, 12, 12, 12, 12};
    double envelope_safety = 1.2;
    AngularWindow window1{};
    AngularWindow window2{};
    unsigned threads = 0;  //!< 0 picks default_thread_count()

    void validate() const;
};

struct PairEvent {
    double omega1_keV = 0;
    double omega2_keV = 0;
    double theta1 = 0, phi1 = 0, theta2 = 0, phi2 = 0;  //!< primed angles
    Vector3<double> dir1 = Vector3<double>::Zero();     //!< in the frame of the electron axis
    Vector3<double> dir2 = Vector3<double>::Zero();
    double weight = 1;
    FourVector<double> p_prime = FourVector<double>::Zero();
};

struct SampleSummary {
    std::size_t accepted = 0;
    std::size_t tries = 0;
    double envelope_barn = 0;  //!< integral of the envelope
    double sigma_barn = 0;     //!< cross section inside the windows and above the cutoff
    double sigma_error_barn = 0;
    std::vector<std::string> warnings;

    double acceptance_rate() const { return tries ? double(accepted) / double(tries) : 0.0; }
};

//! The density exceeded its envelope: the sample would be biased.
class EnvelopeViolation : public Error {
public:
    EnvelopeViolation(const std::string& what, std::array<int, 5> cell, std::array<double, 5> point, double density,
                      double envelope)
        : Error(what), cell_(cell), point_(point), density_(density), envelope_(envelope)
    {
    }
    std::array<int, 5> cell() const { return cell_; }
    std::array<double, 5> point() const { return point_; }
    double density() const { return density_; }
    double envelope() const { return envelope_; }

private:
    std::array<int, 5> cell_;
    std::array<double, 5> point_;
    double density_;
    double envelope_;
};

/*!
 * Rejection sampler of photon pairs. The sampling variables are
 * t = logit(omega1 / omega1_max), the polar-map variables v1, v2 and the
 * azimuths; in t the infrared ends of the spectrum are flat.
 *
 * Events are produced in chunks of `chunk_size`; chunk i draws from
 * mt19937_64 seeded with splitmix64(seed + i * 0x9E3779B97F4A7C15), so the
 * stream does not depend on the number of workers.
 */
class PairSampler {
public:
    static constexpr std::size_t chunk_size = 4096;

    explicit PairSampler(SamplerConfig config);

    const SamplerConfig& config() const { return cfg_; }
    std::array<Interval, 5> domain() const { return domain_; }
    double envelope_integral_barn() const;

    //! Density in r0^2 per unit volume of the sampling variables; 0 outside the cuts.
    double density(const std::array<double, 5>& x) const;
    //! Same without the infrared cutoff, used to build the envelope.
    double density_uncut(const std::array<double, 5>& x) const;

    //! Draws config().n_events events and hands them to `sink` in stream order.
    SampleSummary run(const std::function<void(const PairEvent&)>& sink) const;

private:
    struct Draw {
        std::vector<PairEvent> events;
        std::size_t tries = 0;
    };

    double evaluate(const std::array<double, 5>& x, double cut) const;
    Draw draw_chunk(std::size_t chunk, std::size_t count) const;
    PairEvent make_event(const std::array<double, 5>& x) const;
    std::size_t cell_index(const std::array<int, 5>& c) const;

    SamplerConfig cfg_;
    PolarMap map1_, map2_;
    std::array<Interval, 5> domain_{};
    std::array<double, 5> width_{};
    double cut_ = 0;  // natural units
    double cell_volume_ = 0;
    std::vector<double> envelope_;
    std::vector<double> cdf_;
    std::size_t zero_cells_ = 0;
};

SampleSummary sample_pairs(const SamplerConfig& sc, const std::function<void(const PairEvent&)>& sink);

std::vector<PairEvent> sample_pairs(const SamplerConfig& sc, SampleSummary* summary = nullptr);

//! Header line, column line and one row per event.
void write_event_header(std::ostream& out, const SamplerConfig& sc);
void write_event(std::ostream& out, const PairEvent& e);

struct RateContext {
    double sigma_barn = 0;
    double sigma_error_barn = 0;
    double luminosity_per_barn_s = 0;  //!< flux times target electrons per barn, or bunch luminosity
};

struct CoincidenceStats {
    std::size_t n_events = 0;
    std::size_t count = 0;
    double fraction = 0;
    double fraction_error = 0;  //!< binomial
    double xsec_barn = 0;
    double xsec_error_barn = 0;
    double rate_per_s = 0;
    double rate_error_per_s = 0;
};

/*!
 * Events with photon 1 inside det1 (direction and energy window) and
 * photon 2 inside det2.
 */
CoincidenceStats coincidence_stats(const std::vector<PairEvent>& events, const DetectorConfig& det1,
                                   const DetectorConfig& det2, const RateContext& ctx = {});

//! Accumulating form for streamed events.
class CoincidenceCounter {
public:
    CoincidenceCounter(DetectorConfig det1, DetectorConfig det2);
    void operator()(const PairEvent& e);
    CoincidenceStats finish(const RateContext& ctx = {}) const;

private:
    DetectorConfig det1_, det2_;
    std::size_t n_ = 0;
    std::size_t count_ = 0;
};

} // namespace xpair
