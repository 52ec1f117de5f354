#include "xpair/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "xpair/dcs.hpp"
#include "xpair/parallel.hpp"
#include "xpair/units.hpp"

namespace xpair {

namespace {

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += golden_gamma;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// radical inverse, for the interior probe points of envelope cells
double halton(int index, int base)
{
    double f = 1.0, r = 0.0;
    for (int i = index; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

void check_window(const AngularWindow& w, const char* name)
{
    if (!(w.theta.lo >= 0.0 && w.theta.hi <= std::numbers::pi && w.theta.lo < w.theta.hi))
        throw PreconditionError(std::string("SamplerConfig: ") + name + " theta range must satisfy 0 <= lo < hi <= pi");
    if (!(w.phi.lo < w.phi.hi && w.phi.hi - w.phi.lo <= 2.0 * std::numbers::pi * (1 + 1e-12)))
        throw PreconditionError(std::string("SamplerConfig: ") + name + " phi range must be increasing and span at most 2 pi");
}

} // namespace

AngularWindow AngularWindow::around(double theta, double phi, double dtheta, double dphi)
{
    AngularWindow w;
    w.theta = {std::max(0.0, theta - dtheta), std::min(std::numbers::pi, theta + dtheta)};
    w.phi = {phi - dphi, phi + dphi};
    return w;
}

void SamplerConfig::validate() const
{
    scenario.validate();
    if (!(ir_cutoff_keV > 0.0))
        throw PreconditionError("SamplerConfig: ir_cutoff must be positive");
    if (n_events < 1)
        throw PreconditionError("SamplerConfig: n_events must be at least 1");
    for (int r : envelope_resolution)
        if (r < 1)
            throw PreconditionError("SamplerConfig: envelope resolution must be at least 1 per dimension");
    if (!(envelope_safety >= 1.0))
        throw PreconditionError("SamplerConfig: envelope safety factor must be >= 1");
    check_window(window1, "window1");
    check_window(window2, "window2");
}

PairSampler::PairSampler(SamplerConfig config)
    : cfg_(std::move(config)),
      map1_((cfg_.validate(), cfg_.scenario.electron), cfg_.window1.theta.lo, cfg_.window1.theta.hi),
      map2_(cfg_.scenario.electron, cfg_.window2.theta.lo, cfg_.window2.theta.hi)
{
    const auto& sc = cfg_.scenario;
    const auto& e = sc.electron;
    cut_ = cfg_.ir_cutoff_keV / constants.mc2_keV;

    // omega1 >= cut needs u >= cut / omega1_max, and omega1_max is largest at the smallest polar angle
    const double flux = e.gamma * sc.omega * e.doppler(sc.alpha);
    const double w1max_bound = flux / (e.gamma * e.doppler(cfg_.window1.theta.lo));
    const double u_lo = cut_ / w1max_bound * (1.0 - 1e-9);
    // omega2 >= cut needs 1 - u >= cut * den / flux, with den >= 1 / (2 (gamma + omega))
    const double v_lo = cut_ / (2.0 * (e.gamma + sc.omega) * flux);
    if (!(u_lo < 1.0 - v_lo))
        throw PreconditionError("PairSampler: infrared cutoff leaves no phase space inside the windows");

    domain_[0] = {std::log(u_lo / (1.0 - u_lo)), std::log((1.0 - v_lo) / v_lo)};
    domain_[1] = {map1_.lo(), map1_.hi()};
    domain_[2] = cfg_.window1.phi;
    domain_[3] = {map2_.lo(), map2_.hi()};
    domain_[4] = cfg_.window2.phi;

    const auto& res = cfg_.envelope_resolution;
    cell_volume_ = 1.0;
    for (int k = 0; k < 5; ++k) {
        width_[k] = (domain_[k].hi - domain_[k].lo) / res[k];
        cell_volume_ *= width_[k];
    }
    if (!(cell_volume_ > 0.0))
        throw PreconditionError("PairSampler: empty sampling domain");

    const unsigned threads = cfg_.threads ? cfg_.threads : default_thread_count();

    // density on the lattice of cell corners
    std::array<std::size_t, 5> n{};
    std::size_t lattice_size = 1;
    for (int k = 0; k < 5; ++k) {
        n[k] = static_cast<std::size_t>(res[k]) + 1;
        lattice_size *= n[k];
    }
    std::vector<double> lattice(lattice_size);
    parallel_for(lattice_size, threads, [&](std::size_t idx) {
        std::array<double, 5> x;
        std::size_t rest = idx;
        for (int k = 4; k >= 0; --k) {
            x[k] = domain_[k].lo + static_cast<double>(rest % n[k]) * width_[k];
            rest /= n[k];
        }
        lattice[idx] = density_uncut(x);
    });

    std::size_t cells = 1;
    for (int r : res)
        cells *= static_cast<std::size_t>(r);
    envelope_.assign(cells, 0.0);
    constexpr int interior_points = 8;
    constexpr std::array<int, 5> bases{2, 3, 5, 7, 11};
    parallel_for(cells, threads, [&](std::size_t idx) {
        std::array<int, 5> c;
        std::size_t rest = idx;
        for (int k = 4; k >= 0; --k) {
            c[k] = static_cast<int>(rest % static_cast<std::size_t>(res[k]));
            rest /= static_cast<std::size_t>(res[k]);
        }
        double m = 0.0;
        for (int corner = 0; corner < 32; ++corner) {
            std::size_t li = 0;
            for (int k = 0; k < 5; ++k)
                li = li * n[k] + static_cast<std::size_t>(c[k] + ((corner >> k) & 1));
            m = std::max(m, lattice[li]);
        }
        std::array<double, 5> x;
        for (int p = 0; p <= interior_points; ++p) {
            for (int k = 0; k < 5; ++k) {
                const double frac = p == 0 ? 0.5 : halton(p, bases[k]);
                x[k] = domain_[k].lo + (c[k] + frac) * width_[k];
            }
            m = std::max(m, density_uncut(x));
        }
        envelope_[idx] = cfg_.envelope_safety * m;
    });

    cdf_.resize(cells);
    double acc = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        acc += envelope_[i];
        cdf_[i] = acc;
        zero_cells_ += envelope_[i] == 0.0;
    }
    if (!(acc > 0.0))
        throw PreconditionError("PairSampler: density vanishes everywhere inside the windows");
}

double PairSampler::envelope_integral_barn() const
{
    return cdf_.back() * cell_volume_ * constants.r0_squared_barn();
}

double PairSampler::density(const std::array<double, 5>& x) const { return evaluate(x, cut_); }

double PairSampler::density_uncut(const std::array<double, 5>& x) const { return evaluate(x, 0.0); }

double PairSampler::evaluate(const std::array<double, 5>& x, double cut) const
{
    const auto p1 = map1_.at(x[1]);
    const auto p2 = map2_.at(x[3]);
    ScatterConfig<double> cfg = cfg_.scenario;
    cfg.theta1p = p1.theta;
    cfg.phi1p = x[2];
    cfg.theta2p = p2.theta;
    cfg.phi2p = x[4];
    const auto ang = emission_angles(cfg);
    if (ang.one_minus_cos1 == 0.0 && ang.one_minus_cos2 == 0.0)
        return 0.0;
    const double w1max = omega1_max(cfg, ang);
    const double u = 1.0 / (1.0 + std::exp(-x[0]));
    const double one_minus_u = 1.0 / (1.0 + std::exp(x[0]));
    const double w1 = u * w1max;
    if (w1 < cut)
        return 0.0;
    try {
        const auto pt = evaluate_triple(cfg, w1, XsecOptions{cut});
        return pt.natural * w1max * u * one_minus_u * p1.jacobian * p2.jacobian;
    } catch (const SingularityError&) {
        return 0.0;
    } catch (const KinematicsError&) {
        return 0.0;
    }
}

std::size_t PairSampler::cell_index(const std::array<int, 5>& c) const
{
    std::size_t idx = 0;
    for (int k = 0; k < 5; ++k)
        idx = idx * static_cast<std::size_t>(cfg_.envelope_resolution[k]) + static_cast<std::size_t>(c[k]);
    return idx;
}

PairEvent PairSampler::make_event(const std::array<double, 5>& x) const
{
    ScatterConfig<double> cfg = cfg_.scenario;
    cfg.theta1p = map1_.at(x[1]).theta;
    cfg.phi1p = x[2];
    cfg.theta2p = map2_.at(x[3]).theta;
    cfg.phi2p = x[4];
    const double w1 = omega1_max(cfg) / (1.0 + std::exp(-x[0]));
    const double w2 = omega2(cfg, w1);

    PairEvent ev;
    ev.omega1_keV = natural_to_kev(w1);
    ev.omega2_keV = natural_to_kev(w2);
    ev.theta1 = cfg.theta1p;
    ev.phi1 = cfg.phi1p;
    ev.theta2 = cfg.theta2p;
    ev.phi2 = cfg.phi2p;
    const Eigen::Matrix3d rot = rotation_from_z<double>(cfg.electron.axis);
    ev.dir1 = rot * unit_from_angles(cfg.theta1p, cfg.phi1p);
    ev.dir2 = rot * unit_from_angles(cfg.theta2p, cfg.phi2p);
    ev.p_prime = reconstruct_final_electron(cfg, w1, w2);
    return ev;
}

PairSampler::Draw PairSampler::draw_chunk(std::size_t chunk, std::size_t count) const
{
    std::mt19937_64 rng(splitmix64(cfg_.seed + chunk * golden_gamma));
    const double total = cdf_.back();
    const auto& res = cfg_.envelope_resolution;
    constexpr std::size_t give_up = 100'000'000;

    Draw d;
    d.events.reserve(count);
    while (d.events.size() < count) {
        if (d.tries >= give_up && d.events.empty())
            throw Error("PairSampler: no event accepted in " + std::to_string(give_up) + " tries");
        ++d.tries;
        const double r = unit_double(rng) * total;
        const std::size_t cell = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), r) - cdf_.begin()), cdf_.size() - 1);
        std::array<int, 5> c;
        std::size_t rest = cell;
        for (int k = 4; k >= 0; --k) {
            c[k] = static_cast<int>(rest % static_cast<std::size_t>(res[k]));
            rest /= static_cast<std::size_t>(res[k]);
        }
        std::array<double, 5> x;
        for (int k = 0; k < 5; ++k)
            x[k] = domain_[k].lo + (c[k] + unit_double(rng)) * width_[k];
        const double f = density(x);
        const double env = envelope_[cell];
        if (f > env) {
            char buf[512];
            std::snprintf(buf, sizeof buf,
                          "envelope violation in cell (%d,%d,%d,%d,%d) at (t=%.6g, v1=%.6g, phi1=%.6g, v2=%.6g, "
                          "phi2=%.6g): density %.6g exceeds envelope %.6g; raise envelope_resolution or "
                          "envelope_safety",
                          c[0], c[1], c[2], c[3], c[4], x[0], x[1], x[2], x[3], x[4], f, env);
            throw EnvelopeViolation(buf, c, x, f, env);
        }
        if (unit_double(rng) * env < f)
            d.events.push_back(make_event(x));
    }
    return d;
}

SampleSummary PairSampler::run(const std::function<void(const PairEvent&)>& sink) const
{
    const std::size_t n = cfg_.n_events;
    const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
    const unsigned threads = cfg_.threads ? cfg_.threads : default_thread_count();
    const std::size_t batch = std::max<std::size_t>(1, 2 * threads);

    SampleSummary s;
    std::vector<Draw> draws;
    for (std::size_t first = 0; first < chunks; first += batch) {
        const std::size_t m = std::min(batch, chunks - first);
        draws.assign(m, {});
        parallel_for(m, threads, [&](std::size_t i) {
            const std::size_t chunk = first + i;
            draws[i] = draw_chunk(chunk, std::min(chunk_size, n - chunk * chunk_size));
        });
        for (const Draw& d : draws) {
            s.tries += d.tries;
            s.accepted += d.events.size();
            for (const PairEvent& ev : d.events)
                sink(ev);
        }
    }

    s.envelope_barn = envelope_integral_barn();
    const double p = s.acceptance_rate();
    s.sigma_barn = s.envelope_barn * p;
    s.sigma_error_barn = s.envelope_barn * std::sqrt(p * (1.0 - p) / static_cast<double>(s.tries));
    if (p < 1e-4) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "acceptance rate %.3g is below 1e-4; refine the envelope (envelope_resolution) or narrow the "
                      "angular windows",
                      p);
        s.warnings.emplace_back(buf);
    }
    return s;
}

SampleSummary sample_pairs(const SamplerConfig& sc, const std::function<void(const PairEvent&)>& sink)
{
    return PairSampler(sc).run(sink);
}

std::vector<PairEvent> sample_pairs(const SamplerConfig& sc, SampleSummary* summary)
{
    std::vector<PairEvent> events;
    events.reserve(sc.n_events);
    const SampleSummary s = sample_pairs(sc, [&](const PairEvent& e) { events.push_back(e); });
    if (summary)
        *summary = s;
    return events;
}

void write_event_header(std::ostream& out, const SamplerConfig& sc)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "# schema=1 seed=%llu n_events=%zu ir_cutoff_keV=%.17g\n",
                  static_cast<unsigned long long>(sc.seed), sc.n_events, sc.ir_cutoff_keV);
    out << buf << "omega1_keV,omega2_keV,theta1,phi1,theta2,phi2,weight\n";
}

void write_event(std::ostream& out, const PairEvent& e)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.omega1_keV, e.omega2_keV, e.theta1,
                  e.phi1, e.theta2, e.phi2, e.weight);
    out << buf;
}

CoincidenceCounter::CoincidenceCounter(DetectorConfig det1, DetectorConfig det2)
    : det1_(std::move(det1)), det2_(std::move(det2))
{
    det1_.validate();
    det2_.validate();
}

void CoincidenceCounter::operator()(const PairEvent& e)
{
    ++n_;
    if (det1_.solid_angle > 0.0 && det2_.solid_angle > 0.0 && det1_.accepts_direction(e.dir1)
        && det1_.accepts_energy(e.omega1_keV) && det2_.accepts_direction(e.dir2) && det2_.accepts_energy(e.omega2_keV))
        ++count_;
}

CoincidenceStats CoincidenceCounter::finish(const RateContext& ctx) const
{
    CoincidenceStats s;
    s.n_events = n_;
    s.count = count_;
    if (n_ == 0)
        return s;
    const double nn = static_cast<double>(n_);
    s.fraction = static_cast<double>(count_) / nn;
    s.fraction_error = std::sqrt(s.fraction * (1.0 - s.fraction) / nn);
    s.xsec_barn = s.fraction * ctx.sigma_barn;
    // relative errors of the fraction and of the sampled cross section in quadrature
    const double rel_f = s.fraction > 0 ? s.fraction_error / s.fraction : 0.0;
    const double rel_s = ctx.sigma_barn > 0 ? ctx.sigma_error_barn / ctx.sigma_barn : 0.0;
    s.xsec_error_barn = s.xsec_barn * std::hypot(rel_f, rel_s);
    s.rate_per_s = s.xsec_barn * ctx.luminosity_per_barn_s;
    s.rate_error_per_s = s.xsec_error_barn * ctx.luminosity_per_barn_s;
    return s;
}

CoincidenceStats coincidence_stats(const std::vector<PairEvent>& events, const DetectorConfig& det1,
                                   const DetectorConfig& det2, const RateContext& ctx)
{
    CoincidenceCounter counter(det1, det2);
    for (const PairEvent& e : events)
        counter(e);
    return counter.finish(ctx);
}

} // namespace xpair
