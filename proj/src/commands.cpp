#include "xpair/commands.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>

#include "xpair/parallel.hpp"
#include "xpair/report.hpp"
#include "xpair/scenario.hpp"
#include "xpair/units.hpp"

namespace xpair {

namespace {

// Runs `write` against the output file or `fallback`.
void with_output(const CommandOptions& opts, std::ostream& fallback, const std::function<void(std::ostream&)>& write)
{
    if (!opts.out_path) {
        write(fallback);
        return;
    }
    std::ofstream f(*opts.out_path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open " + *opts.out_path + " for writing");
    write(f);
    f.flush();
    if (!f)
        throw IoError("write to " + *opts.out_path + " failed");
}

unsigned threads_of(const CommandOptions& opts) { return opts.threads ? opts.threads : default_thread_count(); }

void cmd_grid(const Scenario& s, const CommandOptions& opts, std::ostream& out)
{
    if (!s.grid)
        throw ValidationError("grid needs a [grid] section; required keys: grid.quantity, grid.geometry, "
                              "grid.omega1_min, grid.omega1_max, grid.omega1_steps, grid.angle_min, grid.angle_max, "
                              "grid.angle_steps");
    Scenario sc = s;
    if (opts.tolerance)
        sc.grid_tolerance = *opts.tolerance;
    const GridResult g = compute_grid(*sc.grid, sc.grid_physics(), threads_of(opts));
    with_output(opts, out, [&](std::ostream& o) { write_grid_csv(o, g); });
}

void cmd_report(const Scenario& s, const ScenarioTree& tree, const CommandOptions& opts, std::ostream& out,
                bool require_rates)
{
    if (require_rates)
        rate_curve(s);  // surfaces missing sections as validation errors
    ReportOptions ro;
    ro.include_rates = true;
    ro.tolerance = opts.tolerance.value_or(s.grid_tolerance);
    if (s.sampler)
        ro.seed = opts.seed.value_or(s.sampler->seed);
    const auto doc = build_report(s, tree, ro);
    with_output(opts, out, [&](std::ostream& o) { o << doc.dump(2) << "\n"; });
}

void cmd_sample(const Scenario& s, const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    if (!s.sampler)
        throw ValidationError("sample needs a [sampler] section; required keys: sampler.n_events");
    SamplerConfig sc = *s.sampler;
    if (opts.seed)
        sc.seed = *opts.seed;
    sc.threads = threads_of(opts);

    std::optional<CoincidenceCounter> counter;
    if (s.det1 && s.det2)
        counter.emplace(s.det1->config, s.det2->config);

    SampleSummary summary;
    with_output(opts, out, [&](std::ostream& o) {
        write_event_header(o, sc);
        if (sc.n_events == 0)
            return;
        summary = sample_pairs(sc, [&](const PairEvent& e) {
            write_event(o, e);
            if (counter)
                (*counter)(e);
        });
    });

    // the summary goes to stderr when events go to stdout
    std::ostream& info = opts.out_path ? out : err;
    char buf[512];
    std::snprintf(buf, sizeof buf, "# events=%zu tries=%zu acceptance=%.6g sigma_window_barn=%.6g +- %.3g\n",
                  summary.accepted, summary.tries, summary.acceptance_rate(), summary.sigma_barn,
                  summary.sigma_error_barn);
    info << buf;
    for (const auto& w : summary.warnings)
        err << "warning: " << w << "\n";
    if (counter && sc.n_events > 0) {
        RateContext ctx{summary.sigma_barn, summary.sigma_error_barn, 0.0};
        if (s.target && s.fixed_target())
            ctx.luminosity_per_barn_s = s.target->photon_flux_per_s * s.target->electrons_per_barn;
        const CoincidenceStats cs = counter->finish(ctx);
        std::snprintf(buf, sizeof buf, "# coincidences=%zu fraction=%.6g +- %.3g xsec_barn=%.6g +- %.3g", cs.count,
                      cs.fraction, cs.fraction_error, cs.xsec_barn, cs.xsec_error_barn);
        info << buf;
        if (ctx.luminosity_per_barn_s > 0) {
            std::snprintf(buf, sizeof buf, " rate_per_s=%.6g +- %.3g", cs.rate_per_s, cs.rate_error_per_s);
            info << buf;
            try {
                const double analytic = fixed_target_rate(*s.target, s.det1->config, s.det2->config,
                                                          s.photon_energy_keV, {AcceptanceMode::quadrature});
                std::snprintf(buf, sizeof buf, " analytic_rate_per_s=%.6g pull=%.3g", analytic,
                              cs.rate_error_per_s > 0 ? (cs.rate_per_s - analytic) / cs.rate_error_per_s : 0.0);
                info << buf;
            } catch (const Error&) {
            }
        }
        info << "\n";
    }
}

} // namespace

int run_command(const std::string& command, const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    try {
        if (command != "grid" && command != "rates" && command != "sample" && command != "report")
            throw ValidationError("unknown command '" + command + "' (expected grid, rates, sample or report)");
        if (opts.tolerance && !(*opts.tolerance > 0 && *opts.tolerance < 1))
            throw ValidationError("--tol must lie in (0, 1)");
        const ScenarioTree tree = read_scenario_file(opts.scenario_path);
        std::string name = opts.scenario_path;
        if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
            name = name.substr(slash + 1);
        if (const auto dot = name.find_last_of('.'); dot != std::string::npos)
            name = name.substr(0, dot);
        const Scenario s = build_scenario(tree, name);
        if (command == "grid")
            cmd_grid(s, opts, out);
        else if (command == "rates")
            cmd_report(s, tree, opts, out, true);
        else if (command == "report")
            cmd_report(s, tree, opts, out, false);
        else
            cmd_sample(s, opts, out, err);
        return exit_ok;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const EnvelopeViolation& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}

} // namespace xpair
