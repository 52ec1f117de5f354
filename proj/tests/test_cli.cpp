#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "xpair/commands.hpp"
#include "xpair/scenario.hpp"

using namespace xpair;
namespace fs = std::filesystem;

namespace {

const char* presets[] = {"fig2", "fig3", "fig4a", "fig4b", "fig5", "fig6", "fig7", "fig7_single"};

std::string preset_path(const std::string& name) { return std::string(XPAIR_PRESET_DIR) + "/" + name + ".ini"; }

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "xpair_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_text(const std::string& name, const std::string& text)
{
    const auto p = scratch(name);
    std::ofstream(p) << text;
    return p;
}

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::string& cmd, CommandOptions o)
{
    std::ostringstream out, err;
    const int code = run_command(cmd, o, out, err);
    return {code, out.str(), err.str()};
}

Run run(const std::string& cmd, const std::string& scenario)
{
    CommandOptions o;
    o.scenario_path = scenario;
    return run(cmd, o);
}

int tool(const std::string& args)
{
    const int status = std::system((std::string(XPAIR_TOOL) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* minimal = "[beam]\nphoton_energy = 100 keV\n";

} // namespace

TEST_CASE("presets round-trip through the text format")
{
    for (const char* name : presets) {
        CAPTURE(name);
        const auto tree = read_scenario_file(preset_path(name));
        CHECK(parse_scenario_text(serialize_scenario(tree)) == tree);
        CHECK_NOTHROW(build_scenario(tree, name));
    }
}

TEST_CASE("validation errors name the key path")
{
    auto message = [](const std::string& text) {
        try {
            build_scenario(parse_scenario_text(text));
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("[beam]\nphoton_energy = 100 keV\nbogus = 1\n").find("beam.bogus") != std::string::npos);
    CHECK(message("[beam]\nphoton_energy = 100\n").find("beam.photon_energy") != std::string::npos);
    CHECK(message("[beam]\nphoton_energy = 100 kg\n").find("beam.photon_energy") != std::string::npos);
    CHECK(message("[nope]\nx = 1\n").find("[nope]") != std::string::npos);
    CHECK(message("[target]\nthickness = 1 um\n").find("beam.photon_energy") != std::string::npos);
    const auto det = message(std::string(minimal) + "[detectors]\ndet1.theta = 2 rad\n");
    CHECK(det.find("detectors.") != std::string::npos);
    CHECK_THROWS_AS(parse_seed("-3", "sampler.seed"), ValidationError);
    CHECK(parse_seed("18446744073709551615") == 18446744073709551615ull);
}

TEST_CASE("rates without detectors list the required keys")
{
    const auto p = write_text("nodet.ini", std::string(minimal) + "[detectors]\n");
    const auto r = run("rates", p.string());
    CHECK(r.code == exit_validation);
    for (const char* key : {"detectors.det1.theta", "detectors.det1.solid_angle", "detectors.det2.phi"})
        CHECK(r.err.find(key) != std::string::npos);
}

TEST_CASE("exit codes")
{
    CHECK(run("grid", write_text("bad.ini", "[beam]\nphoton_energy = x\n").string()).code == exit_validation);
    CHECK(run("bogus", preset_path("fig2")).code == exit_validation);
    CHECK(run("grid", scratch("missing.ini").string()).code == exit_io);

    CommandOptions o;
    o.scenario_path = preset_path("fig4a");
    o.out_path = "/nonexistent-dir/out.csv";
    CHECK(run("grid", o).code == exit_io);

    o.out_path.reset();
    o.tolerance = 2.0;
    CHECK(run("grid", o).code == exit_validation);

    // a sampler whose envelope cannot hold the density is a numerical failure
    const auto env = write_text("env.ini", std::string(minimal)
                                               + "[sampler]\nn_events = 50000\nseed = 1\nresolution = 1\n"
                                                 "safety = 1\n");
    const auto r = run("sample", env.string());
    CHECK(r.code == exit_numerical);
    CHECK(r.err.find("envelope violation") != std::string::npos);

    CHECK(tool("grid --scenario " + preset_path("fig4a") + " --out " + scratch("t.csv").string()) == exit_ok);
    CHECK(tool("grid") == exit_validation);
    CHECK(tool("grid --scenario " + scratch("missing.ini").string()) == exit_io);
}

TEST_CASE("grid command writes a versioned CSV")
{
    CommandOptions o;
    o.scenario_path = preset_path("fig4b");
    o.out_path = scratch("fig4b.csv").string();
    REQUIRE(run("grid", o).code == exit_ok);
    const auto text = slurp(*o.out_path);
    CHECK(text.rfind("# schema=1", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 100 * 64);

    // worker count does not change the output
    o.threads = 3;
    o.out_path = scratch("fig4b_t3.csv").string();
    REQUIRE(run("grid", o).code == exit_ok);
    CHECK(slurp(*o.out_path) == text);
    const auto env_run = "XPAIR_THREADS=2 " + std::string(XPAIR_TOOL) + " grid --scenario " + preset_path("fig4b")
                         + " --out " + scratch("fig4b_env.csv").string();
    CHECK(std::system(env_run.c_str()) == 0);
    CHECK(slurp(scratch("fig4b_env.csv")) == text);
}

TEST_CASE("sample command")
{
    const auto zero = write_text("zero.ini", std::string(minimal) + "[sampler]\nn_events = 0\nseed = 3\n");
    CommandOptions o;
    o.scenario_path = zero.string();
    o.out_path = scratch("zero.csv").string();
    REQUIRE(run("sample", o).code == exit_ok);
    const auto header = slurp(*o.out_path);
    CHECK(header.rfind("# schema=1", 0) == 0);
    CHECK(std::count(header.begin(), header.end(), '\n') == 2);

    const auto small = write_text("small.ini", std::string(minimal)
                                                   + "[sampler]\nn_events = 2000\nseed = 11\nresolution = 6\n");
    o.scenario_path = small.string();
    o.out_path = scratch("a.csv").string();
    REQUIRE(run("sample", o).code == exit_ok);
    o.out_path = scratch("b.csv").string();
    REQUIRE(run("sample", o).code == exit_ok);
    CHECK(slurp(scratch("a.csv")) == slurp(scratch("b.csv")));
    o.seed = 12;
    o.out_path = scratch("c.csv").string();
    REQUIRE(run("sample", o).code == exit_ok);
    CHECK(slurp(scratch("a.csv")) != slurp(scratch("c.csv")));
}

TEST_CASE("fig2 sampling agrees with the rate calculation")
{
    CommandOptions o;
    o.scenario_path = preset_path("fig2");
    o.out_path = scratch("fig2_events.csv").string();
    const auto r = run("sample", o);
    REQUIRE(r.code == exit_ok);
    const auto at = r.out.find("pull=");
    REQUIRE(at != std::string::npos);
    const double pull = std::stod(r.out.substr(at + 5));
    MESSAGE(r.out);
    CHECK(std::abs(pull) < 3);
}

TEST_CASE("rate reports")
{
    const auto fig3 = nlohmann::json::parse(run("rates", preset_path("fig3")).out);
    CHECK(fig3["schema"] == 1);
    const auto& curve = fig3["outputs"]["rate_curve"];
    REQUIRE(curve.size() == 11);
    for (const auto& p : curve) {
        CHECK(p["rate"].get<double>() > 0.03);
        CHECK(p["rate"].get<double>() < 3);
    }
    CHECK(curve.back()["rate"].get<double>() > curve.front()["rate"].get<double>());

    const auto fig6 = nlohmann::json::parse(run("report", preset_path("fig6")).out);
    const double per_pulse = fig6["outputs"]["pairs_per_pulse"]["value"];
    MESSAGE("pairs per pulse " << per_pulse);
    CHECK(per_pulse == doctest::Approx(4e-5).epsilon(0.25));
    CHECK(fig6["derived"]["a_L"]["unit"] == "1");
    CHECK(fig6["derived"]["a_L_quoted"]["value"] == 0.85);
    for (const auto& [k, v] : fig6["derived"].items()) {
        CAPTURE(k);
        CHECK(v.contains("unit"));
        CHECK(v.contains("op"));
    }
    CHECK(fig6["provenance"].contains("version"));
    CHECK(fig6["inputs"]["beam"]["gamma"] == "300");
}
