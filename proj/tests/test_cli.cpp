#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/error.hpp"
#include "cli.hpp"

using namespace cavity_eit;
using namespace cavity_eit::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

std::vector<std::vector<double>> rows_of(const std::string& csv) {
    std::vector<std::vector<double>> rows;
    const auto lines = lines_of(csv);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::vector<double> row;
        for (const std::string& cell : split(lines[i])) row.push_back(cell == "NaN" ? NAN : std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cavity_eit_test_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run exe(const std::string& args) {
    const fs::path dir = scratch("exe");
    const std::string cmd = std::string(CAVITY_EIT_EXE) + " " + args + " >" + (dir / "out").string() +
                            " 2>" + (dir / "err").string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "out"), slurp(dir / "err")};
}

RunConfig at(Command command, double watts) {
    RunConfig c = default_config(command);
    c.params.drive.pump_power = watts;
    return c;
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits and spells NaN") {
    CHECK(format_double(1.0) == "1.0000000000000000e+00");
    CHECK(format_double(-2.5e-7) == "-2.4999999999999999e-07");
    CHECK(format_double(0.1) == "1.0000000000000001e-01");
    CHECK(format_double(NAN) == "NaN");
    for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, -1.054571817e-34, 4.9e-300})
        CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("command names round trip") {
    for (Command c : {Command::steady_state, Command::spectrum, Command::delay_sweep, Command::width_sweep,
                      Command::dynamics})
        CHECK(parse_command(to_string(c)) == c);
    CHECK_THROWS_AS(parse_command("plot"), ValidationError);
}

TEST_CASE("steady-state at zero power has no photons") {
    const Artifact a = render(at(Command::steady_state, 0.0));
    const json doc = json::parse(a.text);
    for (const char* key : {"c0_re", "c0_im", "photon_number", "q0_m", "alpha_si"}) CHECK(doc.contains(key));
    CHECK(doc["photon_number"].get<double>() == 0.0);
    CHECK(doc["alpha_si"].get<double>() == 0.0);
}

TEST_CASE("steady-state at 5 uW") {
    const json doc = json::parse(render(at(Command::steady_state, 5e-6)).text);
    CHECK(doc["photon_number"].get<double>() == doctest::Approx(6117118.44604172).epsilon(1e-12));
    CHECK(doc["alpha_si"].get<double>() == doctest::Approx(450392.6886774515).epsilon(1e-12));
    CHECK(doc["q0_m"].get<double>() > 0.0);
}

TEST_CASE("spectrum CSV has the documented columns and its T minimum near omega_m") {
    RunConfig c = at(Command::spectrum, 5e-6);
    const Artifact a = render(c);
    const auto lines = lines_of(a.text);
    REQUIRE(lines.size() == 2002);
    CHECK(lines.front() == kSpectrumHeader);
    CHECK(a.rows == 2001);
    const auto rows = rows_of(a.text);
    std::size_t min_at = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].size() == 9);
        if (rows[i][2] < rows[min_at][2]) min_at = i;
    }
    CHECK(std::abs(rows[min_at][1] - 1.0) < 0.01);
    CHECK(rows[1000][1] == 1.0);
    CHECK(rows[1000][2] == doctest::Approx(0.009999617325643438).epsilon(1e-9));
    CHECK(a.summary.find("2001 rows") != std::string::npos);
}

TEST_CASE("spectrum output is deterministic across thread counts") {
    RunConfig c = at(Command::spectrum, 1e-6);
    c.grid.n = 301;
    c.threads = 1;
    const std::string serial = render(c).text;
    c.threads = 7;
    CHECK(render(c).text == serial);
    CHECK(render(c).text == serial);
}

TEST_CASE("empty-cavity spectrum emits NaN for the undefined reflection delay") {
    RunConfig c = at(Command::spectrum, 0.0);
    c.grid = {0.5, 1.5, 11};
    const auto lines = lines_of(render(c).text);
    const auto cells = split(lines[6]);
    CHECK(cells[1] == format_double(1.0));
    CHECK(cells[8] == "NaN");
}

TEST_CASE("width-sweep gamma is affine in power") {
    RunConfig c = at(Command::width_sweep, 0.0);
    c.powers.clear();
    for (double uw : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) c.powers.push_back(units::uw_to_w(uw));
    const Artifact a = render(c);
    CHECK(lines_of(a.text).front() == kSweepHeader);
    const auto rows = rows_of(a.text);
    REQUIRE(rows.size() == 6);
    const double g0 = rows[0][3];
    CHECK(g0 == doctest::Approx(0.76 / 2.0).epsilon(1e-14));
    const double slope = (rows[5][3] - g0) / rows[5][0];
    for (const auto& r : rows) CHECK(std::abs(g0 + slope * r[0] - r[3]) <= 1e-10 * r[3]);
}

TEST_CASE("delay-sweep rows follow the requested powers") {
    RunConfig c = at(Command::delay_sweep, 0.0);
    c.powers = {0.2e-6, 1e-6, 5e-6};
    const auto rows = rows_of(render(c).text);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == 0.2e-6);
    CHECK(rows[1][1] == doctest::Approx(2.5122315964584235e-4).epsilon(1e-9));
    CHECK(rows[1][2] == doctest::Approx(1.2590628147074708e-4).epsilon(1e-9));
    CHECK(rows[0][1] > rows[1][1]);
    CHECK(rows[1][1] > rows[2][1]);
}

TEST_CASE("dynamics CSV has the documented columns") {
    RunConfig c = at(Command::dynamics, 5e-6);
    c.dynamics.samples = 257;
    const Artifact a = render(c);
    const auto lines = lines_of(a.text);
    CHECK(lines.front() == kDynamicsHeader);
    REQUIRE(lines.size() == 258);
    const auto rows = rows_of(a.text);
    for (const auto& r : rows) CHECK(r.size() == 6);
    CHECK(rows.front()[1] == 0.0);
    CHECK(rows.back()[0] > rows.front()[0]);
}

TEST_CASE("run maps failures to exit codes") {
    std::ostringstream out, err;

    RunConfig bad = at(Command::spectrum, -1e-6);
    CHECK(run(bad, out, err) == 1);
    CHECK(err.str().find("pump_power") != std::string::npos);

    err.str("");
    RunConfig grid = at(Command::spectrum, 1e-6);
    grid.grid.n = 0;
    CHECK(run(grid, out, err) == 1);
    grid.grid = {1.2, 0.8, 11};
    CHECK(run(grid, out, err) == 1);
    CHECK(err.str().find("grid_max") != std::string::npos);

    // ε_R vanishes at δ = Δ in the empty cavity, so its delay is undefined.
    err.str("");
    RunConfig single = at(Command::delay_sweep, 0.0);
    single.powers = {0.0};
    CHECK(run(single, out, err) == 2);
    CHECK(err.str().find("numerical") != std::string::npos);

    err.str("");
    RunConfig blue = at(Command::dynamics, 5e-6);
    blue.params.system.effective_detuning = -blue.params.system.mirror_freq;
    CHECK(run(blue, out, err) == 2);

    err.str("");
    out.str("");
    CHECK(run(at(Command::steady_state, 1e-6), out, err) == 0);
    CHECK(json::parse(out.str()).contains("photon_number"));
    CHECK(lines_of(err.str()).size() == 1);
}

TEST_CASE("unit conversions in config documents are exact") {
    const RunConfig base = default_config(Command::spectrum);
    const RunConfig hz = config_from_json({{"mirror_freq_hz", 134e3}}, base);
    CHECK(hz.params.system.mirror_freq == kTwoPi * 134e3);
    CHECK(hz.params.system.mirror_freq == units::hz_to_rad_s(134e3));

    const RunConfig nm = config_from_json({{"wavelength_nm", 1064.0}}, base);
    CHECK(nm.params.system.wavelength == units::nm_to_m(1064.0));
    CHECK(nm.params.system.wavelength == doctest::Approx(1.064e-6).epsilon(1e-16));

    const RunConfig ng = config_from_json({{"mirror_mass_ng", 40.0}}, base);
    CHECK(ng.params.system.mirror_mass == units::ng_to_kg(40.0));
    CHECK(ng.params.system.mirror_mass == doctest::Approx(4e-11).epsilon(1e-16));

    const RunConfig uw = config_from_json({{"pump_power_uw", 5.0}}, base);
    CHECK(uw.params.drive.pump_power == units::uw_to_w(5.0));
    CHECK(uw.params.drive.pump_power == doctest::Approx(5e-6).epsilon(1e-16));

    CHECK(units::rad_s_to_hz(units::hz_to_rad_s(134e3)) == doctest::Approx(134e3).epsilon(1e-15));
    CHECK(units::w_to_uw(units::uw_to_w(0.2)) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("config documents reject unknown and malformed keys") {
    const RunConfig base = default_config(Command::spectrum);
    CHECK_THROWS_AS(config_from_json({{"pump_power_mw", 1.0}}, base), ValidationError);
    CHECK_THROWS_AS(config_from_json({{"grid", {{"step", 0.1}}}}, base), ValidationError);
    CHECK_THROWS_AS(config_from_json({{"powers_w", "1e-6"}}, base), ValidationError);
    CHECK_THROWS_AS(config_from_json({{"pulse", {{"shape", "triangle"}}}}, base), ValidationError);
    CHECK_THROWS_AS(config_from_json({{"integrator", "euler"}}, base), ValidationError);
    CHECK_THROWS_AS(config_from_json({{"command", "plot"}}, base), ValidationError);
}

TEST_CASE("config echo reloads to byte-identical output") {
    for (Command command : {Command::steady_state, Command::spectrum, Command::delay_sweep, Command::width_sweep,
                            Command::dynamics}) {
        CAPTURE(to_string(command));
        RunConfig c = at(command, 2.5e-6);
        c.grid = {0.8, 1.2, 257};
        c.powers = {0.3e-6, 1.7e-6, 4.1e-6};
        c.delta_over_omega_m = 0.97;
        c.dynamics.samples = 129;
        c.dynamics.shape = PulseShape::gaussian;
        const std::string first = render(c).text;

        const json echoed = json::parse(config_to_json(c).dump());
        const RunConfig reloaded = config_from_json(echoed, default_config(Command::spectrum));
        CHECK(reloaded.command == command);
        CHECK(render(reloaded).text == first);
    }
}

TEST_CASE("figure bundles carry sidecars that reproduce their CSVs") {
    const ParameterSet base = default_parameters();
    for (FigureId id : {FigureId::fig2, FigureId::fig3, FigureId::fig4, FigureId::fig5, FigureId::fig6,
                        FigureId::fig7, FigureId::fig8, FigureId::fig9, FigureId::fig10}) {
        const std::string name(to_string(id));
        CAPTURE(name);
        CHECK(parse_figure(name) == id);
        const fs::path dir = scratch(name);
        const auto files = emit_figure_bundle(id, base, dir, 2);
        CHECK(fs::exists(dir / (name + "_report.json")));

        const json report = json::parse(slurp(dir / (name + "_report.json")));
        CHECK(report["figure"] == name);
        CHECK(!report["entries"].empty());
        for (const auto& e : report["entries"])
            for (const char* key : {"quantity", "computed", "quoted", "note"}) CHECK(e.contains(key));

        std::size_t sidecars = 0;
        for (const fs::path& p : files) {
            const std::string f = p.filename().string();
            if (f.size() < 12 || f.substr(f.size() - 12) != ".config.json") continue;
            ++sidecars;
            const fs::path csv = dir / (f.substr(0, f.size() - 12) + ".csv");
            REQUIRE(fs::exists(csv));
            const RunConfig c = load_config_file(p, default_config(Command::spectrum));
            CHECK(render(c).text == slurp(csv));
        }
        CHECK(sidecars >= 1);
    }
    CHECK_THROWS_AS(parse_figure("fig11"), ValidationError);
}

TEST_CASE("figure bundles use the stated operating points") {
    const ParameterSet base = default_parameters();
    const auto config_of = [](const fs::path& p) { return json::parse(slurp(p)); };

    const fs::path d3 = scratch("fig3_points");
    emit_figure_bundle(FigureId::fig3, base, d3, 1);
    CHECK(config_of(d3 / "fig3_spectrum.config.json")["pump_power"].get<double>() == 1e-6);
    CHECK(fs::exists(d3 / "fig3_phase_unwrapped.csv"));

    for (FigureId id : {FigureId::fig6, FigureId::fig7}) {
        const std::string name(to_string(id));
        const fs::path d = scratch(name + "_points");
        emit_figure_bundle(id, base, d, 1);
        CHECK(config_of(d / (name + "_spectrum_p0uw.config.json"))["pump_power"].get<double>() == 0.0);
        CHECK(config_of(d / (name + "_spectrum_p5uw.config.json"))["pump_power"].get<double>() == 5e-6);
    }

    const fs::path d10 = scratch("fig10_points");
    emit_figure_bundle(FigureId::fig10, base, d10, 1);
    const json c10 = config_of(d10 / "fig10_dynamics.config.json");
    CHECK(c10["effective_detuning"].get<double>() == base.system.mirror_freq);
    CHECK(c10["delta_over_omega_m"].get<double>() == 1.0);
    CHECK(c10["pump_power"].get<double>() == 5e-6);
}

TEST_CASE("executable: exit codes and flag handling") {
    const Run ok = exe("steady-state --power-uw 0");
    CHECK(ok.code == 0);
    CHECK(json::parse(ok.out)["photon_number"].get<double>() == 0.0);

    const Run neg = exe("spectrum --power-uw -3");
    CHECK(neg.code == 1);
    CHECK(neg.err.find("pump_power") != std::string::npos);

    CHECK(exe("spectrum --no-such-flag").code == 1);
    CHECK(exe("").code == 1);

    const Run undefined = exe("delay-sweep --powers-uw 0 --delta-over-omega-m 1");
    CHECK(undefined.code == 2);

    const Run widths = exe("width-sweep --powers-uw 0,1,2,3,4,5");
    CHECK(widths.code == 0);
    const auto rows = rows_of(widths.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[3][0] == 3e-6);

    const Run spec = exe("spectrum --power-uw 5 --grid-min 0.9 --grid-max 1.1 --grid-n 201");
    CHECK(spec.code == 0);
    CHECK(rows_of(spec.out).size() == 201);
    CHECK(lines_of(spec.err).size() == 1);
}

TEST_CASE("executable: --config round trip and flag override") {
    const fs::path dir = scratch("config_exe");
    RunConfig c = at(Command::spectrum, 2e-6);
    c.grid = {0.95, 1.05, 101};
    std::ofstream(dir / "run.json") << config_to_json(c).dump(2);

    const Run from_file = exe("spectrum --config " + (dir / "run.json").string());
    CHECK(from_file.code == 0);
    CHECK(from_file.out == render(c).text);

    const Run overridden = exe("spectrum --config " + (dir / "run.json").string() + " --power-uw 5 --out " +
                               (dir / "o.csv").string());
    CHECK(overridden.code == 0);
    c.params.drive.pump_power = 5e-6;
    CHECK(slurp(dir / "o.csv") == render(c).text);

    std::ofstream(dir / "bad.json") << "{\"mirror_mass\": -1}";
    const Run bad = exe("steady-state --config " + (dir / "bad.json").string());
    CHECK(bad.code == 1);
    CHECK(bad.err.find("mirror_mass") != std::string::npos);
}
