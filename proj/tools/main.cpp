#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/error.hpp"
#include "cavity_eit/response.hpp"
#include "cli.hpp"

namespace {

using namespace cavity_eit;

struct Flags {
    std::string config;
    std::optional<double> power_uw;
    std::optional<double> delta_over_omega_m;
    std::optional<double> grid_min, grid_max;
    std::optional<std::size_t> grid_n;
    std::vector<double> powers_uw;
    std::optional<std::string> pulse_shape;
    std::optional<double> pulse_width_s, pulse_amp, pulse_center_s;
    std::optional<double> t_start_s, t_stop_s, dt_s;
    std::optional<std::size_t> samples;
    std::optional<std::string> integrator;
    std::string out = "-";
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON parameter/run document; flags override it");
    sub->add_option("--power-uw", f.power_uw, "coupling laser power in microwatts");
    sub->add_option("--out", f.out, "output path, '-' for stdout");
}

void add_delta(CLI::App* sub, Flags& f) {
    sub->add_option("--delta-over-omega-m", f.delta_over_omega_m, "probe detuning in units of omega_m");
}

void add_grid(CLI::App* sub, Flags& f, const std::string& unit) {
    sub->add_option("--grid-min", f.grid_min, "grid start (" + unit + ")");
    sub->add_option("--grid-max", f.grid_max, "grid end (" + unit + ")");
    sub->add_option("--grid-n", f.grid_n, "number of grid points");
}

unsigned threads_from_env() {
    const char* v = std::getenv("CAVITY_EIT_THREADS");
    if (v == nullptr || *v == '\0') return 0;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0) throw ValidationError("CAVITY_EIT_THREADS", "must be a non-negative integer");
    return static_cast<unsigned>(n);
}

cli::RunConfig build_config(cli::Command command, const Flags& f) {
    cli::RunConfig c = cli::default_config(command);
    if (!f.config.empty()) c = cli::load_config_file(f.config, c);
    c.command = command;
    if (f.power_uw) c.params.drive.pump_power = units::uw_to_w(*f.power_uw);
    if (f.delta_over_omega_m) c.delta_over_omega_m = *f.delta_over_omega_m;

    if (command == cli::Command::spectrum) {
        if (f.grid_min) c.grid.min = *f.grid_min;
        if (f.grid_max) c.grid.max = *f.grid_max;
        if (f.grid_n) c.grid.n = *f.grid_n;
    } else if (command == cli::Command::delay_sweep || command == cli::Command::width_sweep) {
        if (!f.powers_uw.empty()) {
            c.powers.clear();
            for (double uw : f.powers_uw) c.powers.push_back(units::uw_to_w(uw));
        } else if (f.grid_min || f.grid_max || f.grid_n) {
            c.powers.clear();
            for (double uw : uniform_grid(f.grid_min.value_or(0.1), f.grid_max.value_or(5.0), f.grid_n.value_or(20)))
                c.powers.push_back(units::uw_to_w(uw));
        }
    }
    auto& d = c.dynamics;
    if (f.pulse_shape) d.shape = parse_pulse_shape(*f.pulse_shape);
    if (f.pulse_width_s) d.width = *f.pulse_width_s;
    if (f.pulse_amp) d.amplitude = *f.pulse_amp;
    if (f.pulse_center_s) d.center = *f.pulse_center_s;
    if (f.t_start_s) d.t_start = *f.t_start_s;
    if (f.t_stop_s) d.t_stop = *f.t_stop_s;
    if (f.dt_s) d.dt = *f.dt_s;
    if (f.samples) d.samples = *f.samples;
    if (f.integrator) d.integrator = parse_integrator(*f.integrator);
    c.output_path = f.out;
    c.threads = threads_from_env();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probe response and pulse dynamics of a membrane-in-the-middle optomechanical cavity"};
    app.require_subcommand(1);

    Flags f;
    auto* steady = app.add_subcommand("steady-state", "print the probe-off steady state as JSON");
    add_common(steady, f);

    auto* spectrum = app.add_subcommand("spectrum", "transmission/reflection spectrum CSV");
    add_common(spectrum, f);
    add_grid(spectrum, f, "delta/omega_m");

    auto* delay = app.add_subcommand("delay-sweep", "group delays versus pump power CSV");
    auto* width = app.add_subcommand("width-sweep", "transparency width versus pump power CSV");
    for (auto* sub : {delay, width}) {
        add_common(sub, f);
        add_delta(sub, f);
        add_grid(sub, f, "uW");
        sub->add_option("--powers-uw", f.powers_uw, "explicit pump powers in uW")->delimiter(',');
    }

    auto* dynamics = app.add_subcommand("dynamics", "time-domain response to a probe pulse CSV");
    add_common(dynamics, f);
    add_delta(dynamics, f);
    dynamics->add_option("--pulse-shape", f.pulse_shape, "sech | gaussian | rectangle | constant");
    dynamics->add_option("--pulse-width-s", f.pulse_width_s, "pulse width in seconds");
    dynamics->add_option("--pulse-amp", f.pulse_amp, "peak probe amplitude (1/s)");
    dynamics->add_option("--pulse-center-s", f.pulse_center_s, "pulse center in seconds");
    dynamics->add_option("--t-start-s", f.t_start_s, "integration start");
    dynamics->add_option("--t-stop-s", f.t_stop_s, "integration stop");
    dynamics->add_option("--dt-s", f.dt_s, "integration step");
    dynamics->add_option("--samples", f.samples, "number of output samples");
    dynamics->add_option("--integrator", f.integrator, "rk4 | exponential");

    std::string figure_name;
    std::string out_dir = ".";
    auto* figure = app.add_subcommand("figure", "write the data bundle for one figure (fig2 .. fig10)");
    figure->add_option("figure", figure_name, "figure id")->required();
    figure->add_option("--out-dir", out_dir, "bundle directory");
    figure->add_option("--config", f.config, "JSON parameter document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (figure->parsed()) {
            cli::RunConfig base = cli::default_config(cli::Command::spectrum);
            if (!f.config.empty()) base = cli::load_config_file(f.config, base);
            const auto files = cli::emit_figure_bundle(cli::parse_figure(figure_name), base.params, out_dir,
                                                       threads_from_env());
            std::cerr << figure_name << ": wrote " << files.size() << " files to " << out_dir << '\n';
            return 0;
        }
        const std::pair<CLI::App*, cli::Command> commands[] = {
            {steady, cli::Command::steady_state}, {spectrum, cli::Command::spectrum},
            {delay, cli::Command::delay_sweep},   {width, cli::Command::width_sweep},
            {dynamics, cli::Command::dynamics}};
        for (const auto& [sub, command] : commands)
            if (sub->parsed()) return cli::run(build_config(command, f), std::cout, std::cerr);
    } catch (const ValidationError& e) {
        std::cerr << "error: invalid input: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "error: numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
