#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cavity_eit/config.hpp"
#include "cavity_eit/constants.hpp"
#include "cavity_eit/error.hpp"
#include "cavity_eit/response.hpp"

namespace cavity_eit::cli {
namespace {

using nlohmann::json;

const std::initializer_list<std::string_view> kRunKeys = {
    "command", "delta_over_omega_m", "grid", "powers_w", "pulse",
    "t_start_s", "t_stop_s", "dt_s", "samples", "integrator"};

double number_at(const json& obj, const std::string& key, const std::string& field) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(field, "must be a number");
    return v.get<double>();
}

std::size_t count_at(const json& obj, const std::string& key, const std::string& field) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ValidationError(field, "must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& field) {
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ValidationError(field, "must be a string");
    return v.get<std::string>();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& section) {
    if (!obj.is_object()) throw ValidationError(section, "must be a JSON object");
    for (const auto& [key, value] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError(section + "." + key, "unknown configuration key");
}

std::string nan_or(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NaN");
}

std::vector<double> spectrum_ratios(const GridSettings& grid) {
    return uniform_grid(grid.min, grid.max, grid.n);
}

Artifact render_steady(const RunConfig& config) {
    const OperatingPoint op = make_operating_point(config.params.system, config.params.drive);
    const json doc{
        {"c0_re", op.steady.cavity_amp.real()},
        {"c0_im", op.steady.cavity_amp.imag()},
        {"photon_number", op.steady.photon_number},
        {"q0_m", op.steady.mirror_displacement},
        {"alpha_si", op.steady.alpha},
    };
    Artifact a;
    a.text = doc.dump(2) + "\n";
    a.rows = 1;
    a.summary = "steady-state: photon_number = " + format_double(op.steady.photon_number) +
                ", alpha = " + format_double(op.steady.alpha);
    return a;
}

Artifact render_spectrum(const RunConfig& config) {
    const OperatingPoint op = make_operating_point(config.params.system, config.params.drive);
    const double wm = op.system.mirror_freq;
    const std::vector<double> ratios = spectrum_ratios(config.grid);
    std::vector<double> deltas(ratios.size());
    std::transform(ratios.begin(), ratios.end(), deltas.begin(), [wm](double r) { return r * wm; });

    const SpectrumTable table = spectrum(deltas, op, config.threads);

    std::string text;
    text.reserve(table.points.size() * 220);
    text.append(kSpectrumHeader).push_back('\n');
    std::size_t min_at = 0;
    double min_t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < table.points.size(); ++i) {
        const SpectrumPoint& p = table.points[i];
        if (p.valid && p.transmission < min_t) {
            min_t = p.transmission;
            min_at = i;
        }
        text += format_double(p.delta) + ',' + format_double(ratios[i]) + ',' +
                format_double(p.transmission) + ',' + format_double(p.reflection) + ',' +
                format_double(p.eps_t.real()) + ',' + format_double(p.eps_t.imag()) + ',' +
                format_double(p.phase_t) + ',' + nan_or(p.tau_t) + ',' + nan_or(p.tau_r) + '\n';
    }
    Artifact a;
    a.text = std::move(text);
    a.rows = table.points.size();
    a.summary = "spectrum: " + std::to_string(a.rows) + " rows, P_c = " + format_double(table.power) +
                " W, min T = " + format_double(min_t) + " at delta/omega_m = " +
                format_double(ratios[min_at]);
    return a;
}

Artifact render_sweep(const RunConfig& config) {
    const auto& sys = config.params.system;
    const double delta = config.delta_over_omega_m * sys.mirror_freq;
    const std::vector<SweepRow> rows =
        power_sweep(config.powers, delta, sys, config.params.drive, config.threads);

    if (rows.size() == 1 && config.command == Command::delay_sweep &&
        (!rows.front().tau_t || !rows.front().tau_r))
        throw UndefinedDelayError("group delay undefined at the single requested point");

    std::string text;
    text.append(kSweepHeader).push_back('\n');
    for (const SweepRow& r : rows)
        text += format_double(r.power) + ',' + nan_or(r.tau_t) + ',' + nan_or(r.tau_r) + ',' +
                format_double(r.gamma_width) + '\n';

    Artifact a;
    a.text = std::move(text);
    a.rows = rows.size();
    const SweepRow& last = rows.back();
    a.summary = std::string(to_string(config.command)) + ": " + std::to_string(a.rows) +
                " rows, at P_c = " + format_double(last.power) + " W: tau_t = " + nan_or(last.tau_t) +
                " s, tau_r = " + nan_or(last.tau_r) + " s, gamma = " + format_double(last.gamma_width) +
                " rad/s";
    return a;
}

Artifact render_dynamics(const RunConfig& raw) {
    const RunConfig config = resolve(raw);
    const auto& d = config.dynamics;
    const OperatingPoint op = make_operating_point(config.params.system, config.params.drive);
    const double delta = config.delta_over_omega_m * op.system.mirror_freq;
    const SystemMatrix matrix = build_matrix(delta, op);
    const PulseSpec pulse{d.shape, d.amplitude, *d.width, d.center};

    Trajectory traj = integrate(matrix, pulse, {*d.t_start, *d.t_stop}, *d.dt, d.samples, d.integrator);
    traj = reconstruct_displacement(std::move(traj), op.steady, delta,
                                    op.drive.probe_amplitude_scale);

    std::string text;
    text.reserve(traj.times.size() * 150);
    text.append(kDynamicsHeader).push_back('\n');
    double peak = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        peak = std::max(peak, std::abs(traj.q_plus[k]));
        text += format_double(traj.times[k]) + ',' + format_double(traj.q_plus[k].real()) + ',' +
                format_double(traj.q_plus[k].imag()) + ',' + format_double(traj.c_plus[k].real()) +
                ',' + format_double(traj.c_plus[k].imag()) + ',' + format_double(traj.q_total[k]) +
                '\n';
    }
    Artifact a;
    a.text = std::move(text);
    a.rows = traj.times.size();
    a.summary = "dynamics: " + std::to_string(a.rows) + " samples, " + std::to_string(traj.steps) +
                " " + std::string(to_string(d.integrator)) + " steps of " + format_double(traj.dt) +
                " s, max |q_plus| = " + format_double(peak);
    return a;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

Command parse_command(std::string_view name) {
    if (name == "steady-state") return Command::steady_state;
    if (name == "spectrum") return Command::spectrum;
    if (name == "delay-sweep") return Command::delay_sweep;
    if (name == "width-sweep") return Command::width_sweep;
    if (name == "dynamics") return Command::dynamics;
    throw ValidationError("command", "unknown command '" + std::string(name) + "'");
}

std::string_view to_string(Command command) {
    switch (command) {
        case Command::steady_state: return "steady-state";
        case Command::spectrum: return "spectrum";
        case Command::delay_sweep: return "delay-sweep";
        case Command::width_sweep: return "width-sweep";
        case Command::dynamics: return "dynamics";
    }
    return "spectrum";
}

std::vector<double> default_sweep_powers() {
    std::vector<double> p = uniform_grid(0.1, 5.0, 20);
    for (double& x : p) x = units::uw_to_w(x);
    return p;
}

RunConfig default_config(Command command) {
    RunConfig c;
    c.params = default_parameters();
    c.command = command;
    c.powers = default_sweep_powers();
    return c;
}

RunConfig config_from_json(const json& doc, RunConfig base) {
    base.params = parameters_from_json(doc, base.params, kRunKeys);

    if (doc.contains("command")) base.command = parse_command(string_at(doc, "command", "command"));
    if (doc.contains("delta_over_omega_m"))
        base.delta_over_omega_m = number_at(doc, "delta_over_omega_m", "delta_over_omega_m");
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown(g, {"min", "max", "n"}, "grid");
        if (g.contains("min")) base.grid.min = number_at(g, "min", "grid.min");
        if (g.contains("max")) base.grid.max = number_at(g, "max", "grid.max");
        if (g.contains("n")) base.grid.n = count_at(g, "n", "grid.n");
    }
    if (doc.contains("powers_w")) {
        const json& p = doc.at("powers_w");
        if (!p.is_array()) throw ValidationError("powers_w", "must be an array of numbers");
        base.powers.clear();
        for (const auto& v : p) {
            if (!v.is_number()) throw ValidationError("powers_w", "must be an array of numbers");
            base.powers.push_back(v.get<double>());
        }
    }
    auto& d = base.dynamics;
    if (doc.contains("pulse")) {
        const json& p = doc.at("pulse");
        reject_unknown(p, {"shape", "amplitude", "width_s", "center_s"}, "pulse");
        if (p.contains("shape")) d.shape = parse_pulse_shape(string_at(p, "shape", "pulse.shape"));
        if (p.contains("amplitude")) d.amplitude = number_at(p, "amplitude", "pulse.amplitude");
        if (p.contains("width_s")) d.width = number_at(p, "width_s", "pulse.width_s");
        if (p.contains("center_s")) d.center = number_at(p, "center_s", "pulse.center_s");
    }
    if (doc.contains("t_start_s")) d.t_start = number_at(doc, "t_start_s", "t_start_s");
    if (doc.contains("t_stop_s")) d.t_stop = number_at(doc, "t_stop_s", "t_stop_s");
    if (doc.contains("dt_s")) d.dt = number_at(doc, "dt_s", "dt_s");
    if (doc.contains("samples")) d.samples = count_at(doc, "samples", "samples");
    if (doc.contains("integrator"))
        d.integrator = parse_integrator(string_at(doc, "integrator", "integrator"));
    return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
    std::ifstream f(path);
    if (!f) throw ValidationError("config", "cannot open '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
    return config_from_json(doc, std::move(base));
}

json config_to_json(const RunConfig& raw) {
    const RunConfig config = raw.command == Command::dynamics ? resolve(raw) : raw;
    json doc = parameters_to_json(config.params);
    doc["command"] = std::string(to_string(config.command));
    switch (config.command) {
        case Command::steady_state: break;
        case Command::spectrum:
            doc["grid"] = {{"min", config.grid.min}, {"max", config.grid.max}, {"n", config.grid.n}};
            break;
        case Command::delay_sweep:
        case Command::width_sweep:
            doc["delta_over_omega_m"] = config.delta_over_omega_m;
            doc["powers_w"] = config.powers;
            break;
        case Command::dynamics: {
            const auto& d = config.dynamics;
            doc["delta_over_omega_m"] = config.delta_over_omega_m;
            doc["pulse"] = {{"shape", std::string(to_string(d.shape))},
                            {"amplitude", d.amplitude},
                            {"width_s", *d.width},
                            {"center_s", d.center}};
            doc["t_start_s"] = *d.t_start;
            doc["t_stop_s"] = *d.t_stop;
            doc["dt_s"] = *d.dt;
            doc["samples"] = d.samples;
            doc["integrator"] = std::string(to_string(d.integrator));
            break;
        }
    }
    return doc;
}

RunConfig resolve(RunConfig config) {
    auto& d = config.dynamics;
    const OperatingPoint op = make_operating_point(config.params.system, config.params.drive);
    if (!d.width) d.width = default_pulse(op.system).width;
    const PulseSpec pulse{d.shape, d.amplitude, *d.width, d.center};
    pulse.validate();
    if (!d.t_start || !d.t_stop || !d.dt) {
        const SystemMatrix matrix = build_matrix(config.delta_over_omega_m * op.system.mirror_freq, op);
        const TimeSpan span = default_span(pulse, matrix);
        if (!d.t_start) d.t_start = span.start;
        if (!d.t_stop) d.t_stop = span.stop;
        if (!d.dt) d.dt = suggest_time_step(matrix, pulse);
    }
    return config;
}

Artifact render(const RunConfig& config) {
    switch (config.command) {
        case Command::steady_state: return render_steady(config);
        case Command::spectrum: return render_spectrum(config);
        case Command::delay_sweep:
        case Command::width_sweep: return render_sweep(config);
        case Command::dynamics: return render_dynamics(config);
    }
    throw ValidationError("command", "unhandled command");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const Artifact a = render(config);
        if (config.output_path == "-") out << a.text << std::flush;
        else write_text(config.output_path, a.text);
        err << a.summary << '\n';
        return 0;
    } catch (const ValidationError& e) {
        err << "error: invalid input: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        err << "error: numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

std::string format_double(double value) {
    if (std::isnan(value)) return "NaN";
    if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

}  // namespace cavity_eit::cli
