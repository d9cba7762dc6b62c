#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/error.hpp"
#include "cavity_eit/response.hpp"
#include "cli.hpp"

namespace cavity_eit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Bundle {
    fs::path dir;
    std::vector<fs::path> written;

    void write(const fs::path& name, const std::string& text) {
        const fs::path path = dir / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
        f << text;
        if (!f) throw std::runtime_error("failed writing " + path.string());
        written.push_back(path);
    }

    // CSV plus the sidecar that regenerates it.
    void series(const std::string& stem, const RunConfig& config) {
        write(stem + ".csv", render(config).text);
        write(stem + ".config.json", config_to_json(config).dump(2) + "\n");
    }
};

json entry(std::string quantity, double computed, std::optional<double> quoted, std::string note) {
    json e{{"quantity", std::move(quantity)}, {"computed", computed}, {"note", std::move(note)}};
    e["quoted"] = quoted ? json(*quoted) : json(nullptr);
    return e;
}

RunConfig with_power(Command command, const ParameterSet& base, double power_uw, unsigned threads) {
    RunConfig c = default_config(command);
    c.params = base;
    c.params.drive.pump_power = units::uw_to_w(power_uw);
    c.threads = threads;
    return c;
}

OperatingPoint point(const ParameterSet& base, double power_uw) {
    DriveParams d = base.drive;
    d.pump_power = units::uw_to_w(power_uw);
    return make_operating_point(base.system, d);
}

double resonance(const ParameterSet& base) { return base.system.mirror_freq; }

std::vector<SweepRow> delay_rows(const RunConfig& c) {
    return power_sweep(c.powers, c.delta_over_omega_m * c.params.system.mirror_freq, c.params.system,
                       c.params.drive, c.threads);
}

}  // namespace

FigureId parse_figure(std::string_view name) {
    static constexpr std::string_view names[] = {"fig2", "fig3", "fig4", "fig5", "fig6",
                                                 "fig7", "fig8", "fig9", "fig10"};
    for (std::size_t i = 0; i < std::size(names); ++i)
        if (names[i] == name) return static_cast<FigureId>(i);
    throw ValidationError("figure", "unknown figure '" + std::string(name) + "' (fig2 .. fig10)");
}

std::string_view to_string(FigureId figure) {
    static constexpr std::string_view names[] = {"fig2", "fig3", "fig4", "fig5", "fig6",
                                                 "fig7", "fig8", "fig9", "fig10"};
    return names[static_cast<std::size_t>(figure)];
}

std::vector<fs::path> emit_figure_bundle(FigureId figure, const ParameterSet& base, const fs::path& dir,
                                         unsigned threads) {
    fs::create_directories(dir);
    Bundle b{dir, {}};
    const std::string id(to_string(figure));
    json report{{"figure", id}, {"entries", json::array()}};
    auto& entries = report["entries"];
    const double wm = resonance(base);

    switch (figure) {
        case FigureId::fig2: {
            const RunConfig c = with_power(Command::spectrum, base, 5.0, threads);
            b.series("fig2_spectrum", c);
            const ProbeResponse r = probe_response(wm, point(base, 5.0));
            entries.push_back(entry("re_eps_t_at_omega_m", r.eps_t.real(), std::nullopt,
                                    "absorptive part at the probe resonance, P_c = 5 uW"));
            entries.push_back(entry("im_eps_t_at_omega_m", r.eps_t.imag(), std::nullopt,
                                    "dispersive part at the probe resonance, P_c = 5 uW"));
            break;
        }
        case FigureId::fig3: {
            const RunConfig c = with_power(Command::spectrum, base, 1.0, threads);
            b.series("fig3_spectrum", c);
            const OperatingPoint op = point(base, 1.0);
            const std::vector<double> ratios = uniform_grid(c.grid.min, c.grid.max, c.grid.n);
            std::vector<double> deltas(ratios.size());
            std::transform(ratios.begin(), ratios.end(), deltas.begin(), [wm](double r) { return r * wm; });
            const SpectrumTable table = spectrum(deltas, op, threads);
            std::vector<double> phase(table.points.size());
            for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = table.points[i].phase_t;
            const std::vector<double> unwrapped = unwrap_phase(phase);
            std::string text = "delta_over_omega_m,phase_t_rad,phase_t_unwrapped_rad\n";
            for (std::size_t i = 0; i < phase.size(); ++i)
                text += format_double(ratios[i]) + ',' + format_double(phase[i]) + ',' +
                        format_double(unwrapped[i]) + '\n';
            b.write("fig3_phase_unwrapped.csv", text);
            entries.push_back(entry("phase_t_at_omega_m_rad", probe_response(wm, op).phase_t, 0.0,
                                    "quoted: phase vanishes at resonance; P_c = 1 uW"));
            break;
        }
        case FigureId::fig4:
        case FigureId::fig5: {
            RunConfig c = with_power(Command::delay_sweep, base, 0.0, threads);
            c.powers.clear();
            for (double uw : uniform_grid(0.1, 5.0, 50)) c.powers.push_back(units::uw_to_w(uw));
            b.series(id + "_delay_sweep", c);
            const std::vector<SweepRow> rows = delay_rows(c);
            double tmax = -std::numeric_limits<double>::infinity();
            double tmin = std::numeric_limits<double>::infinity();
            double rmax = -std::numeric_limits<double>::infinity();
            double rmin = std::numeric_limits<double>::infinity();
            for (const SweepRow& r : rows) {
                if (r.tau_t) tmax = std::max(tmax, *r.tau_t), tmin = std::min(tmin, *r.tau_t);
                if (r.tau_r) rmax = std::max(rmax, *r.tau_r), rmin = std::min(rmin, *r.tau_r);
            }
            if (figure == FigureId::fig4) {
                entries.push_back(entry("tau_r_min_s", rmin, -2.0,
                                        "quoted: reflected advance of order -2 s at ~0.2 uW"));
                entries.push_back(entry("tau_r_max_s", rmax, std::nullopt,
                                        "quoted sign: negative (advance) across 0.1-5 uW"));
            } else {
                entries.push_back(entry("tau_t_max_s", tmax, 2e-3,
                                        "quoted: transmitted delay of order 1-2 ms at low uW power"));
                entries.push_back(entry("tau_t_min_s", tmin, std::nullopt,
                                        "quoted sign: positive (slow light) across 0.1-5 uW"));
                const DelayReport d0 = group_delay_analytic(wm, point(base, 0.0));
                entries.push_back(entry("tau_t_zero_coupling_s", d0.transmission_delay(), 1.48e-6,
                                        "P_c = 0; the quoted value does not name the channel"));
            }
            break;
        }
        case FigureId::fig6:
        case FigureId::fig7: {
            for (double uw : {0.0, 5.0}) {
                const RunConfig c = with_power(Command::spectrum, base, uw, threads);
                b.series(id + (uw == 0.0 ? "_spectrum_p0uw" : "_spectrum_p5uw"), c);
                const ProbeResponse r = probe_response(wm, point(base, uw));
                const bool refl = figure == FigureId::fig6;
                entries.push_back(entry(std::string(refl ? "R" : "T") + "_at_omega_m_p" +
                                            (uw == 0.0 ? "0" : "5") + "uw",
                                        refl ? r.reflection() : r.transmission(), std::nullopt,
                                        "spectrum value at the probe resonance"));
            }
            break;
        }
        case FigureId::fig8: {
            const RunConfig c = with_power(Command::width_sweep, base, 0.0, threads);
            b.series("fig8_width_sweep", c);
            entries.push_back(entry("gamma_at_5uw_rad_s", eit_width(point(base, 5.0)).gamma_width, 1e4,
                                    "quoted value is the axis normalization 1e4 1/s; order-of-magnitude"));
            break;
        }
        case FigureId::fig9:
        case FigureId::fig10: {
            RunConfig c = with_power(Command::dynamics, base, 5.0, threads);
            c.params.system.effective_detuning = wm;
            c.delta_over_omega_m = 1.0;
            c = resolve(c);
            b.series(id + "_dynamics", c);

            const OperatingPoint op = make_operating_point(c.params.system, c.params.drive);
            const auto& d = c.dynamics;
            const SystemMatrix m = build_matrix(wm, op);
            Trajectory t = integrate(m, PulseSpec{d.shape, d.amplitude, *d.width, d.center},
                                     {*d.t_start, *d.t_stop}, *d.dt, d.samples, d.integrator);
            t = reconstruct_displacement(std::move(t), op.steady, wm, op.drive.probe_amplitude_scale);
            std::size_t peak = 0;
            for (std::size_t k = 0; k < t.times.size(); ++k)
                if (std::abs(t.q_plus[k]) > std::abs(t.q_plus[peak])) peak = k;
            double excursion = 0.0;
            for (double q : t.q_total) excursion = std::max(excursion, std::abs(q - op.steady.mirror_displacement));
            entries.push_back(entry("max_abs_q_plus_m", std::abs(t.q_plus[peak]), std::nullopt,
                                    "per unit probe amplitude; quoted axes carry no units"));
            entries.push_back(entry("time_of_max_abs_q_plus_s", t.times[peak], std::nullopt,
                                    "sech pulse centered at t = 0"));
            entries.push_back(entry("max_displacement_excursion_m", excursion, std::nullopt,
                                    "max |q(t) - q0|"));
            entries.push_back(entry("relaxation_time_s", m.relaxation_time(), std::nullopt,
                                    "1 / smallest eigenvalue real part"));
            break;
        }
    }
    b.write(id + "_report.json", report.dump(2) + "\n");
    return b.written;
}

}  // namespace cavity_eit::cli
