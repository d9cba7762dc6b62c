#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cavity_eit/dynamics.hpp"
#include "cavity_eit/params.hpp"

namespace cavity_eit::cli {

enum class Command { steady_state, spectrum, delay_sweep, width_sweep, dynamics };

Command parse_command(std::string_view name);
std::string_view to_string(Command command);

// Spectrum grid in units of δ/ω_m.
struct GridSettings {
    double min = 0.5;
    double max = 1.5;
    std::size_t n = 2001;
};

// Unset fields fall back to the defaults of the dynamics module.
struct DynamicsSettings {
    PulseShape shape = PulseShape::sech;
    double amplitude = 1.0;
    std::optional<double> width;
    double center = 0.0;
    std::optional<double> t_start;
    std::optional<double> t_stop;
    std::optional<double> dt;
    std::size_t samples = kDefaultSamples;
    Integrator integrator = Integrator::rk4;
};

struct RunConfig {
    ParameterSet params;
    Command command = Command::spectrum;
    GridSettings grid;
    double delta_over_omega_m = 1.0;
    std::vector<double> powers;  // W, sweeps only
    DynamicsSettings dynamics;
    std::string output_path = "-";
    unsigned threads = 0;
};

// 20 points over [0.1, 5] μW.
std::vector<double> default_sweep_powers();

RunConfig default_config(Command command);

// Reads the flat document written by config_to_json: parameter keys plus the
// run keys command, delta_over_omega_m, grid, powers_w, pulse, t_start_s,
// t_stop_s, dt_s, samples and integrator. Throws ValidationError.
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base);

// Records every setting that affects the output, defaults resolved.
nlohmann::json config_to_json(const RunConfig& config);

// Fills in dynamics defaults (pulse width, span, dt) for the current parameters.
RunConfig resolve(RunConfig config);

struct Artifact {
    std::string text;     // CSV or JSON
    std::size_t rows = 0;
    std::string summary;  // one line, no newline
};

// Computes the artifact for one command. Throws ValidationError/NumericalError.
Artifact render(const RunConfig& config);

// Writes the artifact to config.output_path ("-" = out), summary to err.
// Returns 0, 1 on validation errors, 2 on numerical errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// CSV float formatting: 17 significant digits, NaN spelled "NaN".
std::string format_double(double value);

inline constexpr std::string_view kSpectrumHeader =
    "delta_rad_s,delta_over_omega_m,T,R,re_eps_t,im_eps_t,phase_t_rad,tau_t_s,tau_r_s";
inline constexpr std::string_view kSweepHeader = "power_w,tau_t_s,tau_r_s,gamma_rad_s";
inline constexpr std::string_view kDynamicsHeader =
    "t_s,re_q_plus,im_q_plus,re_c_plus,im_c_plus,q_total_m";

enum class FigureId { fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9, fig10 };

FigureId parse_figure(std::string_view name);
std::string_view to_string(FigureId figure);

// Writes the data behind one figure into `dir`: one CSV per series, a
// `<csv>.config.json` sidecar per CSV that reproduces it through --config,
// and `<figure>_report.json` comparing computed scalars with quoted ones.
// Returns the paths written.
std::vector<std::filesystem::path> emit_figure_bundle(FigureId figure, const ParameterSet& base,
                                                      const std::filesystem::path& dir,
                                                      unsigned threads = 0);

}  // namespace cavity_eit::cli
