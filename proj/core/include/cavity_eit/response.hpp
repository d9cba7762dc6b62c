#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "cavity_eit/steady_state.hpp"

namespace cavity_eit {

// Amplitudes with magnitude below this have no meaningful phase derivative.
inline constexpr double kMinDelayAmplitude = 1e-9;

// Linear response at one probe detuning δ = ω_p − ω_c.
struct ProbeResponse {
    double delta = 0.0;              // rad/s
    std::complex<double> c_plus;     // per unit probe amplitude, s
    std::complex<double> eps_t;      // 2κ c₊
    std::complex<double> eps_r;      // eps_t − 1
    double phase_t = 0.0;            // principal value, (−π, π]
    double phase_r = 0.0;

    double transmission() const { return std::norm(eps_t); }
    double reflection() const { return std::norm(eps_r); }
};

enum class DelayMethod { analytic, finite_difference };

// Group delay of the transmitted and reflected probe. A channel whose
// amplitude vanishes at δ has no delay; its optional is empty.
struct DelayReport {
    std::optional<double> tau_t;  // s
    std::optional<double> tau_r;  // s, negative means advance
    DelayMethod method = DelayMethod::analytic;
    double fd_step = 0.0;         // rad/s, finite_difference only

    // Throw UndefinedDelayError when the channel is undefined.
    double transmission_delay() const;
    double reflection_delay() const;
};

struct SpectrumPoint {
    double delta = 0.0;
    double transmission = 0.0;
    double reflection = 0.0;
    std::complex<double> eps_t;
    std::complex<double> eps_r;
    double phase_t = 0.0;
    std::optional<double> tau_t;
    std::optional<double> tau_r;
    bool valid = true;  // false when the point failed; the row is a gap
};

struct SpectrumTable {
    std::vector<SpectrumPoint> points;
    double power = 0.0;  // W
};

struct WidthReport {
    double gamma_width = 0.0;  // rad/s
    double power = 0.0;        // W
};

struct SweepRow {
    double power = 0.0;
    std::optional<double> tau_t;
    std::optional<double> tau_r;
    double gamma_width = 0.0;
};

// First-order sideband amplitude c₊(δ):
//
//   c₊ = [χ(δ)(2κ − i(Δ+δ)) − iα] / [χ(δ)((2κ − iδ)² + Δ²) + 2Δα]
//   χ(δ) = m(δ² − ω_m² + iγ_m δ)
//
// Throws DegenerateDenominatorError if the denominator underflows.
std::complex<double> c_plus(double delta, const OperatingPoint& op);

// Throws UndefinedPhaseError if ε_T is exactly zero.
ProbeResponse probe_response(double delta, const OperatingPoint& op);

// Default finite-difference step, 1e-6 ω_m.
double default_fd_step(const SystemParams& params);

// Central difference of ε_T with one Richardson halving.
DelayReport group_delay_fd(double delta, const OperatingPoint& op, double step);
DelayReport group_delay_fd(double delta, const OperatingPoint& op);

// Exact logarithmic derivative of the rational function in δ.
DelayReport group_delay_analytic(double delta, const OperatingPoint& op);

// `threads` = 0 uses hardware concurrency. Output order follows the grid.
// Throws ValidationError if the grid is empty or not strictly increasing.
SpectrumTable spectrum(std::span<const double> delta_grid, const OperatingPoint& op,
                       unsigned threads = 1);

WidthReport eit_width(const OperatingPoint& op);

// One row per power, steady state recomputed each time; drive's probe scale is kept.
std::vector<SweepRow> power_sweep(std::span<const double> powers, double delta,
                                  const SystemParams& params, const DriveParams& drive,
                                  unsigned threads = 1);

// n uniformly spaced points on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

// Removes 2π jumps between consecutive samples.
std::vector<double> unwrap_phase(std::span<const double> phase);

}  // namespace cavity_eit
