#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cavity_eit/steady_state.hpp"

namespace cavity_eit {

// (q₊, c₊): slowly varying sideband amplitudes of mirror and field.
using SidebandState = Eigen::Vector2cd;

// Generator of dV/dt = −M V + (0, ε_p(t)).
//
//   M = | A  B |    A = (−d + iħg²|c₀|²)/s      B = ħ g c₀* / (m(γ_m − iδ))
//       | C  D |    C = i g c₀                 D = 2κ + i(Δ − δ)
//
//   s = m(γ_m − iδ)(2κ − i(Δ + δ)),  d = m(2κ − i(Δ + δ))(iδγ_m + δ² − ω_m²)
//
// With this d the constant-forcing fixed point M⁻¹(0, 1) is exactly c_plus(δ).
struct SystemMatrix {
    Eigen::Matrix2cd m;
    double delta = 0.0;

    std::complex<double> a() const { return m(0, 0); }
    std::complex<double> b() const { return m(0, 1); }
    std::complex<double> c() const { return m(1, 0); }
    std::complex<double> d() const { return m(1, 1); }

    Eigen::Vector2cd eigenvalues() const;
    double spectral_radius() const;
    // Smallest eigenvalue real part; positive for a stable system.
    double slowest_decay_rate() const;
    double relaxation_time() const { return 1.0 / slowest_decay_rate(); }
};

// Throws InstabilityError if an eigenvalue has non-positive real part.
SystemMatrix build_matrix(double delta, const OperatingPoint& op);

// Fixed point M⁻¹ (0, forcing) for constant probe forcing.
SidebandState steady_response(const SystemMatrix& matrix, std::complex<double> forcing);

enum class PulseShape { sech, gaussian, rectangle, constant };

PulseShape parse_pulse_shape(std::string_view name);  // throws ValidationError
std::string_view to_string(PulseShape shape);

// ε_p(t) = amplitude · envelope((t − center) / width)
//   sech:      sech(x)
//   gaussian:  exp(−x²/2)
//   rectangle: 1 for |x| ≤ 1/2, else 0
//   constant:  1
struct PulseSpec {
    PulseShape shape = PulseShape::sech;
    double amplitude = 1.0;  // 1/s
    double width = 0.0;      // s
    double center = 0.0;     // s

    void validate() const;
    double operator()(double t) const;
};

// Sech kick of width 0.1 · 2π/ω_m centered at t = 0.
PulseSpec default_pulse(const SystemParams& params);

using Forcing = std::function<std::complex<double>(double)>;

struct TimeSpan {
    double start = 0.0;
    double stop = 0.0;
};

// Starts 20 widths before the pulse (constant forcing starts at `center`) and
// runs until 20 widths after it or 10 relaxation times, whichever is later.
TimeSpan default_span(const PulseSpec& pulse, const SystemMatrix& matrix);

// Largest RK4 step allowed: 0.1 / spectral radius.
double max_stable_step(const SystemMatrix& matrix);

// min(max_stable_step, width / 100); constant forcing uses max_stable_step.
double suggest_time_step(const SystemMatrix& matrix, const PulseSpec& pulse);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::complex<double>> q_plus;
    std::vector<std::complex<double>> c_plus;
    std::vector<double> q_total;  // filled by reconstruct_displacement
    double dt = 0.0;              // step actually used
    std::size_t steps = 0;
};

enum class Integrator { rk4, exponential };

Integrator parse_integrator(std::string_view name);
std::string_view to_string(Integrator integrator);

inline constexpr std::size_t kDefaultSamples = 4096;

// Both integrators start from V(span.start) = 0 and record `samples` equally
// spaced states including both endpoints. The step actually taken is the
// largest h ≤ dt that puts a whole number of steps between samples.
//
// Classical RK4. Throws StepSizeError when dt exceeds max_stable_step.
Trajectory integrate_rk4(const SystemMatrix& matrix, const Forcing& forcing, TimeSpan span,
                         double dt, std::size_t samples = kDefaultSamples);

// Exact propagation of the homogeneous part with the forcing linearly
// interpolated over each step (second order in dt through the forcing).
Trajectory integrate_exponential(const SystemMatrix& matrix, const Forcing& forcing,
                                 TimeSpan span, double dt,
                                 std::size_t samples = kDefaultSamples);

Trajectory integrate(const SystemMatrix& matrix, const PulseSpec& pulse, TimeSpan span, double dt,
                     std::size_t samples = kDefaultSamples, Integrator method = Integrator::rk4);

// q(t) = q₀ + 2 Re[probe_scale · q₊(t) e^{−iδt}]
Trajectory reconstruct_displacement(Trajectory traj, const SteadyState& steady, double delta,
                                    double probe_scale = 1.0);

}  // namespace cavity_eit
