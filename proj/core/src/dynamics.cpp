#include "cavity_eit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/error.hpp"

namespace cavity_eit {
namespace {

using cd = std::complex<double>;
using namespace std::complex_literals;

struct StepGrid {
    std::size_t steps_per_sample = 0;
    std::size_t steps = 0;
    double h = 0.0;
    double length = 0.0;
};

StepGrid make_grid(TimeSpan span, double dt, std::size_t samples) {
    if (!std::isfinite(span.start) || !std::isfinite(span.stop) || !(span.stop > span.start))
        throw ValidationError("t_span", "stop must exceed start");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be finite and > 0");
    if (samples < 2) throw ValidationError("samples", "need at least 2 output samples");

    StepGrid g;
    g.length = span.stop - span.start;
    const double intervals = static_cast<double>(samples - 1);
    // Shave a few ulps so an exact ratio does not round up to an extra step.
    const double ratio = g.length / (dt * intervals);
    g.steps_per_sample = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12))));
    g.steps = g.steps_per_sample * (samples - 1);
    g.h = g.length / static_cast<double>(g.steps);
    return g;
}

Trajectory prepare(const StepGrid& g, TimeSpan span, std::size_t samples) {
    Trajectory t;
    t.times.resize(samples);
    t.q_plus.resize(samples);
    t.c_plus.resize(samples);
    t.dt = g.h;
    t.steps = g.steps;
    for (std::size_t k = 0; k < samples; ++k)
        t.times[k] = span.start + g.length * static_cast<double>(k) / static_cast<double>(samples - 1);
    t.times.back() = span.stop;
    return t;
}

// q₊ is in meters and c₊ is dimensionless, so B and C differ by ~30 orders of
// magnitude. The similarity diag(σ, 1) with σ = sqrt(|B/C|) equalizes them.
double balance_scale(const Eigen::Matrix2cd& m) {
    const double b = std::abs(m(0, 1)), c = std::abs(m(1, 0));
    return (b > 0.0 && c > 0.0) ? std::sqrt(b / c) : 1.0;
}

Eigen::Matrix2cd balanced(const Eigen::Matrix2cd& m, double sigma) {
    Eigen::Matrix2cd out = m;
    out(0, 1) /= sigma;
    out(1, 0) *= sigma;
    return out;
}

void record(Trajectory& t, std::size_t k, const SidebandState& v) {
    t.q_plus[k] = v(0);
    t.c_plus[k] = v(1);
}

}  // namespace

Eigen::Vector2cd SystemMatrix::eigenvalues() const {
    return Eigen::ComplexEigenSolver<Eigen::Matrix2cd>(balanced(m, balance_scale(m)), false).eigenvalues();
}

double SystemMatrix::spectral_radius() const { return eigenvalues().cwiseAbs().maxCoeff(); }

double SystemMatrix::slowest_decay_rate() const { return eigenvalues().real().minCoeff(); }

SystemMatrix build_matrix(double delta, const OperatingPoint& op) {
    const auto& p = op.system;
    const double g = op.derived.coupling_constant;
    const cd c0 = op.steady.cavity_amp;
    const double det = p.effective_detuning;
    const double kappa2 = 2.0 * p.cavity_decay;

    const cd mech = p.mirror_mass * (p.mirror_damping - 1i * delta);
    const cd upper = kappa2 - 1i * (det + delta);
    const cd s = mech * upper;
    const cd d_term = p.mirror_mass * upper *
                      cd((delta - p.mirror_freq) * (delta + p.mirror_freq), delta * p.mirror_damping);

    SystemMatrix out;
    out.delta = delta;
    out.m(0, 0) = (-d_term + 1i * op.steady.alpha) / s;
    out.m(0, 1) = kHbar * g * std::conj(c0) / mech;
    out.m(1, 0) = 1i * g * c0;
    out.m(1, 1) = kappa2 + 1i * (det - delta);

    if (!out.m.allFinite()) throw InstabilityError("system matrix has non-finite entries");
    const double rate = out.slowest_decay_rate();
    if (!(rate > 0.0))
        throw InstabilityError("system matrix has an eigenvalue with real part " +
                               std::to_string(rate) + " <= 0 at delta = " + std::to_string(delta));
    return out;
}

SidebandState steady_response(const SystemMatrix& matrix, cd forcing) {
    return matrix.m.partialPivLu().solve(SidebandState(0.0, forcing));
}

PulseShape parse_pulse_shape(std::string_view name) {
    if (name == "sech") return PulseShape::sech;
    if (name == "gaussian") return PulseShape::gaussian;
    if (name == "rectangle") return PulseShape::rectangle;
    if (name == "constant") return PulseShape::constant;
    throw ValidationError("pulse_shape", "unknown shape '" + std::string(name) + "'");
}

std::string_view to_string(PulseShape shape) {
    switch (shape) {
        case PulseShape::sech: return "sech";
        case PulseShape::gaussian: return "gaussian";
        case PulseShape::rectangle: return "rectangle";
        case PulseShape::constant: return "constant";
    }
    return "sech";
}

void PulseSpec::validate() const {
    if (!(width > 0.0) || !std::isfinite(width)) throw ValidationError("pulse_width", "must be finite and > 0");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw ValidationError("pulse_amp", "must be finite and >= 0");
    if (!std::isfinite(center)) throw ValidationError("pulse_center", "must be finite");
}

double PulseSpec::operator()(double t) const {
    const double x = (t - center) / width;
    switch (shape) {
        case PulseShape::sech: return amplitude / std::cosh(x);
        case PulseShape::gaussian: return amplitude * std::exp(-0.5 * x * x);
        case PulseShape::rectangle: return std::abs(x) <= 0.5 ? amplitude : 0.0;
        case PulseShape::constant: return amplitude;
    }
    return 0.0;
}

PulseSpec default_pulse(const SystemParams& params) {
    return PulseSpec{PulseShape::sech, 1.0, 0.1 * kTwoPi / params.mirror_freq, 0.0};
}

TimeSpan default_span(const PulseSpec& pulse, const SystemMatrix& matrix) {
    pulse.validate();
    const double settle = 10.0 * matrix.relaxation_time();
    if (pulse.shape == PulseShape::constant) return {pulse.center, pulse.center + settle};
    const double lead = 20.0 * pulse.width;
    return {pulse.center - lead, pulse.center + std::max(lead, settle)};
}

double max_stable_step(const SystemMatrix& matrix) { return 0.1 / matrix.spectral_radius(); }

double suggest_time_step(const SystemMatrix& matrix, const PulseSpec& pulse) {
    const double stable = max_stable_step(matrix);
    if (pulse.shape == PulseShape::constant) return stable;
    return std::min(stable, pulse.width / 100.0);
}

Trajectory integrate_rk4(const SystemMatrix& matrix, const Forcing& forcing, TimeSpan span,
                         double dt, std::size_t samples) {
    const double limit = max_stable_step(matrix);
    if (dt > limit * (1.0 + 1e-12))
        throw StepSizeError("dt = " + std::to_string(dt) + " s exceeds the RK4 stability margin; use dt <= " +
                                std::to_string(limit) + " s",
                            limit);
    const StepGrid g = make_grid(span, dt, samples);
    Trajectory traj = prepare(g, span, samples);

    const Eigen::Matrix2cd neg = -matrix.m;
    const double h = g.h;
    const auto rhs = [&](const SidebandState& v, cd f) {
        SidebandState out = neg * v;
        out(1) += f;
        return out;
    };

    SidebandState v = SidebandState::Zero();
    record(traj, 0, v);
    cd f0 = forcing(span.start);
    for (std::size_t n = 0; n < g.steps; ++n) {
        const double t = span.start + h * static_cast<double>(n);
        const cd f_mid = forcing(t + 0.5 * h);
        const cd f1 = forcing(span.start + h * static_cast<double>(n + 1));

        const SidebandState k1 = rhs(v, f0);
        const SidebandState k2 = rhs(v + 0.5 * h * k1, f_mid);
        const SidebandState k3 = rhs(v + 0.5 * h * k2, f_mid);
        const SidebandState k4 = rhs(v + h * k3, f1);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        f0 = f1;

        if ((n + 1) % g.steps_per_sample == 0) record(traj, (n + 1) / g.steps_per_sample, v);
    }
    return traj;
}

Trajectory integrate_exponential(const SystemMatrix& matrix, const Forcing& forcing,
                                 TimeSpan span, double dt, std::size_t samples) {
    const StepGrid g = make_grid(span, dt, samples);
    Trajectory traj = prepare(g, span, samples);
    const double h = g.h;

    // exp([[X, I, 0], [0, 0, I], [0, 0, 0]]) holds e^X, φ₁(X), φ₂(X) in its
    // first block row, with X = −hM computed in balanced coordinates.
    const double sigma = balance_scale(matrix.m);
    Eigen::Matrix<cd, 6, 6> aug = Eigen::Matrix<cd, 6, 6>::Zero();
    aug.block<2, 2>(0, 0) = -h * balanced(matrix.m, sigma);
    aug.block<2, 2>(0, 2) = Eigen::Matrix2cd::Identity();
    aug.block<2, 2>(2, 4) = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix<cd, 6, 6> e = aug.exp();

    // Back to physical coordinates: f(M) = S f(M') S⁻¹ with S = diag(σ, 1).
    const Eigen::Matrix2cd propagator = balanced(e.block<2, 2>(0, 0), 1.0 / sigma);
    const Eigen::Matrix2cd phi1 = e.block<2, 2>(0, 2);
    const Eigen::Matrix2cd phi2 = e.block<2, 2>(0, 4);
    // Forcing enters only the field row, so only the second columns matter.
    SidebandState w_start = h * (phi1 - phi2).col(1);
    SidebandState w_end = h * phi2.col(1);
    w_start(0) *= sigma;
    w_end(0) *= sigma;

    SidebandState v = SidebandState::Zero();
    record(traj, 0, v);
    cd f0 = forcing(span.start);
    for (std::size_t n = 0; n < g.steps; ++n) {
        const cd f1 = forcing(span.start + h * static_cast<double>(n + 1));
        v = propagator * v + w_start * f0 + w_end * f1;
        f0 = f1;
        if ((n + 1) % g.steps_per_sample == 0) record(traj, (n + 1) / g.steps_per_sample, v);
    }
    return traj;
}

Trajectory integrate(const SystemMatrix& matrix, const PulseSpec& pulse, TimeSpan span, double dt,
                     std::size_t samples, Integrator method) {
    pulse.validate();
    const Forcing forcing = [pulse](double t) { return cd(pulse(t), 0.0); };
    return method == Integrator::rk4 ? integrate_rk4(matrix, forcing, span, dt, samples)
                                     : integrate_exponential(matrix, forcing, span, dt, samples);
}

Integrator parse_integrator(std::string_view name) {
    if (name == "rk4") return Integrator::rk4;
    if (name == "exponential") return Integrator::exponential;
    throw ValidationError("integrator", "unknown integrator '" + std::string(name) + "'");
}

std::string_view to_string(Integrator integrator) {
    return integrator == Integrator::rk4 ? "rk4" : "exponential";
}

Trajectory reconstruct_displacement(Trajectory traj, const SteadyState& steady, double delta,
                                    double probe_scale) {
    traj.q_total.resize(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const cd rotating = std::polar(1.0, -delta * traj.times[k]);
        traj.q_total[k] = steady.mirror_displacement + 2.0 * (probe_scale * traj.q_plus[k] * rotating).real();
    }
    return traj;
}

}  // namespace cavity_eit
