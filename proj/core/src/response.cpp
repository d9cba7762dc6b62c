#include "cavity_eit/response.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cavity_eit/error.hpp"
#include "cavity_eit/parallel.hpp"

namespace cavity_eit {
namespace {

using cd = std::complex<double>;
using namespace std::complex_literals;

// Polynomial pieces of c₊ = num / den and their δ-derivatives.
struct Rational {
    cd num, den, dnum, dden;
};

// χ(δ) = m(δ² − ω_m² + iγ_m δ), with the difference of squares factored to
// keep precision near δ = ω_m.
cd mechanical_factor(double delta, const SystemParams& p) {
    return p.mirror_mass *
           cd((delta - p.mirror_freq) * (delta + p.mirror_freq), p.mirror_damping * delta);
}

Rational rational_parts(double delta, const OperatingPoint& op) {
    const auto& p = op.system;
    const double kappa2 = 2.0 * p.cavity_decay;
    const double det = p.effective_detuning;
    const double alpha = op.steady.alpha;

    const cd chi = mechanical_factor(delta, p);
    const cd dchi = p.mirror_mass * cd(2.0 * delta, p.mirror_damping);

    // (2κ − iδ)² + Δ² = (2κ − i(δ − Δ))(2κ − i(δ + Δ))
    const cd lower = kappa2 - 1i * (delta - det);
    const cd upper = kappa2 - 1i * (delta + det);

    Rational r;
    r.num = chi * upper - 1i * alpha;
    r.dnum = dchi * upper - 1i * chi;
    r.den = chi * lower * upper + 2.0 * det * alpha;
    r.dden = dchi * lower * upper - 1i * chi * (lower + upper);
    return r;
}

double principal_arg(cd z) {
    const double a = std::arg(z);
    return a == -std::numbers::pi ? std::numbers::pi : a;
}

void check_grid(std::span<const double> grid, const char* field) {
    if (grid.empty()) throw ValidationError(field, "grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw ValidationError(field, "grid value is not finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ValidationError(field, "grid must be strictly increasing");
    }
}

std::optional<double> delay_from_log_derivative(cd log_derivative, cd amplitude) {
    if (std::abs(amplitude) < kMinDelayAmplitude) return std::nullopt;
    return log_derivative.imag();
}

}  // namespace

double DelayReport::transmission_delay() const {
    if (!tau_t) throw UndefinedDelayError("transmission delay undefined: |eps_t| below threshold");
    return *tau_t;
}

double DelayReport::reflection_delay() const {
    if (!tau_r) throw UndefinedDelayError("reflection delay undefined: |eps_r| below threshold");
    return *tau_r;
}

cd c_plus(double delta, const OperatingPoint& op) {
    const Rational r = rational_parts(delta, op);
    if (!(std::abs(r.den) >= 1e-300))
        throw DegenerateDenominatorError("c_plus denominator vanishes at delta = " +
                                         std::to_string(delta));
    return r.num / r.den;
}

ProbeResponse probe_response(double delta, const OperatingPoint& op) {
    ProbeResponse out;
    out.delta = delta;
    out.c_plus = c_plus(delta, op);
    out.eps_t = 2.0 * op.system.cavity_decay * out.c_plus;
    out.eps_r = out.eps_t - 1.0;
    if (out.eps_t == cd(0.0))
        throw UndefinedPhaseError("transmitted amplitude is exactly zero");
    out.phase_t = principal_arg(out.eps_t);
    // A vanishing reflection (empty cavity on resonance) has no phase.
    out.phase_r = out.eps_r == cd(0.0) ? std::numeric_limits<double>::quiet_NaN()
                                       : principal_arg(out.eps_r);
    return out;
}

double default_fd_step(const SystemParams& params) { return 1e-6 * params.mirror_freq; }

DelayReport group_delay_fd(double delta, const OperatingPoint& op, double step) {
    if (!(step > 0.0) || !std::isfinite(step))
        throw ValidationError("fd_step", "must be finite and > 0");
    const double two_kappa = 2.0 * op.system.cavity_decay;
    const auto eps_t = [&](double d) { return two_kappa * c_plus(d, op); };
    const auto central = [&](double h) { return (eps_t(delta + h) - eps_t(delta - h)) / (2.0 * h); };

    // One Richardson halving cancels the h² term.
    const cd slope = (4.0 * central(0.5 * step) - central(step)) / 3.0;
    const cd t = eps_t(delta);
    const cd r = t - 1.0;

    DelayReport out;
    out.method = DelayMethod::finite_difference;
    out.fd_step = step;
    if (std::abs(t) >= kMinDelayAmplitude) out.tau_t = (slope / t).imag();
    if (std::abs(r) >= kMinDelayAmplitude) out.tau_r = (slope / r).imag();
    return out;
}

DelayReport group_delay_fd(double delta, const OperatingPoint& op) {
    return group_delay_fd(delta, op, default_fd_step(op.system));
}

DelayReport group_delay_analytic(double delta, const OperatingPoint& op) {
    const Rational r = rational_parts(delta, op);
    if (!(std::abs(r.den) >= 1e-300))
        throw DegenerateDenominatorError("c_plus denominator vanishes at delta = " +
                                         std::to_string(delta));
    const cd eps_t = 2.0 * op.system.cavity_decay * r.num / r.den;
    const cd eps_r = eps_t - 1.0;

    DelayReport out;
    out.method = DelayMethod::analytic;
    if (std::abs(eps_t) < kMinDelayAmplitude) {
        // ε_R = −1 here, so ε_R'/ε_R = −ε_T' with ε_T' = 2κ num'/den.
        out.tau_r = (-2.0 * op.system.cavity_decay * r.dnum / r.den).imag();
        return out;
    }
    const cd log_dt = r.dnum / r.num - r.dden / r.den;
    out.tau_t = log_dt.imag();
    out.tau_r = delay_from_log_derivative(log_dt * eps_t / eps_r, eps_r);
    return out;
}

SpectrumTable spectrum(std::span<const double> delta_grid, const OperatingPoint& op,
                       unsigned threads) {
    check_grid(delta_grid, "delta_grid");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    SpectrumTable table;
    table.power = op.drive.pump_power;
    table.points.resize(delta_grid.size());
    parallel_for(delta_grid.size(), threads, [&](std::size_t i) {
        SpectrumPoint& pt = table.points[i];
        pt.delta = delta_grid[i];
        try {
            const ProbeResponse resp = probe_response(pt.delta, op);
            const DelayReport delay = group_delay_analytic(pt.delta, op);
            pt.eps_t = resp.eps_t;
            pt.eps_r = resp.eps_r;
            pt.transmission = resp.transmission();
            pt.reflection = resp.reflection();
            pt.phase_t = resp.phase_t;
            pt.tau_t = delay.tau_t;
            pt.tau_r = delay.tau_r;
        } catch (const NumericalError&) {
            pt.valid = false;
            pt.eps_t = pt.eps_r = cd(nan, nan);
            pt.transmission = pt.reflection = pt.phase_t = nan;
        }
    });
    return table;
}

WidthReport eit_width(const OperatingPoint& op) {
    const auto& p = op.system;
    WidthReport out;
    out.power = op.drive.pump_power;
    out.gamma_width = 0.5 * p.mirror_damping +
                      op.steady.alpha / (4.0 * p.mirror_mass * p.mirror_freq * p.cavity_decay);
    return out;
}

std::vector<SweepRow> power_sweep(std::span<const double> powers, double delta,
                                  const SystemParams& params, const DriveParams& drive,
                                  unsigned threads) {
    if (powers.empty()) throw ValidationError("powers", "sweep is empty");
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!std::isfinite(powers[i]) || powers[i] < 0.0)
            throw ValidationError("powers", "each power must be finite and >= 0");
        if (i > 0 && powers[i] < powers[i - 1])
            throw ValidationError("powers", "powers must be sorted ascending");
    }
    params.validate();

    std::vector<SweepRow> rows(powers.size());
    parallel_for(powers.size(), threads, [&](std::size_t i) {
        DriveParams d = drive;
        d.pump_power = powers[i];
        const OperatingPoint op = make_operating_point(params, d);
        const DelayReport delay = group_delay_analytic(delta, op);
        rows[i] = SweepRow{powers[i], delay.tau_t, delay.tau_r, eit_width(op).gamma_width};
    });
    return rows;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    if (n == 0) throw ValidationError("grid_n", "must be >= 1");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("grid", "bounds must be finite");
    if (n == 1) return {lo};
    if (!(hi > lo)) throw ValidationError("grid_max", "must exceed grid_min");
    std::vector<double> g(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
    g.back() = hi;
    return g;
}

std::vector<double> unwrap_phase(std::span<const double> phase) {
    std::vector<double> out(phase.begin(), phase.end());
    double offset = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double jump = phase[i] - phase[i - 1];
        if (jump > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
        else if (jump < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
        out[i] = phase[i] + offset;
    }
    return out;
}

}  // namespace cavity_eit
