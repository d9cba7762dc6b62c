#include "cavity_eit/steady_state.hpp"

#include "cavity_eit/constants.hpp"

namespace cavity_eit {

SteadyState solve_steady(const SystemParams& params, const DerivedConstants& derived) {
    using namespace std::complex_literals;
    const double g = derived.coupling_constant;

    SteadyState s;
    s.cavity_amp = derived.drive_amplitude / (2.0 * params.cavity_decay + 1i * params.effective_detuning);
    s.photon_number = std::norm(s.cavity_amp);
    s.mirror_displacement =
        -kHbar * g * s.photon_number / (params.mirror_mass * params.mirror_freq * params.mirror_freq);
    s.alpha = kHbar * g * g * s.photon_number;
    s.mirror_momentum = 0.0;
    return s;
}

OperatingPoint make_operating_point(const SystemParams& params, const DriveParams& drive) {
    OperatingPoint op{params, drive, derive(params, drive), {}};
    op.steady = solve_steady(params, op.derived);
    return op;
}

}  // namespace cavity_eit
