#include "cavity_eit/params.hpp"

#include <cmath>
#include <string>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/error.hpp"

namespace cavity_eit {
namespace {

void require_positive(const char* field, double value) {
    if (!std::isfinite(value) || value <= 0.0)
        throw ValidationError(field, "must be finite and > 0, got " + std::to_string(value));
}

}  // namespace

void SystemParams::validate() const {
    require_positive("cavity_length", cavity_length);
    require_positive("wavelength", wavelength);
    require_positive("mirror_mass", mirror_mass);
    require_positive("mirror_freq", mirror_freq);
    require_positive("mirror_damping", mirror_damping);
    require_positive("cavity_decay", cavity_decay);
    if (!std::isfinite(effective_detuning))
        throw ValidationError("effective_detuning", "must be finite");
    if (mirror_damping >= mirror_freq)
        throw ValidationError("mirror_damping", "must be below mirror_freq (underdamped mirror)");
}

void DriveParams::validate() const {
    if (!std::isfinite(pump_power) || pump_power < 0.0)
        throw ValidationError("pump_power", "must be finite and >= 0");
    if (!std::isfinite(probe_amplitude_scale) || probe_amplitude_scale < 0.0)
        throw ValidationError("probe_amplitude_scale", "must be finite and >= 0");
}

ParameterSet default_parameters() {
    ParameterSet p;
    p.system.cavity_length = 6.7e-2;
    p.system.wavelength = units::nm_to_m(1064.0);
    p.system.mirror_mass = units::ng_to_kg(40.0);
    p.system.mirror_freq = units::hz_to_rad_s(134e3);
    // 0.76 is read as rad/s: ω_m / Q with Q = 1.1e6 gives 0.765 rad/s.
    p.system.mirror_damping = 0.76;
    p.system.cavity_decay = p.system.mirror_freq / 10.0;
    p.system.effective_detuning = p.system.mirror_freq;
    p.drive.pump_power = units::uw_to_w(5.0);
    p.drive.probe_amplitude_scale = 1.0;
    return p;
}

DerivedConstants derive(const SystemParams& params, const DriveParams& drive) {
    params.validate();
    drive.validate();
    DerivedConstants out;
    out.coupling_freq = kTwoPi * kSpeedOfLight / params.wavelength;
    out.coupling_constant = -out.coupling_freq / params.cavity_length;
    out.drive_amplitude =
        std::sqrt(2.0 * params.cavity_decay * drive.pump_power / (kHbar * out.coupling_freq));
    return out;
}

}  // namespace cavity_eit
