#pragma once

namespace cavity_eit {

// Fixed physical constants of the cavity and the membrane.
// Angular quantities are rad/s. The effective detuning already contains the
// static radiation-pressure shift and is supplied directly.
struct SystemParams {
    double cavity_length = 0.0;       // m
    double wavelength = 0.0;          // m, coupling laser
    double mirror_mass = 0.0;         // kg
    double mirror_freq = 0.0;         // rad/s
    double mirror_damping = 0.0;      // rad/s
    double cavity_decay = 0.0;        // rad/s; the field decays at twice this rate
    double effective_detuning = 0.0;  // rad/s, any sign

    // Mechanical quality factor mirror_freq / mirror_damping. Not stored.
    double quality_factor() const { return mirror_freq / mirror_damping; }

    // Throws ValidationError naming the first bad field.
    void validate() const;
};

struct DriveParams {
    double pump_power = 0.0;             // W
    double probe_amplitude_scale = 1.0;  // dimensionless; only enters time-domain reconstruction

    void validate() const;
};

struct DerivedConstants {
    double coupling_freq = 0.0;      // rad/s, 2πc/λ
    double coupling_constant = 0.0;  // rad/(s·m), −ω_c/L
    double drive_amplitude = 0.0;    // 1/s, sqrt(2κ P_c / ħ ω_c)
};

struct ParameterSet {
    SystemParams system;
    DriveParams drive;
};

// Membrane-in-the-middle reference configuration: L = 6.7 cm, λ = 1064 nm,
// m = 40 ng, ω_m = 2π·134 kHz, γ_m = 0.76 rad/s, κ = ω_m/10, Δ = ω_m,
// P_c = 5 μW.
ParameterSet default_parameters();

// Validates both inputs, then evaluates the derived constants.
DerivedConstants derive(const SystemParams& params, const DriveParams& drive);

}  // namespace cavity_eit
