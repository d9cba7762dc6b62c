#pragma once

#include <complex>

#include "cavity_eit/params.hpp"

namespace cavity_eit {

// Zeroth-order (probe-off) solution of the mean-field equations.
struct SteadyState {
    std::complex<double> cavity_amp;  // c₀
    double photon_number = 0.0;       // |c₀|²
    double mirror_displacement = 0.0; // q₀, m
    double alpha = 0.0;               // ħ g² |c₀|²
    double mirror_momentum = 0.0;     // p₀, always zero
};

SteadyState solve_steady(const SystemParams& params, const DerivedConstants& derived);

// Everything needed to evaluate the probe response at one pump power.
struct OperatingPoint {
    SystemParams system;
    DriveParams drive;
    DerivedConstants derived;
    SteadyState steady;
};

OperatingPoint make_operating_point(const SystemParams& params, const DriveParams& drive);

}  // namespace cavity_eit
