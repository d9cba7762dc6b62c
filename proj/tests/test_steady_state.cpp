#include <doctest.h>

#include <cmath>
#include <random>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/steady_state.hpp"
#include "oracle.hpp"

using namespace cavity_eit;

namespace {

OperatingPoint at_power(double watts) {
    ParameterSet p = default_parameters();
    p.drive.pump_power = watts;
    return make_operating_point(p.system, p.drive);
}

}  // namespace

TEST_CASE("zero drive gives the trivial steady state") {
    const SteadyState s = at_power(0.0).steady;
    CHECK(s.cavity_amp == std::complex<double>(0.0));
    CHECK(s.photon_number == 0.0);
    CHECK(s.mirror_displacement == 0.0);
    CHECK(s.alpha == 0.0);
    CHECK(s.mirror_momentum == 0.0);
}

TEST_CASE("5 uW steady state agrees with the independent evaluation") {
    const SteadyState s = at_power(5e-6).steady;
    oracle::Inputs in;
    in.power = 5e-6L;
    CHECK(s.photon_number == doctest::Approx(static_cast<double>(oracle::photon_number(in))).epsilon(1e-12));
    CHECK(s.alpha == doctest::Approx(static_cast<double>(oracle::alpha(in))).epsilon(1e-12));
    // Frozen from the same oracle: |c₀|² ≈ 6.1e6, α ≈ 4.5e5.
    CHECK(s.photon_number == doctest::Approx(6117118.44604172).epsilon(1e-12));
    CHECK(s.alpha == doctest::Approx(450392.6886774515).epsilon(1e-12));
    // g < 0, so the membrane is pushed to positive q.
    CHECK(s.mirror_displacement > 0.0);
}

TEST_CASE("four times the power gives exactly four times alpha") {
    CHECK(at_power(4.0 * 1.3e-6).steady.alpha == 4.0 * at_power(1.3e-6).steady.alpha);
}

TEST_CASE("steady-state identities hold over random inputs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> power(0.0, 1e-5);
    std::uniform_real_distribution<double> det(-3.0, 3.0);
    std::uniform_real_distribution<double> scale(0.0, 8.0);
    for (int trial = 0; trial < 200; ++trial) {
        ParameterSet p = default_parameters();
        p.system.effective_detuning = det(rng) * p.system.mirror_freq;
        p.drive.pump_power = power(rng);
        const OperatingPoint op = make_operating_point(p.system, p.drive);
        const auto& s = op.steady;
        const double k = p.system.cavity_decay, d = p.system.effective_detuning;
        const double eps = op.derived.drive_amplitude;

        CHECK(s.photon_number == std::norm(s.cavity_amp));
        CHECK(s.photon_number * (4 * k * k + d * d) == doctest::Approx(eps * eps).epsilon(1e-12));
        const double lhs = s.mirror_displacement * p.system.mirror_mass * p.system.mirror_freq * p.system.mirror_freq;
        const double rhs = kHbar * op.derived.coupling_constant * s.photon_number;
        CHECK(lhs + rhs == doctest::Approx(0.0).epsilon(1e-12).scale(std::abs(rhs)));
        CHECK(s.alpha >= 0.0);
        CHECK((s.alpha == 0.0) == (s.photon_number == 0.0));
        if (s.photon_number > 0.0) CHECK(s.mirror_displacement > 0.0);

        // α is linear in power at fixed Δ.
        const double a = scale(rng);
        DriveParams scaled = p.drive;
        scaled.pump_power *= a;
        const double alpha_scaled = make_operating_point(p.system, scaled).steady.alpha;
        CHECK(alpha_scaled == doctest::Approx(a * s.alpha).epsilon(1e-13).scale(1.0));
    }
}
