#include <doctest.h>

#include <cmath>
#include <string>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/error.hpp"
#include "cavity_eit/params.hpp"

using namespace cavity_eit;

TEST_CASE("default parameters match the membrane-in-the-middle reference set") {
    const ParameterSet p = default_parameters();
    CHECK(p.system.cavity_length == 6.7e-2);
    CHECK(p.system.wavelength == doctest::Approx(1064e-9).epsilon(1e-15));
    CHECK(p.system.mirror_mass == doctest::Approx(40e-12).epsilon(1e-15));
    CHECK(p.system.mirror_freq == doctest::Approx(8.4194683116206457e5).epsilon(1e-14));
    CHECK(p.system.cavity_decay == doctest::Approx(8.4194683116206457e4).epsilon(1e-14));
    CHECK(p.system.mirror_damping == 0.76);
    CHECK(p.system.effective_detuning == p.system.mirror_freq);
    CHECK(p.drive.pump_power == doctest::Approx(5e-6).epsilon(1e-15));
    CHECK_NOTHROW(p.system.validate());
}

TEST_CASE("quality factor of the defaults is within 1% of 1.1e6") {
    const double q = default_parameters().system.quality_factor();
    CHECK(std::abs(q / 1.1e6 - 1.0) < 0.01);
}

TEST_CASE("derive evaluates coupling frequency, coupling constant and drive") {
    const ParameterSet p = default_parameters();
    const DerivedConstants d = derive(p.system, p.drive);
    // 2πc/λ and −ω_c/L by hand: 1.7703492173955385e15, −2.6423122647694604e16.
    CHECK(d.coupling_freq == doctest::Approx(1.7703492173955385e15).epsilon(1e-14));
    CHECK(d.coupling_constant == doctest::Approx(-2.6423122647694604e16).epsilon(1e-14));
    CHECK(d.coupling_constant < 0.0);
    // sqrt(2κ P / ħ ω_c) at 5 μW
    CHECK(d.drive_amplitude == doctest::Approx(2.1236100955631616e9).epsilon(1e-12));
}

TEST_CASE("zero pump gives zero drive and only zero pump does") {
    ParameterSet p = default_parameters();
    p.drive.pump_power = 0.0;
    CHECK(derive(p.system, p.drive).drive_amplitude == 0.0);
    p.drive.pump_power = 1e-15;
    CHECK(derive(p.system, p.drive).drive_amplitude > 0.0);
}

TEST_CASE("derive scaling laws are exact") {
    ParameterSet p = default_parameters();
    const DerivedConstants base = derive(p.system, p.drive);

    SUBCASE("halving L doubles |g|") {
        SystemParams half = p.system;
        half.cavity_length /= 2.0;
        CHECK(derive(half, p.drive).coupling_constant == 2.0 * base.coupling_constant);
    }
    SUBCASE("four times the power doubles the drive") {
        DriveParams quad = p.drive;
        quad.pump_power *= 4.0;
        CHECK(derive(p.system, quad).drive_amplitude == 2.0 * base.drive_amplitude);
    }
}

TEST_CASE("validation names the offending field") {
    const ParameterSet ok = default_parameters();
    const auto field_of = [](const SystemParams& s) -> std::string {
        try {
            s.validate();
        } catch (const ValidationError& e) {
            return e.field();
        }
        return "";
    };

    SystemParams s = ok.system;
    s.mirror_mass = 0.0;
    CHECK(field_of(s) == "mirror_mass");
    s = ok.system;
    s.cavity_length = -1.0;
    CHECK(field_of(s) == "cavity_length");
    s = ok.system;
    s.mirror_freq = std::nan("");
    CHECK(field_of(s) == "mirror_freq");
    s = ok.system;
    s.mirror_damping = s.mirror_freq;  // overdamped
    CHECK(field_of(s) == "mirror_damping");
    s = ok.system;
    s.effective_detuning = -3.0 * s.mirror_freq;  // any finite sign allowed
    CHECK(field_of(s).empty());

    DriveParams d = ok.drive;
    d.pump_power = -1e-6;
    CHECK_THROWS_AS(derive(ok.system, d), ValidationError);
}

TEST_CASE("unit conversions are exact") {
    CHECK(units::hz_to_rad_s(134e3) == kTwoPi * 134e3);
    // Correctly rounded: the nearest double to the decimal result.
    CHECK(units::nm_to_m(1064.0) == 1.064e-6);
    CHECK(units::ng_to_kg(40.0) == 4e-11);
    CHECK(units::uw_to_w(5.0) == 5e-6);
    CHECK(units::w_to_uw(5e-6) == 5.0);
    for (int k = 1; k <= 500; ++k)
        CHECK(units::uw_to_w(static_cast<double>(k)) == std::stod(std::to_string(k) + "e-6"));
    CHECK(units::rad_s_to_hz(units::hz_to_rad_s(1.0)) == 1.0);
}
