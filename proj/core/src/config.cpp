#include "cavity_eit/config.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "cavity_eit/constants.hpp"
#include "cavity_eit/error.hpp"

namespace cavity_eit {
namespace {

double read_number(const nlohmann::json& doc, const std::string& key) {
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ValidationError(key, "must be a number");
    return v.get<double>();
}

double& slot(ParameterSet& p, std::string_view canonical) {
    if (canonical == "cavity_length") return p.system.cavity_length;
    if (canonical == "wavelength") return p.system.wavelength;
    if (canonical == "mirror_mass") return p.system.mirror_mass;
    if (canonical == "mirror_freq") return p.system.mirror_freq;
    if (canonical == "mirror_damping") return p.system.mirror_damping;
    if (canonical == "cavity_decay") return p.system.cavity_decay;
    if (canonical == "effective_detuning") return p.system.effective_detuning;
    if (canonical == "pump_power") return p.drive.pump_power;
    return p.drive.probe_amplitude_scale;
}

struct Conversion {
    std::string_view key;
    std::string_view canonical;
    double (*to_si)(double);
};

constexpr double identity(double x) { return x; }

constexpr std::array kConversions{
    Conversion{"cavity_length", "cavity_length", identity},
    Conversion{"wavelength", "wavelength", identity},
    Conversion{"wavelength_nm", "wavelength", units::nm_to_m},
    Conversion{"mirror_mass", "mirror_mass", identity},
    Conversion{"mirror_mass_ng", "mirror_mass", units::ng_to_kg},
    Conversion{"mirror_freq", "mirror_freq", identity},
    Conversion{"mirror_freq_hz", "mirror_freq", units::hz_to_rad_s},
    Conversion{"mirror_damping", "mirror_damping", identity},
    Conversion{"cavity_decay", "cavity_decay", identity},
    Conversion{"effective_detuning", "effective_detuning", identity},
    Conversion{"pump_power", "pump_power", identity},
    Conversion{"pump_power_uw", "pump_power", units::uw_to_w},
    Conversion{"probe_amplitude_scale", "probe_amplitude_scale", identity},
};

}  // namespace

ParameterSet parameters_from_json(const nlohmann::json& doc, ParameterSet base,
                                  std::initializer_list<std::string_view> reserved) {
    if (!doc.is_object()) throw ValidationError("config", "top level must be a JSON object");

    std::array<std::string_view, kConversions.size()> seen_by{};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(reserved.begin(), reserved.end(), key) != reserved.end()) continue;
        const auto it = std::find_if(kConversions.begin(), kConversions.end(),
                                     [&](const Conversion& c) { return c.key == key; });
        if (it == kConversions.end()) throw ValidationError(key, "unknown configuration key");

        // Two spellings of the same quantity are ambiguous.
        for (std::size_t i = 0; i < kConversions.size(); ++i) {
            if (kConversions[i].canonical == it->canonical && !seen_by[i].empty())
                throw ValidationError(key, "conflicts with '" + std::string(seen_by[i]) + "'");
        }
        seen_by[static_cast<std::size_t>(it - kConversions.begin())] = it->key;
        slot(base, it->canonical) = it->to_si(read_number(doc, key));
    }
    base.system.validate();
    base.drive.validate();
    return base;
}

nlohmann::json parameters_to_json(const ParameterSet& p) {
    return nlohmann::json{
        {"cavity_length", p.system.cavity_length},
        {"wavelength", p.system.wavelength},
        {"mirror_mass", p.system.mirror_mass},
        {"mirror_freq", p.system.mirror_freq},
        {"mirror_damping", p.system.mirror_damping},
        {"cavity_decay", p.system.cavity_decay},
        {"effective_detuning", p.system.effective_detuning},
        {"pump_power", p.drive.pump_power},
        {"probe_amplitude_scale", p.drive.probe_amplitude_scale},
    };
}

}  // namespace cavity_eit
