#pragma once

#include <initializer_list>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cavity_eit/params.hpp"

namespace cavity_eit {

// Overlays a JSON object onto `base`. Keys are the SystemParams/DriveParams
// field names in SI units, plus the convenience keys mirror_freq_hz,
// wavelength_nm, mirror_mass_ng and pump_power_uw. Giving both spellings of
// one quantity is an error, as is any key not listed here or in `reserved`.
// The result is validated. Throws ValidationError.
ParameterSet parameters_from_json(const nlohmann::json& doc, ParameterSet base,
                                  std::initializer_list<std::string_view> reserved = {});

// SI field names only; parameters_from_json(parameters_to_json(p), ...) == p.
nlohmann::json parameters_to_json(const ParameterSet& params);

}  // namespace cavity_eit
