#pragma once

#include "aklt/criterion.hpp"
#include "aklt/eigensolve.hpp"

#include <nlohmann/json.hpp>

namespace aklt {

nlohmann::json to_json(const SpectralResult& r);
SpectralResult spectral_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CoverageReport& r);
nlohmann::json to_json(const CriterionReport& r);

}  // namespace aklt
