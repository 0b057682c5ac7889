#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "chiralwg/cavity.hpp"
#include "chiralwg/params.hpp"
#include "json.hpp"

namespace chiralwg {

struct Scenario {
  EmitterConfig emitter;
  EnsembleConfig ensemble;
  DriveConfig drive;
  std::optional<CavityConfig> cavity;

  bool operator==(const Scenario&) const = default;
};

// Missing keys keep their defaults; unknown keys and wrong types are errors.
// The detuning grid is either an explicit array or {start, stop, points}.
// Every failure throws InvalidParameter carrying the JSON path of the field.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(std::string_view text);

// SHA-256 of the canonical serialization.
std::string scenario_digest(const Scenario& scenario);

}  // namespace chiralwg
