#pragma once

// JSON scenario configuration. Speeds are given in km/h and converted to
// km/min on load; times are minutes.
//
//   {
//     "distance_km": 3, "walk_speed_kmh": 6, "bus_speed_kmh": 30,
//     "model": {"kind": "uniform", "headway_min": 30},
//     "p_catch": 0.8, "d1_km": 1.5, "t_wait_min": 0
//   }
//
// Model kinds and their fields:
//   uniform           headway_min
//   exponential       rate_per_min
//   late_bus_mixture  still_coming_prob, late_window_min, next_headway_offset_min
//   piecewise         knots: [[t_min, density], ...]

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "walkwait/arrivals.hpp"
#include "walkwait/expectation.hpp"

namespace walkwait {

/// Invalid or unreadable configuration. The message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  Scenario scenario;
  ArrivalModel model;
  std::optional<double> p_catch;
  std::optional<double> d1_km;
  std::optional<double> t_wait_min;
};

ArrivalModel parse_model(const nlohmann::json& j);
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Model parameters in configuration units, with the `kind` discriminator.
nlohmann::json model_to_json(const ArrivalModel& model);

}  // namespace walkwait
