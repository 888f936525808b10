#include "walkwait/config.hpp"

#include <cmath>
#include <fstream>

namespace walkwait {
namespace {

using nlohmann::json;

double number(const json& j, const std::string& field, const std::string& where) {
  if (!j.is_object() || !j.contains(field))
    throw ConfigError("config: missing field '" + where + field + "'");
  const auto& v = j.at(field);
  if (!v.is_number())
    throw ConfigError("config: field '" + where + field + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    throw ConfigError("config: field '" + where + field + "' must be finite");
  return x;
}

double positive(const json& j, const std::string& field, const std::string& where) {
  const double x = number(j, field, where);
  if (!(x > 0.0))
    throw ConfigError("config: field '" + where + field + "' must be > 0");
  return x;
}

std::optional<double> optional_number(const json& j, const std::string& field) {
  if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
  return number(j, field, "");
}

template <typename Build>
ArrivalModel guarded(const std::string& kind, Build&& build) {
  try {
    return build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config: field 'model' (" + kind + "): " + e.what());
  }
}

}  // namespace

ArrivalModel parse_model(const json& j) {
  if (!j.is_object()) throw ConfigError("config: field 'model' must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("config: missing field 'model.kind'");
  const auto kind = j.at("kind").get<std::string>();

  if (kind == "uniform") {
    const double T = positive(j, "headway_min", "model.");
    return guarded(kind, [&] { return ArrivalModel(Uniform(T)); });
  }
  if (kind == "exponential") {
    const double r = positive(j, "rate_per_min", "model.");
    return guarded(kind, [&] { return ArrivalModel(Exponential(r)); });
  }
  if (kind == "late_bus_mixture") {
    const double w = number(j, "still_coming_prob", "model.");
    if (!(w >= 0.0 && w <= 1.0))
      throw ConfigError("config: field 'model.still_coming_prob' must lie in [0, 1]");
    const double L = positive(j, "late_window_min", "model.");
    const double H = positive(j, "next_headway_offset_min", "model.");
    if (!(H > L))
      throw ConfigError(
          "config: field 'model.next_headway_offset_min' must exceed late_window_min");
    return guarded(kind, [&] { return ArrivalModel(LateBusMixture(w, L, H)); });
  }
  if (kind == "piecewise") {
    if (!j.contains("knots") || !j.at("knots").is_array())
      throw ConfigError("config: field 'model.knots' must be an array");
    std::vector<Knot> knots;
    for (const auto& k : j.at("knots")) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
        throw ConfigError("config: field 'model.knots' entries must be [t, density]");
      knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    return guarded(kind, [&] {
      return ArrivalModel(PiecewiseLinearDensity(std::move(knots)));
    });
  }
  throw ConfigError("config: field 'model.kind' has unknown value '" + kind + "'");
}

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  const double d = positive(j, "distance_km", "");
  const double vw = positive(j, "walk_speed_kmh", "");
  const double vb = positive(j, "bus_speed_kmh", "");
  if (!(vb > vw))
    throw ConfigError("config: field 'bus_speed_kmh' must exceed walk_speed_kmh");
  if (!j.contains("model")) throw ConfigError("config: missing field 'model'");

  ScenarioConfig cfg{Scenario(d, vw / 60.0, vb / 60.0), parse_model(j.at("model")),
                     optional_number(j, "p_catch"), optional_number(j, "d1_km"),
                     optional_number(j, "t_wait_min")};
  if (cfg.p_catch && !(*cfg.p_catch >= 0.0 && *cfg.p_catch <= 1.0))
    throw ConfigError("config: field 'p_catch' must lie in [0, 1]");
  if (cfg.d1_km && !(*cfg.d1_km >= 0.0 && *cfg.d1_km <= d))
    throw ConfigError("config: field 'd1_km' must lie in [0, distance_km]");
  if (cfg.t_wait_min && !(*cfg.t_wait_min >= 0.0))
    throw ConfigError("config: field 't_wait_min' must be >= 0");
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json model_to_json(const ArrivalModel& model) {
  if (const auto* m = model.get_if<Uniform>())
    return {{"kind", "uniform"}, {"headway_min", m->headway}};
  if (const auto* m = model.get_if<Exponential>())
    return {{"kind", "exponential"}, {"rate_per_min", m->rate}};
  if (const auto* m = model.get_if<LateBusMixture>())
    return {{"kind", "late_bus_mixture"},
            {"still_coming_prob", m->still_coming},
            {"late_window_min", m->late_window},
            {"next_headway_offset_min", m->next_offset}};
  const auto& pw = std::get<PiecewiseLinearDensity>(model.variant());
  json knots = json::array();
  for (const auto& k : pw.knots()) knots.push_back({k.t, k.density});
  return {{"kind", "piecewise"}, {"knots", knots}};
}

}  // namespace walkwait
