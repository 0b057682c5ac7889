#include "chiralwg/config.hpp"

#include <initializer_list>
#include <string_view>

#include "chiralwg/ensemble.hpp"
#include "chiralwg/errors.hpp"
#include "chiralwg/io.hpp"

namespace chiralwg {

namespace {

using json = nlohmann::json;

std::string join(std::string_view parent, std::string_view key) {
  return parent.empty() ? std::string(key) : std::string(parent) + "." + std::string(key);
}

void reject_unknown(const json& obj, std::string_view path, std::initializer_list<std::string_view> keys) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto k : keys) known = known || k == key;
    if (!known) throw InvalidParameter(join(path, key), "unknown key");
  }
}

const json* member(const json& obj, std::string_view path, const char* key, json::value_t kind) {
  if (!obj.contains(key)) return nullptr;
  const json& v = obj.at(key);
  const bool ok = kind == json::value_t::number_float ? v.is_number()
                  : kind == json::value_t::number_integer ? v.is_number_integer()
                                                          : v.type() == kind;
  if (!ok) {
    const char* expected = kind == json::value_t::number_float     ? "a number"
                           : kind == json::value_t::number_integer ? "an integer"
                           : kind == json::value_t::string         ? "a string"
                           : kind == json::value_t::object         ? "an object"
                                                                   : "an array";
    throw InvalidParameter(join(path, key), std::string("must be ") + expected);
  }
  return &v;
}

void read_number(const json& obj, std::string_view path, const char* key, double& out) {
  if (auto v = member(obj, path, key, json::value_t::number_float)) out = v->get<double>();
}

template <class Enum>
void read_enum(const json& obj, std::string_view path, const char* key, Enum& out,
               std::initializer_list<Enum> values) {
  auto v = member(obj, path, key, json::value_t::string);
  if (!v) return;
  const auto s = v->get<std::string>();
  std::string allowed;
  for (Enum e : values) {
    if (to_string(e) == s) {
      out = e;
      return;
    }
    allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(e));
  }
  throw InvalidParameter(join(path, key), "'" + s + "' is not one of " + allowed);
}

std::vector<double> read_grid(const json& v, const std::string& path) {
  if (v.is_array()) {
    std::vector<double> grid;
    grid.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw InvalidParameter(path + "[" + std::to_string(i) + "]", "must be a number");
      }
      grid.push_back(v[i].get<double>());
    }
    return grid;
  }
  if (v.is_object()) {
    reject_unknown(v, path, {"start", "stop", "points"});
    for (const char* k : {"start", "stop", "points"}) {
      if (!v.contains(k)) throw InvalidParameter(join(path, k), "missing");
    }
    double start = 0, stop = 0;
    read_number(v, path, "start", start);
    read_number(v, path, "stop", stop);
    const int points = member(v, path, "points", json::value_t::number_integer)->get<int>();
    try {
      return linear_grid(start, stop, points);
    } catch (const InvalidParameter& e) {
      throw InvalidParameter(path, e.what());
    }
  }
  throw InvalidParameter(path, "must be an array or {start, stop, points}");
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw InvalidParameter("<root>", "scenario must be a JSON object");
  reject_unknown(j, "", {"emitter", "ensemble", "drive", "cavity"});
  Scenario s;

  if (auto e = member(j, "", "emitter", json::value_t::object)) {
    const std::string p = "emitter";
    reject_unknown(*e, p, {"beta", "beta_d_LR", "beta_d_RL", "lifetime_tau", "dephasing_tau_d",
                           "center_energy", "zeeman_splitting", "strong_branch"});
    read_number(*e, p, "beta", s.emitter.beta);
    read_number(*e, p, "beta_d_LR", s.emitter.beta_d_LR);
    read_number(*e, p, "beta_d_RL", s.emitter.beta_d_RL);
    read_number(*e, p, "lifetime_tau", s.emitter.lifetime_tau);
    read_number(*e, p, "dephasing_tau_d", s.emitter.dephasing_tau_d);
    read_number(*e, p, "center_energy", s.emitter.center_energy);
    read_number(*e, p, "zeeman_splitting", s.emitter.zeeman_splitting);
    read_enum(*e, p, "strong_branch", s.emitter.strong_branch,
              {SpectralSide::HighEnergy, SpectralSide::LowEnergy});
  }
  if (auto e = member(j, "", "ensemble", json::value_t::object)) {
    const std::string p = "ensemble";
    reject_unknown(*e, p, {"wandering_sigma", "p_dark", "quadrature_order", "quadrature_method"});
    read_number(*e, p, "wandering_sigma", s.ensemble.wandering_sigma);
    read_number(*e, p, "p_dark", s.ensemble.p_dark);
    if (auto v = member(*e, p, "quadrature_order", json::value_t::number_integer)) {
      s.ensemble.quadrature_order = v->get<int>();
    }
    read_enum(*e, p, "quadrature_method", s.ensemble.quadrature_method,
              {QuadratureMethod::Adaptive, QuadratureMethod::GaussHermite});
  }
  if (auto d = member(j, "", "drive", json::value_t::object)) {
    const std::string p = "drive";
    reject_unknown(*d, p, {"direction", "power_in_waveguide", "laser_detuning_grid"});
    read_enum(*d, p, "direction", s.drive.direction, {Direction::LtoR, Direction::RtoL});
    read_number(*d, p, "power_in_waveguide", s.drive.power_in_waveguide);
    if (d->contains("laser_detuning_grid")) {
      s.drive.laser_detuning_grid = read_grid(d->at("laser_detuning_grid"), "drive.laser_detuning_grid");
    }
  }
  if (j.contains("cavity") && !j.at("cavity").is_null()) {
    auto c = member(j, "", "cavity", json::value_t::object);
    const std::string p = "cavity";
    reject_unknown(*c, p, {"mirror_reflectivity", "mirror_transmissivity",
                           "round_trip_phase_at_center", "round_trip_time", "emitter_position_phase"});
    CavityConfig cav;
    read_number(*c, p, "mirror_reflectivity", cav.mirror_reflectivity);
    read_number(*c, p, "mirror_transmissivity", cav.mirror_transmissivity);
    read_number(*c, p, "round_trip_phase_at_center", cav.round_trip_phase_at_center);
    read_number(*c, p, "round_trip_time", cav.round_trip_time);
    read_number(*c, p, "emitter_position_phase", cav.emitter_position_phase);
    s.cavity = cav;
  }

  validate(s.emitter);
  validate(s.ensemble);
  validate(s.drive);
  if (s.cavity) validate(*s.cavity);
  return s;
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["emitter"] = {
      {"beta", s.emitter.beta},
      {"beta_d_LR", s.emitter.beta_d_LR},
      {"beta_d_RL", s.emitter.beta_d_RL},
      {"lifetime_tau", s.emitter.lifetime_tau},
      {"dephasing_tau_d", s.emitter.dephasing_tau_d},
      {"center_energy", s.emitter.center_energy},
      {"zeeman_splitting", s.emitter.zeeman_splitting},
      {"strong_branch", to_string(s.emitter.strong_branch)},
  };
  j["ensemble"] = {
      {"wandering_sigma", s.ensemble.wandering_sigma},
      {"p_dark", s.ensemble.p_dark},
      {"quadrature_order", s.ensemble.quadrature_order},
      {"quadrature_method", to_string(s.ensemble.quadrature_method)},
  };
  j["drive"] = {
      {"direction", to_string(s.drive.direction)},
      {"power_in_waveguide", s.drive.power_in_waveguide},
      {"laser_detuning_grid", s.drive.laser_detuning_grid},
  };
  if (s.cavity) {
    j["cavity"] = {
        {"mirror_reflectivity", s.cavity->mirror_reflectivity},
        {"mirror_transmissivity", s.cavity->mirror_transmissivity},
        {"round_trip_phase_at_center", s.cavity->round_trip_phase_at_center},
        {"round_trip_time", s.cavity->round_trip_time},
        {"emitter_position_phase", s.cavity->emitter_position_phase},
    };
  }
  return j;
}

Scenario parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParameter("<root>", std::string("invalid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

std::string scenario_digest(const Scenario& scenario) {
  return sha256_hex(scenario_to_json(scenario).dump());
}

}  // namespace chiralwg
