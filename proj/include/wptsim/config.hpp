#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wptsim/regulations.hpp"
#include "wptsim/simcore.hpp"

namespace wptsim::config {

using nlohmann::json;

/// Input-document problem: malformed JSON, unknown or missing keys, values
/// out of range. Maps to exit code 2 at the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error in " + path + ": " + e.what());
  }
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error in " + what + ": " + e.what());
  }
}

/// Strict object view: every key must be consumed, units are spelled in the
/// key names, unknown keys are errors.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path)
      : j_(&j), path_(std::move(path)) {
    if (!j.is_object()) {
      throw ConfigError(path_ + ": expected an object");
    }
  }

  bool has(const char* key) const { return j_->contains(key); }

  double number(const char* key) {
    const json& v = require(key);
    if (!v.is_number()) {
      throw ConfigError(member_path(key) + ": expected a number");
    }
    return v.get<double>();
  }

  double number_or(const char* key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::optional<double> number_opt(const char* key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  int integer(const char* key) {
    const json& v = require(key);
    if (!v.is_number_integer()) {
      throw ConfigError(member_path(key) + ": expected an integer");
    }
    return v.get<int>();
  }

  int integer_or(const char* key, int fallback) {
    return has(key) ? integer(key) : fallback;
  }

  bool boolean_or(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = require(key);
    if (!v.is_boolean()) {
      throw ConfigError(member_path(key) + ": expected a boolean");
    }
    return v.get<bool>();
  }

  std::string text(const char* key) {
    const json& v = require(key);
    if (!v.is_string()) {
      throw ConfigError(member_path(key) + ": expected a string");
    }
    return v.get<std::string>();
  }

  std::string text_or(const char* key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }

  const json* child(const char* key) {
    if (!has(key)) return nullptr;
    return &require(key);
  }

  const json& require(const char* key) {
    if (!j_->contains(key)) {
      throw ConfigError(path_ + ": missing required key '" + std::string(key) +
                        "'");
    }
    seen_.insert(key);
    return (*j_)[key];
  }

  std::string member_path(const char* key) const {
    return path_ + "." + key;
  }

  /// Call after all expected keys were read.
  void finish() const {
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
      }
    }
  }

 private:
  const json* j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline Vec3 parse_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() ||
      !j[1].is_number() || !j[2].is_number()) {
    throw ConfigError(path + ": expected an array of three numbers");
  }
  return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Antenna parse_antenna(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string pattern = r.text_or("pattern", "omnidirectional");
  Antenna a;
  if (pattern == "omnidirectional" || pattern == "omni") {
    a.pattern = AntennaPattern::omnidirectional;
    a.horizontal_beamwidth_deg = r.number_or("beamwidth_deg", 360.0);
  } else if (pattern == "directional") {
    a.pattern = AntennaPattern::directional;
    a.horizontal_beamwidth_deg = r.number("beamwidth_deg");
  } else {
    throw ConfigError(path +
                      ".pattern: expected 'omnidirectional' or 'directional'");
  }
  a.gain_dbi = r.number_or("gain_dbi", 0.0);
  a.boresight_azimuth_deg = r.number_or("boresight_deg", 0.0);
  a.radiation_efficiency = r.number_or("radiation_efficiency", 1.0);
  r.finish();
  try {
    a.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return a;
}

inline DutySchedule parse_duty(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  DutySchedule d;
  d.on_s = r.number("on_s");
  d.off_s = r.number_or("off_s", 0.0);
  r.finish();
  try {
    d.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return d;
}

inline StorageCapacitor parse_capacitor(const json& j,
                                        const std::string& path) {
  ObjectReader r(j, path);
  StorageCapacitor c;
  c.capacitance_f = r.number("capacitance_uf") * 1e-6;
  c.v_chrdy = r.number_or("v_chrdy_v", 3.10);
  c.v_ovdis = r.number_or("v_ovdis_v", 2.80);
  c.v_now = r.number_or("v_initial_v", 0.0);
  if (const auto ceiling = r.number_opt("v_ceiling_v")) {
    c.v_ceiling = *ceiling;
  }
  r.finish();
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return c;
}

inline EfficiencyChain parse_chain(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "868") return EfficiencyChain::aem40940_868mhz();
    if (name == "2g4" || name == "2450" || name == "2.4ghz") {
      return EfficiencyChain::aem40940_2g4();
    }
    throw ConfigError(path + ": unknown chain preset '" + name +
                      "' (expected '868' or '2g4')");
  }
  ObjectReader r(j, path);
  EfficiencyChain c;
  c.eta_d = r.number("eta_d");
  c.eta_b = r.number("eta_b");
  c.eta_ldo = r.number("eta_ldo");
  c.eta_c = r.number("eta_c");
  const bool flat = r.has("eta_rf");
  const bool curve = r.has("eta_rf_curve");
  const bool csv = r.has("eta_rf_csv");
  if (flat + curve + csv != 1) {
    throw ConfigError(path +
                      ": provide exactly one of eta_rf, eta_rf_curve, "
                      "eta_rf_csv");
  }
  try {
    if (flat) {
      c.eta_rf = EtaRfCurve::flat(r.number("eta_rf"));
    } else if (csv) {
      c.eta_rf = EtaRfCurve::from_csv_file(r.text("eta_rf_csv"));
    } else {
      const json& pts = r.require("eta_rf_curve");
      if (!pts.is_array()) {
        throw ConfigError(path + ".eta_rf_curve: expected an array of pairs");
      }
      std::vector<std::array<double, 2>> points;
      for (const auto& p : pts) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
            !p[1].is_number()) {
          throw ConfigError(path +
                            ".eta_rf_curve: each entry must be "
                            "[input_dbm, eta_rf]");
        }
        points.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      c.eta_rf = EtaRfCurve::from_points(std::move(points));
    }
    r.finish();
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return c;
}

inline HarvesterStage parse_stage(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  HarvesterStage s;
  if (const json* chain = r.child("chain")) {
    s.chain = parse_chain(*chain, path + ".chain");
  } else {
    s.chain = EfficiencyChain::aem40940_868mhz();
  }
  s.sensitivity_min = PowerQuantity::from_dbm(r.number_or("sensitivity_min_dbm", -19.0));
  s.sensitivity_max = PowerQuantity::from_dbm(r.number_or("sensitivity_max_dbm", 10.0));
  if (const json* ch = r.child("tuned_channels")) {
    if (!ch->is_array()) {
      throw ConfigError(path + ".tuned_channels: expected an array of integers");
    }
    for (const auto& c : *ch) {
      if (!c.is_number_integer()) {
        throw ConfigError(path +
                          ".tuned_channels: expected an array of integers");
      }
      s.tuned_channels.insert(c.get<int>());
    }
  }
  r.finish();
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return s;
}

inline TagEnergyProfile parse_profile(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  TagEnergyProfile p;
  p.e_tag_j = r.number_or("e_tag_uj", 3.15) * 1e-6;
  p.rangings_per_fix = r.integer_or("rangings_per_fix", 4);
  p.rx_window_s = r.number_or("rx_window_ms", 1.0) * 1e-3;
  if (const auto w = r.number_opt("active_power_uw")) p.active_power_w = *w * 1e-6;
  if (const auto t = r.number_opt("turnon_time_ms")) p.turnon_time_s = *t * 1e-3;
  if (const auto e = r.number_opt("turnon_energy_uj")) p.turnon_energy_j = *e * 1e-6;
  r.finish();
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return p;
}

inline PowerQuantity parse_power(ObjectReader& r, const std::string& path,
                                 const char* dbm_key, const char* watt_key) {
  const bool has_dbm = r.has(dbm_key);
  const bool has_w = r.has(watt_key);
  if (has_dbm == has_w) {
    throw ConfigError(path + ": provide exactly one of '" +
                      std::string(dbm_key) + "' or '" + watt_key + "'");
  }
  try {
    return has_dbm ? PowerQuantity::from_dbm(r.number(dbm_key))
                   : PowerQuantity::from_watts(r.number(watt_key));
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline Beacon parse_beacon(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Beacon b;
  b.id = r.text("id");
  if (const json* pos = r.child("position_m")) {
    b.position = parse_vec3(*pos, path + ".position_m");
  }
  b.channel = r.integer_or("channel", 1);
  b.erp = parse_power(r, path, "erp_dbm", "erp_w");
  try {
    b.frequency = Frequency::from_mhz(r.number_or("freq_mhz", 865.7));
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  b.antenna = parse_antenna(r.require("antenna"), path + ".antenna");
  if (const json* duty = r.child("duty")) {
    b.duty = parse_duty(*duty, path + ".duty");
  }
  r.finish();
  return b;
}

inline Tag parse_tag(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Tag t;
  t.id = r.text("id");
  t.position = parse_vec3(r.require("position_m"), path + ".position_m");
  t.antenna = parse_antenna(r.require("antenna"), path + ".antenna");
  t.capacitor = parse_capacitor(r.require("capacitor"), path + ".capacitor");
  if (const json* stages = r.child("stages")) {
    if (!stages->is_array() || stages->empty()) {
      throw ConfigError(path + ".stages: expected a non-empty array");
    }
    t.stages.clear();
    for (std::size_t i = 0; i < stages->size(); ++i) {
      t.stages.push_back(parse_stage(
          (*stages)[i], path + ".stages[" + std::to_string(i) + "]"));
    }
  }
  if (const json* profile = r.child("profile")) {
    t.profile = parse_profile(*profile, path + ".profile");
  }
  r.finish();
  try {
    t.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return t;
}

inline PropagationModel parse_propagation(const json& j,
                                          const std::string& path) {
  ObjectReader r(j, path);
  PropagationModel m;
  m.path_loss_exponent = r.number_or("path_loss_exponent", 2.0);
  m.reference_distance_m = r.number_or("reference_distance_m", 1.0);
  m.polarization_loss = r.number_or("polarization_loss", 1.0);
  r.finish();
  try {
    m.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return m;
}

inline SchedulerPolicy parse_scheduler(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SchedulerPolicy p;
  const std::string kind = r.text_or("policy", "none");
  if (kind == "none") {
    p.kind = SchedulerPolicy::Kind::none;
  } else if (kind == "round_robin") {
    p.kind = SchedulerPolicy::Kind::round_robin;
  } else if (kind == "deficit_first") {
    p.kind = SchedulerPolicy::Kind::deficit_first;
  } else {
    throw ConfigError(path +
                      ".policy: expected 'none', 'round_robin' or "
                      "'deficit_first'");
  }
  p.dwell_s = r.number_or("dwell_s", 1.0);
  p.default_target_update_s = r.number_or("default_target_update_s", 1.0);
  if (const json* targets = r.child("targets")) {
    ObjectReader tr(*targets, path + ".targets");
    for (auto it = targets->begin(); it != targets->end(); ++it) {
      if (!it.value().is_number()) {
        throw ConfigError(path + ".targets." + it.key() +
                          ": expected a number of seconds");
      }
      p.target_update_s[it.key()] = it.value().get<double>();
    }
  }
  r.finish();
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return p;
}

inline Scenario parse_scenario(const json& j) {
  ObjectReader r(j, "scenario");
  Scenario s;
  if (const json* room = r.child("room_m")) {
    const Vec3 dims = parse_vec3(*room, "scenario.room_m");
    s.room = Room{dims.x, dims.y, dims.z};
  }
  s.sim_duration_s = r.number_or("sim_duration_s", 60.0);
  if (const json* prop = r.child("propagation")) {
    s.propagation = parse_propagation(*prop, "scenario.propagation");
  }
  if (const json* sched = r.child("scheduler")) {
    s.scheduler = parse_scheduler(*sched, "scenario.scheduler");
  }
  if (const json* beacons = r.child("beacons")) {
    if (!beacons->is_array()) {
      throw ConfigError("scenario.beacons: expected an array");
    }
    for (std::size_t i = 0; i < beacons->size(); ++i) {
      s.beacons.push_back(parse_beacon(
          (*beacons)[i], "scenario.beacons[" + std::to_string(i) + "]"));
    }
  }
  const json& tags = r.require("tags");
  if (!tags.is_array()) {
    throw ConfigError("scenario.tags: expected an array");
  }
  for (std::size_t i = 0; i < tags.size(); ++i) {
    s.tags.push_back(
        parse_tag(tags[i], "scenario.tags[" + std::to_string(i) + "]"));
  }
  if (r.has("random_seed")) {
    s.random_seed = static_cast<std::uint64_t>(r.integer("random_seed"));
  }
  r.finish();
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return s;
}

inline TransmissionPlan parse_plan(const json& j) {
  ObjectReader r(j, "plan");
  TransmissionPlan p;
  const std::string band = r.text("band");
  if (band == "868") {
    p.band = Band::rfid_868;
  } else if (band == "2450") {
    p.band = Band::rfid_2450;
  } else {
    throw ConfigError("plan.band: expected '868' or '2450'");
  }
  p.channel = r.integer_or("channel", 1);
  const bool has_erp = r.has("erp_dbm") || r.has("erp_w");
  const bool has_eirp = r.has("eirp_dbm");
  if (has_erp == has_eirp) {
    throw ConfigError(
        "plan: provide the power as either erp_dbm/erp_w or eirp_dbm");
  }
  try {
    if (has_eirp) {
      p.set_eirp(PowerQuantity::from_dbm(r.number("eirp_dbm")));
    } else {
      p.erp = parse_power(r, "plan", "erp_dbm", "erp_w");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("plan: ") + e.what());
  }
  p.antenna = parse_antenna(r.require("antenna"), "plan.antenna");
  if (const json* duty = r.child("duty")) {
    p.duty = parse_duty(*duty, "plan.duty");
  }
  p.indoor = r.boolean_or("indoor", false);
  p.fhss = r.boolean_or("fhss", false);
  p.sidelobe_attested = r.boolean_or("sidelobe_attested", true);
  p.enclosure_attested = r.boolean_or("enclosure_attested", true);
  r.finish();
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("plan: ") + e.what());
  }
  return p;
}

struct ColdstartQuery {
  Beacon beacon;
  Antenna tag_antenna = Antenna::omni(2.15);
  HarvesterStage stage{};
  PropagationModel propagation{};
};

struct BudgetConfig {
  StorageCapacitor capacitor{};
  TagEnergyProfile profile{};
  double eta_ldo = 0.7407;
  std::optional<ColdstartQuery> coldstart;
};

inline BudgetConfig parse_budget(const json& j) {
  ObjectReader r(j, "budget");
  BudgetConfig b;
  b.capacitor = parse_capacitor(r.require("capacitor"), "budget.capacitor");
  if (const json* profile = r.child("profile")) {
    b.profile = parse_profile(*profile, "budget.profile");
  }
  b.eta_ldo = r.number_or("eta_ldo", 0.7407);
  if (const json* cs = r.child("coldstart")) {
    ObjectReader cr(*cs, "budget.coldstart");
    ColdstartQuery q;
    q.beacon = parse_beacon(cr.require("beacon"), "budget.coldstart.beacon");
    if (const json* ant = cr.child("tag_antenna")) {
      q.tag_antenna = parse_antenna(*ant, "budget.coldstart.tag_antenna");
    }
    if (const json* stage = cr.child("stage")) {
      q.stage = parse_stage(*stage, "budget.coldstart.stage");
    }
    if (const json* prop = cr.child("propagation")) {
      q.propagation =
          parse_propagation(*prop, "budget.coldstart.propagation");
    }
    cr.finish();
    b.coldstart = std::move(q);
  }
  r.finish();
  if (!(b.eta_ldo > 0.0) || b.eta_ldo > 1.0) {
    throw ConfigError("budget.eta_ldo: must be in (0, 1]");
  }
  return b;
}

}  // namespace wptsim::config
