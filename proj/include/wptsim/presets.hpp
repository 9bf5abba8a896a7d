#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace wptsim::presets {

/// Bundled configuration documents, keyed by the same file names shipped
/// under presets/. The CLI falls back to these when its config argument is
/// not an existing file, so the canonical setups are runnable anywhere.
inline const std::map<std::string, std::string, std::less<>>& documents() {
  static const std::map<std::string, std::string, std::less<>> docs = {
      {"paper_fig4.scenario", R"json({
  "room_m": [12, 6, 3],
  "sim_duration_s": 60,
  "propagation": {"path_loss_exponent": 2.0, "reference_distance_m": 1.0},
  "beacons": [
    {"id": "base", "position_m": [1, 3, 1], "channel": 1, "freq_mhz": 865.7,
     "erp_dbm": 27,
     "antenna": {"pattern": "omnidirectional", "gain_dbi": 2.15}}
  ],
  "tags": [
    {"id": "tag1", "position_m": [6, 3, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 22, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}],
     "profile": {"e_tag_uj": 3.15, "rangings_per_fix": 4}}
  ]
}
)json"},
      {"paper_fig4_boost.scenario", R"json({
  "room_m": [12, 6, 3],
  "sim_duration_s": 60,
  "propagation": {"path_loss_exponent": 2.0, "reference_distance_m": 1.0},
  "beacons": [
    {"id": "base", "position_m": [1, 3, 1], "channel": 1, "freq_mhz": 865.7,
     "erp_dbm": 27,
     "antenna": {"pattern": "omnidirectional", "gain_dbi": 2.15}},
    {"id": "boost", "position_m": [1, 3, 1], "channel": 3, "freq_mhz": 866.9,
     "erp_dbm": 33,
     "antenna": {"pattern": "directional", "gain_dbi": 6.0,
                 "beamwidth_deg": 90, "boresight_deg": 0}}
  ],
  "tags": [
    {"id": "tag1", "position_m": [6, 3, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 22, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868", "tuned_channels": [1, 2]},
                {"chain": "868", "tuned_channels": [3, 4]}],
     "profile": {"e_tag_uj": 3.15, "rangings_per_fix": 4}}
  ]
}
)json"},
      {"techtile_measured.scenario", R"json({
  "room_m": [8, 4, 2.4],
  "sim_duration_s": 120,
  "propagation": {"path_loss_exponent": 2.0, "reference_distance_m": 0.25},
  "beacons": [
    {"id": "dipole", "position_m": [4, 2, 1], "channel": 1, "freq_mhz": 865.7,
     "erp_dbm": 27,
     "antenna": {"pattern": "omnidirectional", "gain_dbi": 2.15}}
  ],
  "tags": [
    {"id": "d050", "position_m": [4.5, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d075", "position_m": [4.75, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d100", "position_m": [5, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d125", "position_m": [5.25, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d150", "position_m": [5.5, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d175", "position_m": [5.75, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d200", "position_m": [6, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d225", "position_m": [6.25, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d250", "position_m": [6.5, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d275", "position_m": [6.75, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d300", "position_m": [7, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d325", "position_m": [7.25, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d350", "position_m": [7.5, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d375", "position_m": [7.75, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]},
    {"id": "d400", "position_m": [8, 2, 1],
     "antenna": {"gain_dbi": 2.15},
     "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
     "stages": [{"chain": "868"}]}
  ]
}
)json"},
      {"plan_868_omni.json", R"json({
  "band": "868",
  "channel": 1,
  "erp_dbm": 27,
  "antenna": {"pattern": "omnidirectional", "gain_dbi": 2.15},
  "duty": {"on_s": 1.0, "off_s": 0.1}
}
)json"},
      {"plan_2450_omni.json", R"json({
  "band": "2450",
  "channel": 1,
  "eirp_dbm": 27,
  "antenna": {"pattern": "omnidirectional", "gain_dbi": 2.15}
}
)json"},
      {"plan_2450_boost.json", R"json({
  "band": "2450",
  "channel": 1,
  "eirp_dbm": 36,
  "antenna": {"pattern": "directional", "gain_dbi": 15.0,
              "beamwidth_deg": 40, "boresight_deg": 0},
  "duty": {"on_s": 0.03, "off_s": 0.17},
  "indoor": true,
  "fhss": true
}
)json"},
      {"budget_sim_defaults.json", R"json({
  "capacitor": {"capacitance_uf": 22, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
  "profile": {"e_tag_uj": 3.15, "rangings_per_fix": 4},
  "eta_ldo": 0.7407,
  "coldstart": {
    "beacon": {"id": "base", "erp_dbm": 27, "freq_mhz": 865.7,
               "antenna": {"pattern": "omnidirectional", "gain_dbi": 2.15}},
    "tag_antenna": {"gain_dbi": 2.15},
    "stage": {"chain": "868"}
  }
}
)json"},
      {"budget_techtile.json", R"json({
  "capacitor": {"capacitance_uf": 39.7, "v_chrdy_v": 3.1, "v_ovdis_v": 2.8},
  "profile": {"e_tag_uj": 3.15, "rangings_per_fix": 4},
  "eta_ldo": 0.7407,
  "coldstart": {
    "beacon": {"id": "dipole", "erp_dbm": 27, "freq_mhz": 865.7,
               "antenna": {"pattern": "omnidirectional", "gain_dbi": 2.15}},
    "tag_antenna": {"gain_dbi": 2.15},
    "stage": {"chain": "868"}
  }
}
)json"}};
  return docs;
}

inline std::optional<std::string> document(std::string_view name) {
  const auto& docs = documents();
  const auto it = docs.find(name);
  if (it == docs.end()) return std::nullopt;
  return it->second;
}

}  // namespace wptsim::presets
