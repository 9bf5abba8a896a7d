#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wptsim/antenna.hpp"
#include "wptsim/harvester.hpp"

namespace wptsim {

/// Energy cost model of the positioning tag. e_tag_j is the measured
/// aggregate cost of one ranging; the (active_power, rx_window, turn-on)
/// decomposition is optional metadata and is only checked for consistency.
struct TagEnergyProfile {
  double e_tag_j = 3.15e-6;
  int rangings_per_fix = 4;
  std::optional<double> active_power_w;
  double rx_window_s = 1e-3;
  std::optional<double> turnon_time_s;
  std::optional<double> turnon_energy_j;

  void validate() const {
    if (!(e_tag_j > 0.0)) {
      throw std::invalid_argument("e_tag must be > 0 J, got " +
                                  std::to_string(e_tag_j));
    }
    if (rangings_per_fix < 1) {
      throw std::invalid_argument("rangings_per_fix must be >= 1, got " +
                                  std::to_string(rangings_per_fix));
    }
    if (!(rx_window_s > 0.0)) {
      throw std::invalid_argument("rx_window must be > 0 s");
    }
    if (active_power_w && turnon_energy_j) {
      const double recomposed = *active_power_w * rx_window_s + *turnon_energy_j;
      if (std::fabs(recomposed - e_tag_j) > 0.01 * e_tag_j) {
        throw std::invalid_argument(
            "tag energy decomposition inconsistent: active_power * rx_window "
            "+ turnon_energy = " +
            std::to_string(recomposed) + " J differs from e_tag = " +
            std::to_string(e_tag_j) + " J by more than 1%");
      }
    }
  }
};

/// Energy for one 3D position estimate (rangings_per_fix rangings).
inline double fix_energy(const TagEnergyProfile& profile) {
  return static_cast<double>(profile.rangings_per_fix) * profile.e_tag_j;
}

struct FeasibilityReport {
  bool feasible = false;
  double stored_j = 0.0;  // capacitor window energy
  double usable_j = 0.0;  // after LDO derating
  double fix_j = 0.0;
  double margin_j = 0.0;  // usable - fix
};

/// Checks the storage window against the per-fix energy cost:
/// usable = E(v_ovdis -> v_chrdy) * eta_ldo must cover fix_energy.
inline FeasibilityReport storage_feasible(const StorageCapacitor& cap,
                                          const TagEnergyProfile& profile,
                                          double eta_ldo) {
  if (!(eta_ldo > 0.0) || eta_ldo > 1.0) {
    throw std::invalid_argument("eta_ldo must be in (0, 1], got " +
                                std::to_string(eta_ldo));
  }
  FeasibilityReport r;
  r.stored_j = storage_energy(cap, cap.v_ovdis, cap.v_chrdy);
  r.usable_j = r.stored_j * eta_ldo;
  r.fix_j = fix_energy(profile);
  r.margin_j = r.usable_j - r.fix_j;
  r.feasible = r.margin_j >= 0.0;
  return r;
}

struct FixRecord {
  double time_s = 0.0;
  double v_before = 0.0;
  double v_after = 0.0;
  double energy_spent_j = 0.0;
};

/// Executes one fix: the tag spends its storage window, landing exactly on
/// v_ovdis. The millisecond-scale discharge is modelled as instantaneous.
/// Requires v_now >= v_chrdy ("not charged" otherwise).
inline FixRecord perform_fix(StorageCapacitor& cap, double now_s) {
  if (cap.v_now < cap.v_chrdy) {
    throw std::runtime_error(
        "not charged: v_now = " + std::to_string(cap.v_now) +
        " V is below v_chrdy = " + std::to_string(cap.v_chrdy) + " V");
  }
  FixRecord rec;
  rec.time_s = now_s;
  rec.v_before = cap.v_now;
  rec.v_after = cap.v_ovdis;
  rec.energy_spent_j = cap.energy_at_v(cap.v_now) - cap.energy_at_v(cap.v_ovdis);
  cap.v_now = cap.v_ovdis;
  return rec;
}

/// A mobile positioning tag: antenna, one or two harvester stages feeding a
/// shared capacitor, and its energy cost profile.
struct Tag {
  std::string id = "tag";
  Vec3 position{};
  Antenna antenna = Antenna::omni(2.15);
  std::vector<HarvesterStage> stages{HarvesterStage{}};
  StorageCapacitor capacitor{};
  TagEnergyProfile profile{};

  void validate() const {
    if (id.empty()) throw std::invalid_argument("tag id must be non-empty");
    if (stages.empty() || stages.size() > 2) {
      throw std::invalid_argument("tag '" + id +
                                  "' must have 1 or 2 harvester stages, got " +
                                  std::to_string(stages.size()));
    }
    antenna.validate();
    for (const auto& s : stages) s.validate();
    capacitor.validate();
    profile.validate();
  }
};

}  // namespace wptsim
