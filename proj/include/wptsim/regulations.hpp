#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wptsim/antenna.hpp"
#include "wptsim/duty.hpp"
#include "wptsim/harvester.hpp"
#include "wptsim/linkbudget.hpp"
#include "wptsim/quantities.hpp"

namespace wptsim {

enum class Band { rfid_868, rfid_2450 };

inline const char* band_name(Band b) {
  return b == Band::rfid_868 ? "868" : "2450";
}

struct ChannelInfo {
  int id;
  double center_mhz;
};

/// The 865-868 MHz band offers four high-power channels; the 2.45 GHz RFID
/// band is modelled as a single channel at its center.
struct BandInfo {
  Band band;
  double low_mhz;
  double high_mhz;
  std::vector<ChannelInfo> channels;

  static const BandInfo& of(Band b) {
    static const BandInfo rfid868{
        Band::rfid_868,
        865.0,
        868.0,
        {{1, 865.7}, {2, 866.3}, {3, 866.9}, {4, 867.5}}};
    static const BandInfo rfid2450{Band::rfid_2450, 2446.0, 2454.0,
                                   {{1, 2450.0}}};
    return b == Band::rfid_868 ? rfid868 : rfid2450;
  }

  std::optional<Frequency> channel_frequency(int id) const {
    for (const auto& c : channels) {
      if (c.id == id) return Frequency::from_mhz(c.center_mhz);
    }
    return std::nullopt;
  }
};

/// Stable rule identifiers (documented in the README).
namespace rules {
inline constexpr const char* r868_chan = "R868-CHAN";
inline constexpr const char* r868_pwr_omni = "R868-PWR-OMNI";
inline constexpr const char* r868_pwr_bw180 = "R868-PWR-BW180";
inline constexpr const char* r868_pwr_bw90 = "R868-PWR-BW90";
inline constexpr const char* r868_cw = "R868-CW";
inline constexpr const char* r868_duty = "R868-DUTY";
inline constexpr const char* r2450_chan = "R2450-CHAN";
inline constexpr const char* r2450_bw45 = "R2450-BW45";
inline constexpr const char* r2450_pwr = "R2450-PWR";
inline constexpr const char* r2450_indoor = "R2450-INDOOR";
inline constexpr const char* r2450_fhss = "R2450-FHSS";
inline constexpr const char* r2450_duty15 = "R2450-DUTY15";
inline constexpr const char* r2450_sidelobe = "R2450-SIDELOBE";
inline constexpr const char* r2450_enclosure = "R2450-ENCLOSURE";
}  // namespace rules

/// A charging transmission to be vetted against the band rules. Power is
/// held as ERP; the EIRP view is the fixed dipole-reference shift.
/// The sidelobe (>= 15 dB) and physical-enclosure requirements of the
/// 2.45 GHz band are attestations, not computed properties.
struct TransmissionPlan {
  Band band = Band::rfid_868;
  int channel = 1;
  PowerQuantity erp = PowerQuantity::from_dbm(27.0);
  Antenna antenna{};
  DutySchedule duty = DutySchedule::continuous_wave();
  bool indoor = false;
  bool fhss = false;
  bool sidelobe_attested = true;
  bool enclosure_attested = true;

  PowerQuantity eirp() const { return erp_to_eirp(erp); }
  void set_eirp(PowerQuantity e) { erp = eirp_to_erp(e); }

  void validate() const {
    if (!(erp.watts() > 0.0)) {
      throw std::invalid_argument("plan power must be > 0");
    }
    antenna.validate();
    duty.validate();
  }
};

struct Violation {
  std::string rule;
  std::string message;

  friend bool operator<(const Violation& a, const Violation& b) {
    return a.rule < b.rule;
  }
};

struct ComplianceReport {
  bool compliant = false;
  std::vector<Violation> violations;  // sorted by rule id, deduplicated
  PowerQuantity max_allowed_power = PowerQuantity::zero();  // ERP in the 868
                                                            // band, EIRP at
                                                            // 2.45 GHz
  double effective_duty = 1.0;

  std::string to_text() const {
    std::ostringstream os;
    os << "compliant: " << (compliant ? "yes" : "no") << "\n";
    os << "max_allowed_power_dbm: " << max_allowed_power.dbm() << "\n";
    os << "effective_duty: " << effective_duty << "\n";
    for (const auto& v : violations) {
      os << "violation: " << v.rule << " " << v.message << "\n";
    }
    return os.str();
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "field,value\n";
    os << "compliant," << (compliant ? "yes" : "no") << "\n";
    os << "max_allowed_power_dbm," << max_allowed_power.dbm() << "\n";
    os << "effective_duty," << effective_duty << "\n";
    for (const auto& v : violations) {
      std::string msg = v.message;
      std::replace(msg.begin(), msg.end(), ',', ';');
      os << "violation," << v.rule << ": " << msg << "\n";
    }
    return os.str();
  }
};

/// 868-band ERP ceiling by horizontal beamwidth: 500 mW omnidirectional,
/// 1 W at <= 180 deg, 2 W at <= 90 deg. The watt tiers and their customary
/// dBm equivalents (27 / 30 / 33 dBm) are treated as the same limit, so the
/// returned ceiling is the larger of each pair.
inline PowerQuantity max_erp_868(double beamwidth_deg) {
  if (!(beamwidth_deg > 0.0) || beamwidth_deg > 360.0) {
    throw std::invalid_argument("beamwidth must be in (0, 360] deg, got " +
                                std::to_string(beamwidth_deg));
  }
  auto tier = [](double watts, double nominal_dbm) {
    return PowerQuantity::from_watts(
        std::max(watts, dbm_to_watts_value(nominal_dbm)));
  };
  if (beamwidth_deg <= 90.0) return tier(2.0, 33.0);
  if (beamwidth_deg <= 180.0) return tier(1.0, 30.0);
  return tier(0.5, 27.0);
}

namespace detail {

inline void add_violation(std::vector<Violation>& v, const char* rule,
                          std::string message) {
  v.push_back({rule, std::move(message)});
}

inline std::string dbm_str(PowerQuantity p) {
  std::ostringstream os;
  os << p.dbm() << " dBm";
  return os.str();
}

// Tolerance for comparing a plan's power against a limit; absorbs the
// floating-point noise of dBm<->W round trips, nothing more.
inline bool exceeds(double value, double limit) {
  return value > limit * (1.0 + 1e-9);
}

inline void check_868(const TransmissionPlan& plan,
                      std::vector<Violation>& violations,
                      PowerQuantity& max_allowed) {
  const BandInfo& info = BandInfo::of(Band::rfid_868);
  if (!info.channel_frequency(plan.channel)) {
    add_violation(violations, rules::r868_chan,
                  "channel " + std::to_string(plan.channel) +
                      " is not one of the four high-power channels (1-4)");
  }

  const double bw = plan.antenna.horizontal_beamwidth_deg;
  max_allowed = max_erp_868(bw);
  if (exceeds(plan.erp.watts(), max_allowed.watts())) {
    const char* rule = bw <= 90.0    ? rules::r868_pwr_bw90
                       : bw <= 180.0 ? rules::r868_pwr_bw180
                                     : rules::r868_pwr_omni;
    add_violation(violations, rule,
                  "ERP " + dbm_str(plan.erp) + " exceeds the " +
                      dbm_str(max_allowed) + " limit for beamwidth " +
                      std::to_string(bw) + " deg");
  }

  // Presence-sensing mode: transmissions of at most 1 s interleaved with
  // silences of at least 100 ms. Pure CW is flagged under its own rule so
  // callers can waive it deliberately.
  if (plan.duty.continuous()) {
    add_violation(violations, rules::r868_cw,
                  "continuous transmission without silent periods; "
                  "presence-sensing mode requires interleaved silences");
  } else {
    if (exceeds(plan.duty.on_s, 1.0)) {
      add_violation(violations, rules::r868_duty,
                    "transmission segment of " + std::to_string(plan.duty.on_s) +
                        " s exceeds the 1 s maximum");
    }
    if (plan.duty.off_s < 0.1 * (1.0 - 1e-9)) {
      add_violation(violations, rules::r868_duty,
                    "silent period of " + std::to_string(plan.duty.off_s) +
                        " s is shorter than the 100 ms minimum");
    }
  }
}

inline void check_2450(const TransmissionPlan& plan,
                       std::vector<Violation>& violations,
                       PowerQuantity& max_allowed) {
  const BandInfo& info = BandInfo::of(Band::rfid_2450);
  if (!info.channel_frequency(plan.channel)) {
    add_violation(violations, rules::r2450_chan,
                  "channel " + std::to_string(plan.channel) +
                      " is not defined in the 2.45 GHz band");
  }

  // Antenna constraints apply to both power tiers.
  if (plan.antenna.horizontal_beamwidth_deg > 45.0) {
    add_violation(violations, rules::r2450_bw45,
                  "horizontal beamwidth " +
                      std::to_string(plan.antenna.horizontal_beamwidth_deg) +
                      " deg exceeds the 45 deg limit");
  }
  if (!plan.sidelobe_attested) {
    add_violation(violations, rules::r2450_sidelobe,
                  "sidelobe attenuation of at least 15 dB not attested");
  }
  if (!plan.enclosure_attested) {
    add_violation(violations, rules::r2450_enclosure,
                  "physical protection / dimension limits not attested");
  }

  const double eirp_dbm = plan.eirp().dbm();
  const bool high_tier_available = plan.indoor && plan.fhss;
  max_allowed =
      PowerQuantity::from_dbm(high_tier_available ? 36.0 : 27.0);
  if (eirp_dbm > 36.0 + 1e-9) {
    add_violation(violations, rules::r2450_pwr,
                  "EIRP " + dbm_str(plan.eirp()) +
                      " exceeds the 36 dBm absolute maximum");
  } else if (eirp_dbm > 27.0 + 1e-9) {
    // 27..36 dBm tier: in-building FHSS with a 15 % duty cap over 200 ms.
    if (!plan.indoor) {
      add_violation(violations, rules::r2450_indoor,
                    "EIRP above 27 dBm requires in-building use");
    }
    if (!plan.fhss) {
      add_violation(violations, rules::r2450_fhss,
                    "EIRP above 27 dBm requires FHSS modulation");
    }
    if (plan.duty.duty_fraction() > 0.15 * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "duty cycle " << plan.duty.duty_fraction()
         << " exceeds the 15% average over 200 ms";
      add_violation(violations, rules::r2450_duty15, os.str());
    }
  }
  // At or below 27 dBm EIRP, CW and FHSS carry no duty restriction.
}

}  // namespace detail

/// Evaluates every applicable rule; findings land in the report rather than
/// exceptions. Deterministic: violations are reported as a sorted set.
inline ComplianceReport check_plan(const TransmissionPlan& plan) {
  plan.validate();
  ComplianceReport report;
  report.effective_duty = plan.duty.duty_fraction();
  if (plan.band == Band::rfid_868) {
    detail::check_868(plan, report.violations, report.max_allowed_power);
  } else {
    detail::check_2450(plan, report.violations, report.max_allowed_power);
  }
  std::sort(report.violations.begin(), report.violations.end());
  report.violations.erase(
      std::unique(report.violations.begin(), report.violations.end(),
                  [](const Violation& a, const Violation& b) {
                    return a.rule == b.rule && a.message == b.message;
                  }),
      report.violations.end());
  report.compliant = report.violations.empty();
  return report;
}

/// Duty-weighted average EIRP of a compliant plan. Non-compliant plans are
/// rejected; use check_plan first.
inline PowerQuantity effective_average_eirp(const TransmissionPlan& plan) {
  const ComplianceReport report = check_plan(plan);
  if (!report.compliant) {
    std::string codes;
    for (const auto& v : report.violations) {
      if (!codes.empty()) codes += ", ";
      codes += v.rule;
    }
    throw std::invalid_argument(
        "effective_average_eirp requires a compliant plan; violations: " +
        codes);
  }
  return PowerQuantity::from_watts(plan.eirp().watts() *
                                   plan.duty.duty_fraction());
}

struct BandCandidate {
  std::string id;
  TransmissionPlan plan;
};

struct BandRankingRow {
  std::string id;
  Band band = Band::rfid_868;
  bool compliant = false;
  double delivered_w = 0.0;  // duty-averaged power into the capacitor
  double avg_eirp_w = 0.0;
};

struct BandRanking {
  Distance reference_distance = Distance::from_meters(5.0);
  std::vector<BandRankingRow> rows;  // best first
};

/// Ranks candidate plans by delivered capacitor power at a reference link:
/// peak receive power through the band's harvester chain, scaled by the
/// plan's duty fraction. Non-compliant candidates are kept in the table
/// (flagged, ranked by the same metric) so the comparison stays total.
inline BandRanking compare_bands(std::span<const BandCandidate> candidates,
                                 const HarvesterStage& stage_868,
                                 const HarvesterStage& stage_2450,
                                 Distance reference_distance =
                                     Distance::from_meters(5.0),
                                 const Antenna& tag_antenna = Antenna::omni(2.15),
                                 const PropagationModel& model = {}) {
  BandRanking out;
  out.reference_distance = reference_distance;
  for (const auto& cand : candidates) {
    const TransmissionPlan& plan = cand.plan;
    const BandInfo& info = BandInfo::of(plan.band);
    BandRankingRow row;
    row.id = cand.id;
    row.band = plan.band;
    row.compliant = check_plan(plan).compliant;

    const auto freq = info.channel_frequency(plan.channel);
    const Frequency f =
        freq ? *freq
             : Frequency::from_mhz((info.low_mhz + info.high_mhz) / 2.0);
    Beacon beacon;
    beacon.id = cand.id;
    beacon.erp = plan.erp;
    beacon.frequency = f;
    beacon.antenna = Antenna::omni(0.0);  // ERP already fixes the radiated power
    const PowerQuantity peak_rx =
        received_power(beacon, tag_antenna, reference_distance, model);
    const HarvesterStage& stage =
        plan.band == Band::rfid_868 ? stage_868 : stage_2450;
    row.delivered_w =
        harvested_power(peak_rx, stage).watts * plan.duty.duty_fraction();
    row.avg_eirp_w = plan.eirp().watts() * plan.duty.duty_fraction();
    out.rows.push_back(std::move(row));
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const BandRankingRow& a, const BandRankingRow& b) {
              if (a.delivered_w != b.delivered_w)
                return a.delivered_w > b.delivered_w;
              if (a.avg_eirp_w != b.avg_eirp_w)
                return a.avg_eirp_w > b.avg_eirp_w;
              return a.id < b.id;
            });
  return out;
}

}  // namespace wptsim
