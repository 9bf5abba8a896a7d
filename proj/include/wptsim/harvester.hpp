#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wptsim/linkbudget.hpp"
#include "wptsim/quantities.hpp"

namespace wptsim {

/// RF-path efficiency as a piecewise-linear function of harvester input
/// power in dBm. A single point gives a flat curve; multi-point curves come
/// from the harvester datasheet (CSV: input_dbm,eta_rf with strictly
/// increasing first column). Lookups outside the covered range clamp to the
/// nearest end point.
class EtaRfCurve {
 public:
  static EtaRfCurve flat(double eta) {
    return from_points({{0.0, eta}});
  }

  static EtaRfCurve from_points(std::vector<std::array<double, 2>> points) {
    if (points.empty()) {
      throw std::invalid_argument("eta_rf curve needs at least one point");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double dbm = points[i][0];
      const double eta = points[i][1];
      if (!std::isfinite(dbm) || !std::isfinite(eta)) {
        throw std::invalid_argument("eta_rf curve values must be finite");
      }
      if (!(eta > 0.0) || eta > 1.0) {
        throw std::invalid_argument("eta_rf must be in (0, 1], got " +
                                    std::to_string(eta));
      }
      if (i > 0 && !(dbm > points[i - 1][0])) {
        throw std::invalid_argument(
            "eta_rf curve input_dbm column must be strictly increasing");
      }
    }
    EtaRfCurve c;
    c.points_ = std::move(points);
    return c;
  }

  static EtaRfCurve from_csv(std::istream& in) {
    std::vector<std::array<double, 2>> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw std::invalid_argument("eta_rf CSV line " + std::to_string(lineno) +
                                    ": expected two comma-separated columns");
      }
      const std::string first = line.substr(0, comma);
      const std::string second = line.substr(comma + 1);
      if (lineno == 1 && first == "input_dbm") continue;  // optional header
      try {
        pts.push_back({std::stod(first), std::stod(second)});
      } catch (const std::exception&) {
        throw std::invalid_argument("eta_rf CSV line " + std::to_string(lineno) +
                                    ": not numeric: " + line);
      }
    }
    return from_points(std::move(pts));
  }

  static EtaRfCurve from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::invalid_argument("cannot open eta_rf CSV file: " + path);
    }
    return from_csv(in);
  }

  double at(double input_dbm) const {
    const auto& p = points_;
    if (input_dbm <= p.front()[0]) return p.front()[1];
    if (input_dbm >= p.back()[0]) return p.back()[1];
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (input_dbm <= p[i][0]) {
        const double x0 = p[i - 1][0], y0 = p[i - 1][1];
        const double x1 = p[i][0], y1 = p[i][1];
        return y0 + (y1 - y0) * (input_dbm - x0) / (x1 - x0);
      }
    }
    return p.back()[1];
  }

  const std::vector<std::array<double, 2>>& points() const { return points_; }

 private:
  std::vector<std::array<double, 2>> points_;
};

/// The multiplicative receive-side efficiency pipeline:
/// dipole (eta_d) -> RF path (eta_rf, input-power dependent) ->
/// boost converter (eta_b) -> storage capacitor (eta_c).
/// The LDO term (eta_ldo) sits on the discharge side: it derates the energy
/// usable by the load, not the energy flowing into the capacitor.
struct EfficiencyChain {
  double eta_d = 1.0;
  EtaRfCurve eta_rf = EtaRfCurve::flat(1.0);
  double eta_b = 1.0;
  double eta_ldo = 1.0;
  double eta_c = 1.0;

  /// E-peas AEM40940 operating point at 868 MHz (-10 dBm receive power).
  static EfficiencyChain aem40940_868mhz() {
    EfficiencyChain c;
    c.eta_d = 0.7517;
    c.eta_rf = EtaRfCurve::flat(0.3778);
    c.eta_b = 0.7380;
    c.eta_ldo = 0.7407;
    c.eta_c = 0.99;
    return c;
  }

  /// Same chipset at 2.4 GHz: better dipole, much worse RF path.
  static EfficiencyChain aem40940_2g4() {
    EfficiencyChain c;
    c.eta_d = 0.80;
    c.eta_rf = EtaRfCurve::flat(0.1413);
    c.eta_b = 0.7380;
    c.eta_ldo = 0.7407;
    c.eta_c = 0.99;
    return c;
  }

  /// eta_d * eta_rf * eta_b * eta_c for a given receive power (dBm at the
  /// tag antenna port). eta_rf is looked up at the harvester input, i.e.
  /// after eta_d.
  double end_to_end_multiplier(double receive_dbm) const {
    const double input_dbm = receive_dbm + 10.0 * std::log10(eta_d);
    return eta_d * eta_rf.at(input_dbm) * eta_b * eta_c;
  }

  void validate() const {
    for (const auto& [name, v] : {std::pair{"eta_d", eta_d},
                                  std::pair{"eta_b", eta_b},
                                  std::pair{"eta_ldo", eta_ldo},
                                  std::pair{"eta_c", eta_c}}) {
      if (!(v > 0.0) || v > 1.0) {
        throw std::invalid_argument(std::string(name) +
                                    " must be in (0, 1], got " +
                                    std::to_string(v));
      }
    }
  }
};

/// One harvester stage: efficiency chain plus the input-power window in
/// which the chipset charges at all, and the sub-band channels its matching
/// network is tuned to (empty set = all channels).
struct HarvesterStage {
  EfficiencyChain chain = EfficiencyChain::aem40940_868mhz();
  PowerQuantity sensitivity_min = PowerQuantity::from_dbm(-19.0);
  PowerQuantity sensitivity_max = PowerQuantity::from_dbm(10.0);
  std::set<int> tuned_channels;

  bool accepts_channel(int channel) const {
    return tuned_channels.empty() || tuned_channels.count(channel) > 0;
  }

  void validate() const {
    chain.validate();
    if (!(sensitivity_min < sensitivity_max)) {
      throw std::invalid_argument(
          "harvester sensitivity_min must be below sensitivity_max");
    }
  }
};

/// Storage capacitor with its operating window. v_chrdy is the voltage at
/// which stored energy becomes usable; v_ovdis is the cut-off floor.
/// v_now is simulation state. v_ceiling, when set, bounds charging above
/// v_chrdy; unset means charging stops at v_chrdy.
struct StorageCapacitor {
  double capacitance_f = 22e-6;
  double v_chrdy = 3.10;
  double v_ovdis = 2.80;
  double v_now = 0.0;
  std::optional<double> v_ceiling;

  double ceiling_v() const { return v_ceiling.value_or(v_chrdy); }
  double energy_at_v(double v) const { return capacitance_f * v * v / 2.0; }
  double stored_energy_j() const { return energy_at_v(v_now); }
  double voltage_for_energy(double joules) const {
    return std::sqrt(2.0 * joules / capacitance_f);
  }

  void validate() const {
    if (!(capacitance_f > 0.0)) {
      throw std::invalid_argument("capacitance must be > 0 F, got " +
                                  std::to_string(capacitance_f));
    }
    if (!(v_ovdis >= 0.0) || !(v_ovdis < v_chrdy)) {
      throw std::invalid_argument(
          "capacitor window requires 0 <= v_ovdis < v_chrdy (got v_ovdis=" +
          std::to_string(v_ovdis) + ", v_chrdy=" + std::to_string(v_chrdy) +
          ")");
    }
    if (!(v_now >= 0.0)) {
      throw std::invalid_argument("capacitor v_now must be >= 0");
    }
    if (v_ceiling && *v_ceiling < v_chrdy) {
      throw std::invalid_argument("capacitor v_ceiling must be >= v_chrdy");
    }
  }
};

/// E = C * (v_to^2 - v_from^2) / 2.
inline double storage_energy(const StorageCapacitor& cap, double v_from,
                             double v_to) {
  if (!(v_from >= 0.0) || !(v_to >= v_from)) {
    throw std::invalid_argument(
        "storage_energy requires 0 <= v_from <= v_to (got v_from=" +
        std::to_string(v_from) + ", v_to=" + std::to_string(v_to) + ")");
  }
  return cap.capacitance_f * (v_to * v_to - v_from * v_from) / 2.0;
}

struct HarvestResult {
  double watts = 0.0;
  bool clipped = false;            // input above sensitivity_max
  bool below_sensitivity = false;  // input below sensitivity_min
};

/// Power flowing into the capacitor for a given receive power at the tag
/// antenna port. The sensitivity window applies at the harvester input,
/// i.e. after eta_d. Inputs above sensitivity_max clip to the value at
/// sensitivity_max and are flagged rather than rejected.
inline HarvestResult harvested_power(PowerQuantity p_rx,
                                     const HarvesterStage& stage) {
  const EfficiencyChain& c = stage.chain;
  const double p_in_w = p_rx.watts() * c.eta_d;
  if (p_in_w < stage.sensitivity_min.watts()) {
    return {0.0, false, true};
  }
  double effective_in_w = p_in_w;
  bool clipped = false;
  if (p_in_w > stage.sensitivity_max.watts()) {
    effective_in_w = stage.sensitivity_max.watts();
    clipped = true;
  }
  const double in_dbm = watts_to_dbm(effective_in_w);
  const double out_w = effective_in_w * c.eta_rf.at(in_dbm) * c.eta_b * c.eta_c;
  return {out_w, clipped, false};
}

struct ChargeTime {
  double seconds = 0.0;
  bool never = false;
};

/// Constant-power charge time for the window [v_from, v_to]. Zero harvested
/// power yields a "never" result, which is a value, not an error.
inline ChargeTime charge_time(const StorageCapacitor& cap, double v_from,
                              double v_to, double p_harv_w) {
  if (!(p_harv_w >= 0.0) || !std::isfinite(p_harv_w)) {
    throw std::invalid_argument("harvested power must be finite and >= 0 W");
  }
  const double energy = storage_energy(cap, v_from, v_to);
  if (energy == 0.0) return {0.0, false};
  if (p_harv_w == 0.0) return {0.0, true};
  return {energy / p_harv_w, false};
}

struct PowerSegment {
  double watts = 0.0;
  double duration_s = 0.0;
};

struct ChargeLedgerEntry {
  double t_start_s = 0.0;
  double duration_s = 0.0;
  double power_w = 0.0;
  double energy_absorbed_j = 0.0;
  bool clamped = false;  // ceiling reached inside this segment
};

struct IntegrateResult {
  StorageCapacitor cap;
  std::vector<ChargeLedgerEntry> ledger;
  double total_absorbed_j = 0.0;
};

/// Accumulates a piecewise-constant power profile into the capacitor for
/// `duration_s`, clamping at the ceiling voltage. If the profile is shorter
/// than the duration the remainder is idle; if longer it is truncated.
/// The ledger records the energy each segment actually delivered.
inline IntegrateResult integrate_charge(StorageCapacitor cap,
                                        std::span<const PowerSegment> profile,
                                        double duration_s) {
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    throw std::invalid_argument("integration duration must be >= 0 s");
  }
  IntegrateResult out;
  const double e_ceiling = cap.energy_at_v(cap.ceiling_v());
  double t = 0.0;
  double remaining = duration_s;
  for (const PowerSegment& seg : profile) {
    if (remaining <= 0.0) break;
    if (!(seg.watts >= 0.0) || !(seg.duration_s >= 0.0)) {
      throw std::invalid_argument(
          "power profile segments must have non-negative power and duration");
    }
    const double dt = std::min(seg.duration_s, remaining);
    if (dt == 0.0) continue;
    const double offered = seg.watts * dt;
    const double e_now = cap.stored_energy_j();
    const double absorbed = std::min(offered, std::max(0.0, e_ceiling - e_now));
    cap.v_now = cap.voltage_for_energy(e_now + absorbed);
    out.ledger.push_back(
        {t, dt, seg.watts, absorbed, absorbed < offered});
    out.total_absorbed_j += absorbed;
    t += dt;
    remaining -= dt;
  }
  out.cap = cap;
  return out;
}

struct CombinedHarvest {
  double watts = 0.0;
  std::vector<HarvestResult> per_stage;
};

/// Total capacitor input power from parallel harvester stages. The caller
/// assigns each stage the receive power present on its tuned channels.
inline CombinedHarvest combine_stages(std::span<const HarvesterStage> stages,
                                      std::span<const PowerQuantity> per_stage_rx) {
  if (stages.size() != per_stage_rx.size()) {
    throw std::invalid_argument(
        "combine_stages: stage and receive-power lists differ in length (" +
        std::to_string(stages.size()) + " vs " +
        std::to_string(per_stage_rx.size()) + ")");
  }
  CombinedHarvest out;
  out.per_stage.reserve(stages.size());
  for (std::size_t i = 0; i < stages.size(); ++i) {
    HarvestResult r = harvested_power(per_stage_rx[i], stages[i]);
    out.watts += r.watts;
    out.per_stage.push_back(r);
  }
  return out;
}

struct ColdstartRange {
  double meters = 0.0;
  bool unbounded = false;  // threshold never reached within 10 km
};

/// Largest distance at which the harvester input power still reaches
/// sensitivity_min, by closed-form inversion of the path-gain formula.
/// Returns meters = 0 if the threshold is missed even at the reference
/// distance, and the unbounded flag if it holds beyond 10 km.
inline ColdstartRange max_coldstart_distance(const Beacon& beacon,
                                             const Antenna& tag_antenna,
                                             const HarvesterStage& stage,
                                             const PropagationModel& model = {}) {
  constexpr double far_limit_m = 10'000.0;
  const double sens_w = stage.sensitivity_min.watts();
  if (sens_w <= 0.0) return {far_limit_m, true};
  const double front = beacon.eirp().watts() * tag_antenna.gain_linear() *
                       model.polarization_loss * stage.chain.eta_d;
  // Need front * g0 * (d0/d)^n >= sens  =>  d = d0 * (front*g0/sens)^(1/n).
  const double d0 = model.reference_distance_m;
  const double g0 =
      std::pow(wavelength_m(beacon.frequency) / (4.0 * std::numbers::pi * d0),
               2.0);
  const double ratio = front * g0 / sens_w;
  if (ratio < 1.0) return {0.0, false};
  const double d = d0 * std::pow(ratio, 1.0 / model.path_loss_exponent);
  if (d > far_limit_m) return {far_limit_m, true};
  return {d, false};
}

}  // namespace wptsim
