#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wptsim/antenna.hpp"
#include "wptsim/duty.hpp"
#include "wptsim/quantities.hpp"

namespace wptsim {

/// Free-space propagation with a configurable path-loss exponent.
/// Exponent 2 is plain Friis; larger exponents steepen the roll-off beyond
/// the reference distance. Distances below reference_distance_m are
/// rejected (near field).
struct PropagationModel {
  double path_loss_exponent = 2.0;
  double reference_distance_m = 1.0;
  // Optional scalar mismatch loss, linear. 1.0 = no loss.
  double polarization_loss = 1.0;

  void validate() const {
    if (!(path_loss_exponent >= 2.0) || !std::isfinite(path_loss_exponent)) {
      throw std::invalid_argument(
          "path_loss_exponent must be >= 2, got " +
          std::to_string(path_loss_exponent));
    }
    // 0.25 m is the shortest supported reference; accuracy below ~1 m is a
    // far-field extrapolation and is documented as such.
    if (!(reference_distance_m >= 0.25) ||
        !std::isfinite(reference_distance_m)) {
      throw std::invalid_argument(
          "reference_distance_m must be >= 0.25, got " +
          std::to_string(reference_distance_m));
    }
    if (!(polarization_loss > 0.0) || polarization_loss > 1.0) {
      throw std::invalid_argument("polarization_loss must be in (0, 1], got " +
                                  std::to_string(polarization_loss));
    }
  }
};

/// A transmit node: position, antenna, ERP, carrier, schedule and the
/// high-power sub-band channel it radiates on.
struct Beacon {
  std::string id = "beacon";
  Vec3 position{};
  Antenna antenna{};
  PowerQuantity erp = PowerQuantity::from_dbm(27.0);
  Frequency frequency = Frequency::from_mhz(865.7);
  DutySchedule duty = DutySchedule::continuous_wave();
  int channel = 1;

  PowerQuantity eirp() const { return erp_to_eirp(erp); }

  void validate() const {
    if (id.empty()) throw std::invalid_argument("beacon id must be non-empty");
    if (!(erp.watts() > 0.0)) {
      throw std::invalid_argument("beacon erp must be > 0");
    }
    antenna.validate();
    duty.validate();
  }
};

/// Dimensionless power ratio (lambda / (4 pi d0))^2 * (d0 / d)^n.
/// For n = 2 this reduces to the Friis free-space gain (lambda / (4 pi d))^2.
inline double free_space_path_gain(Distance d, Frequency f,
                                   const PropagationModel& model = {}) {
  if (d.meters() < model.reference_distance_m) {
    throw std::invalid_argument(
        "distance " + std::to_string(d.meters()) +
        " m is below the propagation reference distance " +
        std::to_string(model.reference_distance_m) + " m (near field)");
  }
  const double lambda = wavelength_m(f);
  const double d0 = model.reference_distance_m;
  const double g0 = std::pow(lambda / (4.0 * std::numbers::pi * d0), 2.0);
  return g0 * std::pow(d0 / d.meters(), model.path_loss_exponent);
}

/// Receive power at the tag antenna port:
///   P_rx = EIRP * G_rx * polarization_loss * path_gain.
/// The tag's radiation efficiency (eta_d) is deliberately NOT applied here;
/// it belongs to the harvester chain so the two are never double counted.
/// For directional beacons the caller is responsible for beam membership
/// (see in_beam); this function evaluates the boresight link.
inline PowerQuantity received_power(const Beacon& beacon,
                                    const Antenna& tag_antenna, Distance d,
                                    const PropagationModel& model = {}) {
  const double gain = free_space_path_gain(d, beacon.frequency, model);
  const double rx_w = beacon.eirp().watts() * tag_antenna.gain_linear() *
                      model.polarization_loss * gain;
  return PowerQuantity::from_watts(rx_w);
}

/// True iff the horizontal azimuth from beacon to tag lies within
/// +-beamwidth/2 of the boresight (inclusive). Elevation is ignored.
inline bool in_beam(const Beacon& beacon, const Vec3& tag_position) {
  if (beacon.antenna.is_omni()) {
    throw std::invalid_argument(
        "in_beam is undefined for an omnidirectional beacon ('" + beacon.id +
        "')");
  }
  const double az = azimuth_deg(beacon.position, tag_position);
  const double off =
      std::fabs(wrap_angle_deg(az - beacon.antenna.boresight_azimuth_deg));
  return off <= beacon.antenna.horizontal_beamwidth_deg / 2.0;
}

}  // namespace wptsim
