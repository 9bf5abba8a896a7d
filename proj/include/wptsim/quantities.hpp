#pragma once

#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>

namespace wptsim {

inline constexpr double speed_of_light_m_per_s = 299'792'458.0;

/// EIRP(dBm) = ERP(dBm) + 2.15 (half-wave dipole reference gain).
inline constexpr double dipole_reference_gain_db = 2.15;

inline double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) {
    throw std::domain_error("dBm undefined for non-positive power (" +
                            std::to_string(watts) + " W)");
  }
  return 10.0 * std::log10(watts) + 30.0;
}

inline double dbm_to_watts_value(double dbm) {
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

/// Power stored canonically in watts (linear). dB values are views,
/// defined only for strictly positive power.
class PowerQuantity {
 public:
  PowerQuantity() = default;

  static PowerQuantity from_watts(double watts) {
    if (!(watts >= 0.0) || !std::isfinite(watts)) {
      throw std::invalid_argument("power must be finite and >= 0 W, got " +
                                  std::to_string(watts));
    }
    return PowerQuantity(watts);
  }

  static PowerQuantity from_dbm(double dbm) {
    if (!std::isfinite(dbm)) {
      throw std::invalid_argument("power in dBm must be finite");
    }
    return PowerQuantity(dbm_to_watts_value(dbm));
  }

  static PowerQuantity zero() { return PowerQuantity(0.0); }

  double watts() const { return watts_; }
  double milliwatts() const { return watts_ * 1e3; }
  double dbm() const { return watts_to_dbm(watts_); }
  bool is_zero() const { return watts_ == 0.0; }

  PowerQuantity scaled(double factor) const {
    return from_watts(watts_ * factor);
  }

  friend PowerQuantity operator+(PowerQuantity a, PowerQuantity b) {
    return PowerQuantity(a.watts_ + b.watts_);
  }
  friend auto operator<=>(PowerQuantity a, PowerQuantity b) = default;

 private:
  explicit PowerQuantity(double watts) : watts_(watts) {}
  double watts_ = 0.0;
};

inline PowerQuantity dbm_to_watts(double dbm) {
  return PowerQuantity::from_dbm(dbm);
}

inline PowerQuantity erp_to_eirp(PowerQuantity erp) {
  return PowerQuantity::from_dbm(erp.dbm() + dipole_reference_gain_db);
}

inline PowerQuantity eirp_to_erp(PowerQuantity eirp) {
  return PowerQuantity::from_dbm(eirp.dbm() - dipole_reference_gain_db);
}

class Frequency {
 public:
  static Frequency from_hz(double hertz) {
    if (!(hertz > 0.0) || !std::isfinite(hertz)) {
      throw std::invalid_argument("frequency must be finite and > 0 Hz, got " +
                                  std::to_string(hertz));
    }
    return Frequency(hertz);
  }
  static Frequency from_mhz(double mhz) { return from_hz(mhz * 1e6); }
  static Frequency from_ghz(double ghz) { return from_hz(ghz * 1e9); }

  double hertz() const { return hertz_; }
  double megahertz() const { return hertz_ * 1e-6; }

  friend auto operator<=>(Frequency a, Frequency b) = default;

 private:
  explicit Frequency(double hertz) : hertz_(hertz) {}
  double hertz_ = 1.0;
};

class Distance {
 public:
  static Distance from_meters(double meters) {
    if (!(meters > 0.0) || !std::isfinite(meters)) {
      throw std::invalid_argument("distance must be finite and > 0 m, got " +
                                  std::to_string(meters));
    }
    return Distance(meters);
  }

  double meters() const { return meters_; }

  friend auto operator<=>(Distance a, Distance b) = default;

 private:
  explicit Distance(double meters) : meters_(meters) {}
  double meters_ = 1.0;
};

inline double wavelength_m(Frequency f) {
  return speed_of_light_m_per_s / f.hertz();
}

}  // namespace wptsim
