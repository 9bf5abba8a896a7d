#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wptsim {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double distance_between(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Wraps an angle to (-180, 180].
inline double wrap_angle_deg(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a > 180.0) a -= 360.0;
  if (a <= -180.0) a += 360.0;
  return a;
}

/// Horizontal (xy-plane) azimuth from one point toward another, in degrees,
/// measured from the +x axis. Elevation is ignored.
inline double azimuth_deg(const Vec3& from, const Vec3& to) {
  return std::atan2(to.y - from.y, to.x - from.x) * 180.0 /
         std::numbers::pi;
}

enum class AntennaPattern { omnidirectional, directional };

/// Horizontal-plane antenna abstraction: gain, beamwidth, boresight.
/// radiation_efficiency is carried as metadata; receive-side efficiency is
/// accounted in the harvester chain (eta_d), not in the propagation math.
struct Antenna {
  AntennaPattern pattern = AntennaPattern::omnidirectional;
  double gain_dbi = 0.0;
  double horizontal_beamwidth_deg = 360.0;
  double boresight_azimuth_deg = 0.0;
  double radiation_efficiency = 1.0;

  static Antenna omni(double gain_dbi, double radiation_efficiency = 1.0) {
    Antenna a;
    a.pattern = AntennaPattern::omnidirectional;
    a.gain_dbi = gain_dbi;
    a.horizontal_beamwidth_deg = 360.0;
    a.radiation_efficiency = radiation_efficiency;
    a.validate();
    return a;
  }

  static Antenna directional(double gain_dbi, double beamwidth_deg,
                             double boresight_azimuth_deg = 0.0,
                             double radiation_efficiency = 1.0) {
    Antenna a;
    a.pattern = AntennaPattern::directional;
    a.gain_dbi = gain_dbi;
    a.horizontal_beamwidth_deg = beamwidth_deg;
    a.boresight_azimuth_deg = boresight_azimuth_deg;
    a.radiation_efficiency = radiation_efficiency;
    a.validate();
    return a;
  }

  double gain_linear() const { return std::pow(10.0, gain_dbi / 10.0); }

  bool is_omni() const { return pattern == AntennaPattern::omnidirectional; }

  void validate() const {
    if (!(radiation_efficiency > 0.0) || radiation_efficiency > 1.0) {
      throw std::invalid_argument(
          "antenna radiation_efficiency must be in (0, 1], got " +
          std::to_string(radiation_efficiency));
    }
    if (!(horizontal_beamwidth_deg > 0.0) ||
        horizontal_beamwidth_deg > 360.0) {
      throw std::invalid_argument(
          "antenna horizontal_beamwidth_deg must be in (0, 360], got " +
          std::to_string(horizontal_beamwidth_deg));
    }
    if (is_omni() && horizontal_beamwidth_deg != 360.0) {
      throw std::invalid_argument(
          "omnidirectional antenna requires horizontal_beamwidth_deg = 360");
    }
    if (!std::isfinite(gain_dbi) || !std::isfinite(boresight_azimuth_deg)) {
      throw std::invalid_argument("antenna angles and gain must be finite");
    }
  }
};

}  // namespace wptsim
