#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace wptsim {

/// Periodic two-phase transmit schedule: on_s of carrier followed by
/// off_s of silence. off_s == 0 means continuous wave.
struct DutySchedule {
  double on_s = 1.0;
  double off_s = 0.0;

  static DutySchedule continuous_wave() { return DutySchedule{1.0, 0.0}; }

  bool continuous() const { return off_s == 0.0; }
  double period_s() const { return on_s + off_s; }
  double duty_fraction() const { return on_s / period_s(); }

  void validate() const {
    if (!(on_s > 0.0) || !std::isfinite(on_s)) {
      throw std::invalid_argument("duty on_s must be finite and > 0, got " +
                                  std::to_string(on_s));
    }
    if (!(off_s >= 0.0) || !std::isfinite(off_s)) {
      throw std::invalid_argument("duty off_s must be finite and >= 0, got " +
                                  std::to_string(off_s));
    }
  }
};

}  // namespace wptsim
