#pragma once

#include <limits>

#include "lwtune/simulator.hpp"

namespace lwtune {

// A response is considered to have reached steady state when its final
// sample is within this distance of the setpoint. Peak overshoot is only
// meaningful after that.
inline constexpr double final_value_tolerance = 1e-3;

struct PeakInfo {
  double overshoot_pct = 0.0;  // max(0, (peak - 1) * 100) for a unit step
  double peak_time = 0.0;      // earliest time attaining the maximum
};

struct SettlingInfo {
  // Last time |y - 1| leaves the band, linearly interpolated between
  // samples; 0 when the response never leaves the band; NaN when the final
  // sample is still outside (settled = false).
  double time = std::numeric_limits<double>::quiet_NaN();
  bool settled = false;
};

struct ResponseMetrics {
  double overshoot_pct = 0.0;
  double settling_time = std::numeric_limits<double>::quiet_NaN();
  double peak_time = 0.0;
  bool settled = false;
};

// Throws NotSettledError if the final sample is more than
// final_value_tolerance away from the setpoint.
PeakInfo peak_overshoot(const StepResponse& response);

// band_pct is the half-width of the settling band in percent of the
// setpoint (2.0 means the band [0.98, 1.02]). Requires band_pct > 0.
SettlingInfo settling_time(const StepResponse& response, double band_pct = 2.0);

// Both of the above in one record. Inherits peak_overshoot's precondition.
ResponseMetrics compute_metrics(const StepResponse& response,
                                double band_pct = 2.0);

}  // namespace lwtune
