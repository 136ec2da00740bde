#include "lwtune/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "lwtune/errors.hpp"

namespace lwtune {

PeakInfo peak_overshoot(const StepResponse& response) {
  const std::vector<double>& y = response.output_y;
  if (y.empty()) throw DomainError("peak_overshoot: empty response");
  if (std::abs(y.back() - 1.0) > final_value_tolerance)
    throw NotSettledError(
        "peak_overshoot: response has not reached steady state; extend the "
        "simulation horizon");
  const auto peak = std::max_element(y.begin(), y.end());
  PeakInfo info;
  info.overshoot_pct = std::max(0.0, (*peak - 1.0) * 100.0);
  info.peak_time = response.time_at(
      static_cast<std::size_t>(peak - y.begin()));
  return info;
}

SettlingInfo settling_time(const StepResponse& response, double band_pct) {
  if (!std::isfinite(band_pct) || band_pct <= 0.0)
    throw DomainError("settling_time: band must be positive");
  const std::vector<double>& y = response.output_y;
  if (y.empty()) throw DomainError("settling_time: empty response");

  const double band = band_pct / 100.0;
  std::size_t last = y.size();  // index of the last sample outside the band
  for (std::size_t i = y.size(); i-- > 0;) {
    if (std::abs(y[i] - 1.0) > band) {
      last = i;
      break;
    }
  }
  if (last == y.size()) return {0.0, true};       // never leaves the band
  if (last == y.size() - 1) return {std::numeric_limits<double>::quiet_NaN(),
                                    false};       // still outside at the end

  // Linear interpolation of the band crossing between the last outside
  // sample and its (inside) successor.
  const double y0 = y[last];
  const double y1 = y[last + 1];
  const double edge = y0 > 1.0 ? 1.0 + band : 1.0 - band;
  const double frac = (edge - y0) / (y1 - y0);
  return {(static_cast<double>(last) + frac) * response.step_h, true};
}

ResponseMetrics compute_metrics(const StepResponse& response,
                                double band_pct) {
  const SettlingInfo settle = settling_time(response, band_pct);
  const PeakInfo peak = peak_overshoot(response);
  ResponseMetrics metrics;
  metrics.overshoot_pct = peak.overshoot_pct;
  metrics.peak_time = peak.peak_time;
  metrics.settling_time = settle.time;
  metrics.settled = settle.settled;
  return metrics;
}

}  // namespace lwtune
