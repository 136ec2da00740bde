#include "lwtune/model.hpp"

#include <cmath>

#include "lwtune/errors.hpp"

namespace lwtune {
namespace {

// |gamma - 1| at or below this counts as critically damped. Keeps the pole
// computation away from the branch point's square-root sensitivity.
constexpr double critical_tolerance = 1e-12;

void require_positive_gamma(double gamma) {
  if (!std::isfinite(gamma) || gamma <= 0.0)
    throw DomainError("gamma must be positive and finite");
}

}  // namespace

FotdPlant::FotdPlant(double gain, double time_constant, double delay)
    : gain(gain), time_constant(time_constant), delay(delay) {
  if (!std::isfinite(gain) || gain == 0.0)
    throw DomainError("plant gain K must be finite and nonzero");
  if (!std::isfinite(time_constant) || time_constant <= 0.0)
    throw DomainError("plant time constant T must be positive and finite");
  if (!std::isfinite(delay) || delay <= 0.0)
    throw DomainError("plant delay L must be positive and finite");
}

const char* to_string(DampingRegime regime) {
  switch (regime) {
    case DampingRegime::overdamped:
      return "overdamped";
    case DampingRegime::critically_damped:
      return "critically-damped";
    case DampingRegime::underdamped:
      return "underdamped";
  }
  return "unknown";
}

DampingRegime classify_damping(double gamma) {
  require_positive_gamma(gamma);
  if (std::abs(gamma - 1.0) <= critical_tolerance)
    return DampingRegime::critically_damped;
  return gamma < 1.0 ? DampingRegime::overdamped : DampingRegime::underdamped;
}

PiGains gains_from_gamma(const FotdPlant& plant, double gamma) {
  require_positive_gamma(gamma);
  const double ki = gamma * inv_e / (plant.gain * plant.delay);
  return PiGains{plant.time_constant * ki, ki};
}

GammaSpec gamma_from_gains(const FotdPlant& plant, const PiGains& gains) {
  if (!std::isfinite(gains.ki))
    throw DomainError("gamma_from_gains: ki must be finite");
  const double gamma = plant.gain * gains.ki * plant.delay / inv_e;
  if (!(gamma > 0.0))
    throw DomainError("gamma_from_gains: K * ki must be positive");
  return GammaSpec{gamma, classify_damping(gamma)};
}

PolePair closed_loop_poles(const FotdPlant& plant, double gamma) {
  const DampingRegime regime = classify_damping(gamma);
  if (regime == DampingRegime::critically_damped) {
    const std::complex<double> s{-1.0 / plant.delay, 0.0};
    return PolePair{s, s, regime};
  }
  const double z = -(gamma * inv_e);
  const std::complex<double> s1 =
      lambert_w(WBranch::principal, z) / plant.delay;
  const std::complex<double> s2 =
      lambert_w(WBranch::minus_one, z) / plant.delay;
  return PolePair{s1, s2, regime};
}

}  // namespace lwtune
