#pragma once

#include <complex>

#include "lwtune/lambert_w.hpp"

namespace lwtune {

// First-order plant with pure dead time: G(s) = K exp(-s L) / (T s + 1).
struct FotdPlant {
  double gain;           // K; any nonzero value (negative gains are legal
                         // at the model level, the tuner requires K > 0)
  double time_constant;  // T > 0, seconds
  double delay;          // L > 0, seconds

  FotdPlant(double gain, double time_constant, double delay);
};

// PI controller u(t) = kp e(t) + ki integral(e).
struct PiGains {
  double kp = 0.0;
  double ki = 0.0;
};

// Damping class of the dominant closed-loop pole pair, decided by gamma.
enum class DampingRegime {
  overdamped,         // gamma < 1: two distinct real poles
  critically_damped,  // gamma = 1: double real pole at -1/L
  underdamped,        // gamma > 1: complex conjugate pair
};

const char* to_string(DampingRegime regime);

// The dimensionless loop parameter gamma = K Ki e L together with its
// damping class. The classification treats |gamma - 1| <= 1e-12 as critical.
struct GammaSpec {
  double gamma = 0.0;
  DampingRegime regime = DampingRegime::critically_damped;
};

// Dominant pole pair of the delayed closed loop, s = W_k(-gamma/e) / L.
// s1 comes from the principal branch and is the slow (rightmost) pole when
// the pair is real; s2 = conj(s1) when the pair is complex.
struct PolePair {
  std::complex<double> s1;
  std::complex<double> s2;
  DampingRegime regime = DampingRegime::critically_damped;
};

DampingRegime classify_damping(double gamma);

// PI gains realizing a given gamma under the zero-cancellation constraint
// kp = T ki: ki = gamma / (K e L), kp = T ki. Requires gamma > 0 and finite.
PiGains gains_from_gamma(const FotdPlant& plant, double gamma);

// Inverse map: gamma = K ki e L, classified. Requires K ki > 0.
GammaSpec gamma_from_gains(const FotdPlant& plant, const PiGains& gains);

// Both branches of s = W(-gamma/e) / L. Requires gamma > 0 and finite.
// For gamma = 1 (within the classification tolerance) returns the exact
// double pole -1/L on both slots.
PolePair closed_loop_poles(const FotdPlant& plant, double gamma);

}  // namespace lwtune
