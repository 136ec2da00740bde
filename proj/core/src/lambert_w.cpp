#include "lwtune/lambert_w.hpp"

#include <cmath>
#include <string>

namespace lwtune {
namespace {

constexpr int max_iterations = 50;
constexpr double newton_step_tolerance = 1e-14;

// Halley iteration on f(w) = w exp(w) - z for a real root. The correction
// uses f'' / f' = (w + 2) / (w + 1); the `principal` flag keeps iterates on
// their own side of the branch junction at w = -1 so a long early step
// cannot hop branches.
double halley_real(double w, double z, bool principal) {
  for (int i = 0; i < max_iterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (f == 0.0) break;
    const double fp = ew * (w + 1.0);
    if (fp == 0.0) break;  // at the double root; no direction to move
    const double newton = f / fp;
    double denom = 1.0 - 0.5 * newton * (w + 2.0) / (w + 1.0);
    if (denom == 0.0 || !std::isfinite(denom)) denom = 1.0;
    double next = w - newton / denom;
    if (!std::isfinite(next)) next = w - newton;
    if (principal ? next < -1.0 : next > -1.0) next = 0.5 * (w - 1.0);
    w = next;
    if (std::abs(newton) <= newton_step_tolerance) break;
  }
  return w;
}

std::complex<double> halley_complex(std::complex<double> w, double z) {
  for (int i = 0; i < max_iterations; ++i) {
    const std::complex<double> ew = std::exp(w);
    const std::complex<double> f = w * ew - z;
    const std::complex<double> fp = ew * (w + 1.0);
    if (fp == 0.0) break;
    const std::complex<double> newton = f / fp;
    std::complex<double> denom = 1.0 - 0.5 * newton * (w + 2.0) / (w + 1.0);
    if (denom == 0.0) denom = 1.0;
    w -= newton / denom;
    if (std::abs(newton) <= newton_step_tolerance) break;
  }
  return w;
}

}  // namespace

WBranch branch_from_index(int k) {
  if (k == 0) return WBranch::principal;
  if (k == -1) return WBranch::minus_one;
  throw InvalidBranchError("lambert_w: branch index " + std::to_string(k) +
                           " is not supported (only 0 and -1 are real-valued "
                           "on the real line)");
}

std::complex<double> lambert_w(WBranch branch, double z) {
  if (!std::isfinite(z)) throw DomainError("lambert_w: argument must be finite");
  if (branch == WBranch::minus_one && z >= 0.0)
    throw DomainError("lambert_w: the -1 branch requires z < 0");

  // The two real branches meet here with value -1; the iteration would be
  // ill-conditioned (double root), so return the exact value directly.
  if (z == branch_point) return {-1.0, 0.0};

  if (z < branch_point) {
    // No real root. The roots form a conjugate pair; compute the upper one
    // and mirror. ez + 1 < 0, so the series variable p is imaginary.
    const double t = std::numbers::e * z + 1.0;
    std::complex<double> guess;
    if (std::abs(t) < 0.2) {
      const std::complex<double> p{0.0, std::sqrt(-2.0 * t)};
      guess = -1.0 + p - p * p / 3.0;
    } else {
      // Asymptotic guess from the principal log of a negative real number.
      const std::complex<double> l1{std::log(-z), std::numbers::pi};
      guess = l1 - std::log(l1);
    }
    std::complex<double> w = halley_complex(guess, z);
    if (w.imag() < 0.0) w = std::conj(w);
    return branch == WBranch::principal ? w : std::conj(w);
  }

  if (branch == WBranch::principal) {
    if (z == 0.0) return {0.0, 0.0};
    const double t = std::numbers::e * z + 1.0;  // >= 0 here
    const double p = std::sqrt(2.0 * t);
    const double guess = t < 0.2 ? -1.0 + p - p * p / 3.0 : -1.0 + p;
    return {halley_real(guess, z, true), 0.0};
  }

  // W-1 on (-1/e, 0): logarithmic guess away from the branch point, series
  // with the negative root of p next to it.
  double guess;
  if (z > -0.1) {
    const double l = std::log(-z);
    guess = l - std::log(-l);
  } else {
    const double p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    guess = -1.0 - p - p * p / 3.0;
  }
  return {halley_real(guess, z, false), 0.0};
}

double lambert_w_real(WBranch branch, double z) {
  if (std::isfinite(z) && z < branch_point)
    throw DomainError(
        "lambert_w_real: no real value below the branch point z = -1/e");
  return lambert_w(branch, z).real();
}

double lambert_w_residual(std::complex<double> w, double z) {
  return std::abs(w * std::exp(w) - z);
}

}  // namespace lwtune
