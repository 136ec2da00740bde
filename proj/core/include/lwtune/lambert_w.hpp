#pragma once

#include <complex>
#include <numbers>

#include "lwtune/errors.hpp"

namespace lwtune {

// 1/e as a compile-time constant. All call sites that form arguments near the
// branch point use this same constant, so that e.g. gamma = 1 maps to the
// argument -inv_e bit for bit and hits the branch-point fast path exactly.
inline constexpr double inv_e = 1.0 / std::numbers::e;

// Leftmost argument for which W is real: the two real branches meet at
// z = -1/e with the common value W = -1.
inline constexpr double branch_point = -inv_e;

// The two branches relevant to real arguments: W0 (principal) and W-1.
enum class WBranch : int {
  principal = 0,
  minus_one = -1,
};

// Maps an integer branch index to WBranch. Throws InvalidBranchError for
// anything outside {0, -1}; other branches are never real on the real line
// and are not needed here.
WBranch branch_from_index(int k);

// Lambert W on branch k in {0, -1} for real z, defined by w exp(w) = z.
//
// Result layout:
//   z >= -1/e          real result (imaginary part is exactly 0)
//   z  < -1/e          complex conjugate pair; the principal branch carries
//                      the root with positive imaginary part and W-1 its
//                      conjugate
//   z == -1/e          exactly -1 on both branches
//
// The iteration is Halley's method on f(w) = w exp(w) - z, started from a
// branch-point series or logarithmic guess, and satisfies
// |w exp(w) - z| <= 1e-12 * max(1, |z|) everywhere on the supported domain.
//
// Throws DomainError for non-finite z and for W-1 with z >= 0 (that branch
// has no finite real or relevant complex value there).
std::complex<double> lambert_w(WBranch branch, double z);

// Same as lambert_w but restricted to arguments with a real result.
// Throws DomainError when z < -1/e.
double lambert_w_real(WBranch branch, double z);

// Residual of the defining identity, |w exp(w) - z|. Useful for verifying a
// claimed value of W without knowing how it was computed.
double lambert_w_residual(std::complex<double> w, double z);

}  // namespace lwtune
