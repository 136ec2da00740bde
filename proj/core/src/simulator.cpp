#include "lwtune/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <tuple>
#include <utility>

#include "lwtune/errors.hpp"

namespace lwtune {
namespace {

constexpr double divergence_limit = 1e6;

struct Grid {
  double h = 0.0;     // snapped step, exactly delay / m
  std::size_t m = 0;  // steps per delay
  std::size_t n = 0;  // total steps; samples run 0..n
};

// Snaps the step so the delay is exactly m steps. Delayed values then live
// on grid points and the dead time introduces no interpolation error.
std::pair<double, std::size_t> snap_step(double step, double delay) {
  if (!std::isfinite(delay) || delay <= 0.0)
    throw DomainError("simulate: delay must be positive and finite");
  if (!std::isfinite(step) || step <= 0.0)
    throw DomainError("simulate: step must be positive and finite");
  const long long m = std::llround(delay / step);
  if (m < 1) throw DomainError("simulate: step must not exceed the delay");
  if (std::abs(static_cast<double>(m) * step - delay) > 1e-9 * delay)
    throw DomainError("simulate: step must divide the delay evenly");
  return {delay / static_cast<double>(m), static_cast<std::size_t>(m)};
}

Grid make_grid(const SimConfig& cfg, double delay) {
  if (!std::isfinite(cfg.horizon) || cfg.horizon < 10.0 * delay * (1.0 - 1e-12))
    throw DomainError("simulate: horizon must cover at least 10 delays");
  Grid g;
  std::tie(g.h, g.m) = snap_step(cfg.step, delay);
  g.n = static_cast<std::size_t>(std::ceil(cfg.horizon / g.h - 1e-9));
  return g;
}

// History value at t = (j + 1/2) h. The trajectory has derivative kinks at
// multiples of the delay (every m samples), so the interpolation stencil is
// kept inside the segment containing [j, j+1]; letting it straddle a kink
// would drop the local accuracy below the integrator's. Falls back to lower
// degree when the segment is coarser than 3 steps. `known` is the largest
// index already computed; all reads stay at or below it by construction.
double half_step_value(const std::vector<double>& a, std::size_t j,
                       std::size_t m, std::size_t known) {
  std::size_t lo = (j / m) * m;
  std::size_t hi = lo + m;
  if (hi > known) hi = known;
  if (hi - lo > 3) {
    std::size_t s = (j > lo) ? j - 1 : lo;
    if (s + 3 > hi) s = hi - 3;
    lo = s;
    hi = lo + 3;
  }
  const double x = static_cast<double>(j - lo) + 0.5;
  const double* p = a.data() + lo;
  switch (hi - lo) {
    case 0:
      return p[0];
    case 1:
      return p[0] + (p[1] - p[0]) * x;
    case 2:  // quadratic Lagrange on nodes 0,1,2
      return 0.5 * p[0] * (x - 1.0) * (x - 2.0) - p[1] * x * (x - 2.0) +
             0.5 * p[2] * x * (x - 1.0);
    default:  // cubic Lagrange on nodes 0,1,2,3
      return (-p[0] * (x - 1.0) * (x - 2.0) * (x - 3.0) +
              3.0 * p[1] * x * (x - 2.0) * (x - 3.0) -
              3.0 * p[2] * x * (x - 1.0) * (x - 3.0) +
              p[3] * x * (x - 1.0) * (x - 2.0)) /
             6.0;
  }
}

void guard_finite(double value, double t) {
  if (std::isfinite(value) && std::abs(value) <= divergence_limit) return;
  char buf[96];
  std::snprintf(buf, sizeof buf,
                "loop output diverged (|y| > 1e6) at t = %.6g; these gains "
                "do not stabilize the plant",
                t);
  throw UnstableLoopError(buf);
}

}  // namespace

SimConfig default_sim_config(const FotdPlant& plant) {
  const double raw = std::min(plant.time_constant, plant.delay) / 500.0;
  const double m = std::max(1.0, std::round(plant.delay / raw));
  return SimConfig{plant.delay / m, 40.0 * plant.delay, LoopForm::general};
}

StepResponse simulate_reduced(double loop_gain, double delay,
                              const SimConfig& cfg) {
  if (!std::isfinite(loop_gain) || loop_gain <= 0.0)
    throw DomainError("simulate_reduced: loop gain K*ki must be positive");
  const Grid g = make_grid(cfg, delay);

  std::vector<double> y(g.n + 1, 0.0);
  // The right-hand side A (1 - y(t-L)) has no current-state term, so the two
  // half-step RK4 stages coincide and the update is Simpson's rule over the
  // delayed samples. Until t reaches L the delayed setpoint is still 0 and
  // the output stays exactly at rest.
  for (std::size_t n = 0; n < g.n; ++n) {
    if (n < g.m) continue;
    const std::size_t j = n - g.m;
    const double k1 = loop_gain * (1.0 - y[j]);
    const double kmid = loop_gain * (1.0 - half_step_value(y, j, g.m, n));
    const double k4 = loop_gain * (1.0 - y[j + 1]);
    y[n + 1] = y[n] + g.h / 6.0 * (k1 + 4.0 * kmid + k4);
    guard_finite(y[n + 1], g.h * static_cast<double>(n + 1));
  }

  std::vector<double> u(g.n + 1);
  for (std::size_t i = 0; i <= g.n; ++i) u[i] = loop_gain * (1.0 - y[i]);
  return StepResponse{g.h, std::move(y), std::move(u)};
}

StepResponse simulate_general(const FotdPlant& plant, const PiGains& gains,
                              const SimConfig& cfg) {
  if (!std::isfinite(gains.kp) || !std::isfinite(gains.ki))
    throw DomainError("simulate_general: gains must be finite");
  const Grid g = make_grid(cfg, plant.delay);
  const double K = plant.gain;
  const double T = plant.time_constant;
  const double kp = gains.kp;
  const double ki = gains.ki;

  std::vector<double> x(g.n + 1, 0.0);  // plant state; y = x
  std::vector<double> q(g.n + 1, 0.0);  // integral of the error
  std::vector<double> u(g.n + 1, 0.0);  // controller output on grid points
  u[0] = kp;                            // e(0+) = 1, q(0) = 0

  const auto dx = [K, T](double xs, double u_delayed) {
    return (-xs + K * u_delayed) / T;
  };

  for (std::size_t n = 0; n < g.n; ++n) {
    // u(t - L) at the step start, midpoint and end. Before one delay has
    // elapsed the plant still sees the pre-step input, which is 0.
    double u0 = 0.0, umid = 0.0, u1 = 0.0;
    if (n >= g.m) {
      const std::size_t j = n - g.m;
      u0 = u[j];
      const double xm = half_step_value(x, j, g.m, n);
      const double qm = half_step_value(q, j, g.m, n);
      umid = kp * (1.0 - xm) + ki * qm;
      u1 = u[j + 1];
    }
    const double k1x = dx(x[n], u0);
    const double k1q = 1.0 - x[n];
    const double x2 = x[n] + 0.5 * g.h * k1x;
    const double k2x = dx(x2, umid);
    const double k2q = 1.0 - x2;
    const double x3 = x[n] + 0.5 * g.h * k2x;
    const double k3x = dx(x3, umid);
    const double k3q = 1.0 - x3;
    const double x4 = x[n] + g.h * k3x;
    const double k4x = dx(x4, u1);
    const double k4q = 1.0 - x4;
    x[n + 1] = x[n] + g.h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    q[n + 1] = q[n] + g.h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    u[n + 1] = kp * (1.0 - x[n + 1]) + ki * q[n + 1];
    guard_finite(x[n + 1], g.h * static_cast<double>(n + 1));
  }

  return StepResponse{g.h, std::move(x), std::move(u)};
}

StepResponse simulate(const FotdPlant& plant, const PiGains& gains,
                      const SimConfig& cfg) {
  if (cfg.form == LoopForm::general) return simulate_general(plant, gains, cfg);
  const double expected_kp = plant.time_constant * gains.ki;
  const double scale = std::max(1.0, std::max(std::abs(gains.kp),
                                              std::abs(expected_kp)));
  if (std::abs(gains.kp - expected_kp) > 1e-9 * scale)
    throw DomainError("simulate: the reduced form requires kp = T * ki");
  return simulate_reduced(plant.gain * gains.ki, plant.delay, cfg);
}

StepResponse method_of_steps_reference(double loop_gain, double delay,
                                       int n_segments, double step) {
  if (!std::isfinite(loop_gain) || loop_gain <= 0.0)
    throw DomainError(
        "method_of_steps_reference: loop gain must be positive");
  if (n_segments < 2 || n_segments > 6)
    throw DomainError(
        "method_of_steps_reference: n_segments must be between 2 and 6");
  const auto [h, m] = snap_step(step, delay);

  // Coefficients of the solution on [kL, (k+1)L] in powers of tau = t - kL.
  // Each segment integrates the previous one: y' = A (1 - y_prev(tau)), with
  // the constant term pinned by continuity at the segment join.
  std::vector<std::vector<double>> segments;
  segments.push_back({0.0});
  for (int k = 1; k < n_segments; ++k) {
    const std::vector<double>& prev = segments.back();
    double joint = 0.0;  // prev evaluated at tau = L
    for (auto c = prev.rbegin(); c != prev.rend(); ++c) joint = joint * delay + *c;
    std::vector<double> next;
    next.reserve(prev.size() + 1);
    next.push_back(joint);
    next.push_back(loop_gain * (1.0 - prev[0]));
    for (std::size_t d = 1; d < prev.size(); ++d)
      next.push_back(-loop_gain * prev[d] / static_cast<double>(d + 1));
    segments.push_back(std::move(next));
  }

  const std::size_t n = static_cast<std::size_t>(n_segments) * m;
  std::vector<double> y(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    std::size_t k = i / m;
    if (k >= segments.size()) k = segments.size() - 1;  // endpoint t = nL
    const double tau = h * static_cast<double>(i - k * m);
    const std::vector<double>& seg = segments[k];
    double v = 0.0;
    for (auto c = seg.rbegin(); c != seg.rend(); ++c) v = v * tau + *c;
    y[i] = v;
  }

  std::vector<double> u(n + 1);
  for (std::size_t i = 0; i <= n; ++i) u[i] = loop_gain * (1.0 - y[i]);
  return StepResponse{h, std::move(y), std::move(u)};
}

std::string to_csv(const StepResponse& response) {
  std::string out = "t,y,u\n";
  out.reserve(out.size() + response.size() * 60);
  char buf[160];
  for (std::size_t i = 0; i < response.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", response.time_at(i),
                  response.output_y[i], response.control_u[i]);
    out += buf;
  }
  return out;
}

}  // namespace lwtune
