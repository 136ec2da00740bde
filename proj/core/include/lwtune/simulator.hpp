#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lwtune/model.hpp"

namespace lwtune {

// Which closed-loop formulation to integrate. With kp = T ki the plant pole
// cancels and the loop collapses to the scalar delay equation
// y'(t) = K ki (r(t-L) - y(t-L)); "reduced" integrates that form directly,
// "general" keeps the full plant + PI state and works for any gains.
enum class LoopForm {
  general,
  reduced,
};

// Fixed-step integration settings. The step must tile the delay exactly
// (delay / step within 1e-9 relative of an integer) so delayed samples land
// on grid points; the horizon must cover at least 10 delays.
struct SimConfig {
  double step = 0.0;     // seconds
  double horizon = 0.0;  // seconds
  LoopForm form = LoopForm::general;
};

// step = min(T, L)/500 snapped to divide L, horizon = 40 L, general form.
SimConfig default_sim_config(const FotdPlant& plant);

// Unit step response sampled uniformly at t = i * step_h, i = 0..size()-1.
// output_y is the loop output (setpoint 1), control_u the controller output.
struct StepResponse {
  double step_h = 0.0;
  std::vector<double> output_y;
  std::vector<double> control_u;

  std::size_t size() const noexcept { return output_y.size(); }
  double time_at(std::size_t i) const noexcept {
    return step_h * static_cast<double>(i);
  }
};

// Classical fixed-step RK4 with the delayed terms read from the stored
// history (cubic interpolation at half steps). Both simulators start from
// rest, apply a unit setpoint step at t = 0, and treat the dead time
// exactly: the output is identically zero until t > L.
//
// Throws UnstableLoopError if |y| exceeds 1e6 or stops being finite, and
// DomainError for bad configs (non-positive step/horizon, step not dividing
// the delay, horizon shorter than 10 delays).

// Full loop: plant state x (= y) and integrator state q, u = kp(1-y) + ki q,
// x' = (-x + K u(t-L)) / T. Any finite gains are accepted.
StepResponse simulate_general(const FotdPlant& plant, const PiGains& gains,
                              const SimConfig& cfg);

// Reduced loop y'(t) = loop_gain * (r(t-L) - y(t-L)) with loop_gain = K ki.
// Requires loop_gain > 0. The reported control_u is the reduced-loop drive
// loop_gain * (1 - y), in output units.
StepResponse simulate_reduced(double loop_gain, double delay,
                              const SimConfig& cfg);

// Dispatch on cfg.form. The reduced form additionally requires
// kp = T ki (to 1e-9 relative); violating gains are a DomainError.
StepResponse simulate(const FotdPlant& plant, const PiGains& gains,
                      const SimConfig& cfg);

// Exact reference for the reduced loop over the first n_segments delay
// intervals (2 <= n_segments <= 6). On [kL, (k+1)L] the solution is a
// polynomial of degree k, obtained by integrating the previous segment's
// polynomial; this evaluates those polynomials on the same grid the
// simulator would use, with no time stepping involved, so it serves as an
// independent check of the integrator.
StepResponse method_of_steps_reference(double loop_gain, double delay,
                                       int n_segments, double step);

// CSV with header "t,y,u", one row per sample, 17 significant digits
// (round-trips double exactly).
std::string to_csv(const StepResponse& response);

}  // namespace lwtune
