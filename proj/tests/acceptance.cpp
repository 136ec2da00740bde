// Acceptance suite: every release-blocking behavior, one line of output per
// criterion. Exits nonzero if any line fails. Tolerances are part of the
// contract and are stated next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "lwtune/lambert_w.hpp"
#include "lwtune/metrics.hpp"
#include "lwtune/model.hpp"
#include "lwtune/simulator.hpp"
#include "lwtune/tuner.hpp"

using namespace lwtune;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string note_buf;

void notef(const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  note_buf = buf;
}

bool within(double value, double center, double tolerance) {
  return std::abs(value - center) <= tolerance;
}

// 1. Identity residuals over >= 1000 arguments, exact branch point, < 1 s.
bool lambert_identity() {
  const auto start = Clock::now();
  const int n = 1500;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = -5.0 + (5.0 - 1e-9) * static_cast<double>(i) / (n - 1.0);
    const double budget = 1e-12 * std::max(1.0, std::abs(z));
    for (const WBranch branch : {WBranch::principal, WBranch::minus_one}) {
      const double residual =
          lambert_w_residual(lambert_w(branch, z), z) / budget;
      worst = std::max(worst, residual);
    }
  }
  bool ok = worst <= 1.0;
  ok = ok &&
       lambert_w(WBranch::principal, 0.0) == std::complex<double>(0.0, 0.0);
  ok = ok && lambert_w(WBranch::principal, branch_point) ==
                 std::complex<double>(-1.0, 0.0);
  ok = ok && lambert_w(WBranch::minus_one, branch_point) ==
                 std::complex<double>(-1.0, 0.0);
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 1.0;
  notef("%d evaluations, worst residual %.1e of budget, branch point exact, "
        "%.3f s",
        2 * n, worst, elapsed);
  return ok;
}

// 2. Poles satisfy s + K ki exp(-s L) = 0 to 1e-9 on a gamma x plant grid.
bool characteristic_equation() {
  const double grid[] = {0.5, 1.0, 2.0};
  double worst = 0.0;
  int count = 0;
  for (int gi = 1; gi <= 20; ++gi) {
    const double gamma = gi / 10.0;
    for (const double K : grid) {
      for (const double T : grid) {
        for (const double L : grid) {
          const FotdPlant plant(K, T, L);
          const PiGains gains = gains_from_gamma(plant, gamma);
          const PolePair poles = closed_loop_poles(plant, gamma);
          for (const std::complex<double> s : {poles.s1, poles.s2}) {
            worst = std::max(worst,
                             std::abs(s + K * gains.ki * std::exp(-s * L)));
            ++count;
          }
        }
      }
    }
  }
  notef("%d pole residuals, worst %.2e (budget 1e-9)", count, worst);
  return worst <= 1e-9;
}

// 3. Simulator matches the segment-wise exact solution to 1e-6 over three
// delay spans at L/500, in under a second.
bool reference_agreement() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const double gamma : {0.1, 1.0, 1.8837}) {
    const double a = gamma * inv_e;
    const StepResponse exact = method_of_steps_reference(a, 1.0, 3, 0.002);
    const StepResponse sim =
        simulate_reduced(a, 1.0, SimConfig{0.002, 10.0, LoopForm::reduced});
    for (std::size_t i = 0; i < exact.size(); ++i) {
      worst = std::max(worst, std::abs(sim.output_y[i] - exact.output_y[i]));
    }
  }
  const double elapsed = seconds_since(start);
  notef("worst deviation %.2e (budget 1e-6), %.3f s", worst, elapsed);
  return worst <= 1e-6 && elapsed < 1.0;
}

// 4. Critically damped settling time reproduces 6.56 L within 5%. The 2%
// band is tried first and is the one that matches (see README); 5% is the
// fallback.
bool critical_settling_time() {
  const StepResponse r =
      simulate_reduced(inv_e, 1.0, SimConfig{0.002, 40.0, LoopForm::reduced});
  for (const double band : {2.0, 5.0}) {
    const double ts = settling_time(r, band).time;
    if (within(ts, 6.56, 0.05 * 6.56)) {
      notef("ts = %.4f L with the %.0f%% band (6.56 L +/- 5%%)", ts, band);
      return true;
    }
  }
  notef("no band reproduces 6.56 L: 2%% gives %.4f, 5%% gives %.4f",
        settling_time(r, 2.0).time, settling_time(r, 5.0).time);
  return false;
}

// 5. 20% overshoot target: gamma within 0.02 of 1.8837, both gain
// multipliers within 1.5% of 0.7.
bool twenty_percent_point() {
  const FotdPlant plant(1.0, 1.0, 1.0);
  const TuningReport report = tune_target_overshoot(plant, 20.0);
  const double kp_mult = report.gains.kp;  // K = T = L = 1
  const double ki_mult = report.gains.ki;
  const bool ok = within(report.gamma, 1.8837, 0.02) &&
                  within(kp_mult, 0.7, 0.015 * 0.7) &&
                  within(ki_mult, 0.7, 0.015 * 0.7);
  notef("gamma* = %.4f (1.8837 +/- 0.02), kp ki multipliers %.4f %.4f "
        "(0.7 +/- 1.5%%)",
        report.gamma, kp_mult, ki_mult);
  return ok;
}

// 6. 1% overshoot target settles in 4.42 L within 10%.
bool one_percent_settling() {
  const FotdPlant plant(1.0, 1.0, 1.0);
  const TuningReport report = tune_target_overshoot(plant, 1.0);
  const double ts = report.metrics.settling_time / plant.delay;
  notef("gamma* = %.4f, ts = %.3f L (4.42 L +/- 10%%)", report.gamma, ts);
  return within(ts, 4.42, 0.442);
}

// 7. Comparison table: analytical multipliers match 0.37/0.37 and 0.7/0.7 to
// two decimals; CHR constants appear verbatim.
bool comparison_multipliers() {
  const ChrComparison comparison = chr_compare(FotdPlant(1.0, 1.0, 1.0));
  if (comparison.rows.size() != 4) {
    notef("expected 4 rows, got %zu", comparison.rows.size());
    return false;
  }
  const ComparisonRow& chr_no = comparison.rows[0];
  const ComparisonRow& chr_20 = comparison.rows[1];
  const ComparisonRow& lw_no = comparison.rows[2];
  const ComparisonRow& lw_20 = comparison.rows[3];
  const bool chr_ok = within(chr_no.kp_mult, 0.35, 1e-12) &&
                      within(chr_no.ki_mult, 0.29, 1e-12) &&
                      within(chr_20.kp_mult, 0.6, 1e-12) &&
                      within(chr_20.ki_mult, 0.6, 1e-12);
  const bool lw_ok = within(lw_no.kp_mult, 0.37, 0.01) &&
                     within(lw_no.ki_mult, 0.37, 0.01) &&
                     within(lw_20.kp_mult, 0.7, 0.01) &&
                     within(lw_20.ki_mult, 0.7, 0.01);
  notef("analytical %.4f/%.4f vs 0.37, %.4f/%.4f vs 0.7; CHR constants %s",
        lw_no.kp_mult, lw_no.ki_mult, lw_20.kp_mult, lw_20.ki_mult,
        chr_ok ? "verbatim" : "WRONG");
  return chr_ok && lw_ok;
}

// 8. Regime behavior: no overshoot up to gamma = 1, strictly increasing
// overshoot above it, stable conjugate pole pairs throughout (1, 2].
bool regime_behavior() {
  double previous = -1.0;
  bool zero_ok = true, increase_ok = true, poles_ok = true;
  for (int i = 2; i <= 40; ++i) {
    const double gamma = i * 0.05;
    const SimConfig cfg{0.002, horizon_for_gamma(gamma, 1.0),
                        LoopForm::reduced};
    const StepResponse r = simulate_reduced(gamma * inv_e, 1.0, cfg);
    const double overshoot = peak_overshoot(r).overshoot_pct;
    if (gamma <= 1.0 + 1e-12) {
      zero_ok = zero_ok && overshoot <= 0.05;
    } else {
      if (previous >= 0.0) increase_ok = increase_ok && overshoot > previous;
      previous = overshoot;
      const PolePair poles = closed_loop_poles(FotdPlant(1.0, 1.0, 1.0), gamma);
      poles_ok = poles_ok && poles.s1.real() < 0.0 && poles.s1.imag() > 0.0 &&
                 std::abs(poles.s2 - std::conj(poles.s1)) <= 1e-12;
    }
  }
  notef("zero overshoot to gamma=1: %s; strict growth on (1, 2]: %s; "
        "conjugate stable poles: %s",
        zero_ok ? "yes" : "NO", increase_ok ? "yes" : "NO",
        poles_ok ? "yes" : "NO");
  return zero_ok && increase_ok && poles_ok;
}

// 9. General and reduced loops agree to 1e-6 over 20 delays across a 3x3
// plant grid at the underdamped reference gamma.
bool loop_equivalence() {
  const double grid[] = {0.5, 1.0, 2.0};
  double worst = 0.0;
  for (const double K : grid) {
    for (const double T : grid) {
      const FotdPlant plant(K, T, 1.0);
      const PiGains gains = gains_from_gamma(plant, 1.8837);
      const StepResponse general = simulate_general(
          plant, gains, SimConfig{0.002, 20.0, LoopForm::general});
      const StepResponse reduced = simulate_reduced(
          K * gains.ki, 1.0, SimConfig{0.002, 20.0, LoopForm::reduced});
      for (std::size_t i = 0; i < general.size(); ++i) {
        worst = std::max(worst,
                         std::abs(general.output_y[i] - reduced.output_y[i]));
      }
    }
  }
  notef("9 plants, worst deviation %.2e (budget 1e-6)", worst);
  return worst <= 1e-6;
}

// 10. The published sweep grid completes in under 10 s.
bool sweep_runtime(double* sweep_seconds) {
  const auto start = Clock::now();
  const std::vector<SweepRow> rows = sweep(0.1, 2.0, 0.01);
  *sweep_seconds = seconds_since(start);
  notef("%zu-row sweep in %.2f s (budget 10 s)", rows.size(), *sweep_seconds);
  return rows.size() == 191 && *sweep_seconds < 10.0;
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  int failures = 0;
  int index = 0;

  const auto report = [&](const char* what, bool ok) {
    ++index;
    std::printf("[%s] %2d. %s: %s\n", ok ? "PASS" : "FAIL", index, what,
                note_buf.c_str());
    if (!ok) ++failures;
  };

  report("Lambert W identity and branch point", lambert_identity());
  report("closed-loop characteristic equation", characteristic_equation());
  report("simulator vs exact piecewise solution", reference_agreement());
  report("critically damped settling time", critical_settling_time());
  report("20% overshoot tuning point", twenty_percent_point());
  report("1% overshoot settling time", one_percent_settling());
  report("rule comparison multipliers", comparison_multipliers());
  report("damping regime behavior", regime_behavior());
  report("general/reduced loop equivalence", loop_equivalence());

  double sweep_seconds = 0.0;
  const bool sweep_ok = sweep_runtime(&sweep_seconds);
  const double total = seconds_since(suite_start);
  const bool time_ok = total < 60.0;
  ++index;
  std::printf("[%s] %2d. runtime: sweep %.2f s (< 10), suite %.2f s (< 60)\n",
              (sweep_ok && time_ok) ? "PASS" : "FAIL", index, sweep_seconds,
              total);
  if (!(sweep_ok && time_ok)) ++failures;

  if (failures > 0) {
    std::printf("%d of %d criteria FAILED\n", failures, index);
    return 1;
  }
  std::printf("all %d acceptance criteria satisfied\n", index);
  return 0;
}
