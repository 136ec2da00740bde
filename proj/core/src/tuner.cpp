#include "lwtune/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iterator>
#include <numbers>
#include <thread>
#include <utility>

#include <json.hpp>

#include "lwtune/errors.hpp"

namespace lwtune {
namespace {

using ordered_json = nlohmann::ordered_json;

// Steady state for the purpose of "keep simulating or stop": tighter than
// the metrics tolerance so metrics never reject a response we accepted.
constexpr double settled_tolerance = 5e-4;

// Bisection bracket and width for the overshoot inversion. The lower edge
// sits just above the critical point (overshoot is identically 0 at and
// below gamma = 1); the upper edge stays well under the stability limit.
constexpr double gamma_bracket_lo = 1.0 + 1e-3;
constexpr double gamma_bracket_hi = 3.0;
constexpr double gamma_bracket_width = 1e-4;

// Requested overshoots below this (percent) are not resolvable against the
// integration and settling-band noise floor; they clamp to gamma_bracket_lo.
constexpr double overshoot_floor_pct = 0.01;

constexpr double stability_limit_gamma = std::numbers::e * std::numbers::pi / 2.0;

void require_positive_gain(const FotdPlant& plant) {
  if (plant.gain <= 0.0)
    throw DomainError("tuner: plant gain K must be positive");
}

void validate_options(const TuneOptions& options) {
  if (!std::isfinite(options.band_pct) || options.band_pct <= 0.0)
    throw DomainError("tuner: settling band must be positive");
  if (!std::isfinite(options.step) || options.step < 0.0)
    throw DomainError("tuner: step must be positive (or 0 for the default)");
  if (!std::isfinite(options.horizon) || options.horizon < 0.0)
    throw DomainError("tuner: horizon must be positive (or 0 for automatic)");
}

double resolve_step(const FotdPlant& plant, const TuneOptions& options) {
  return options.step > 0.0 ? options.step : default_sim_config(plant).step;
}

StepResponse general_settled(const FotdPlant& plant, const PiGains& gains,
                             double step, double horizon, bool extend) {
  StepResponse r = simulate_general(plant, gains,
                                    SimConfig{step, horizon, LoopForm::general});
  if (!extend) return r;
  for (int i = 0;
       i < 8 && std::abs(r.output_y.back() - 1.0) > settled_tolerance; ++i) {
    horizon *= 2.0;
    r = simulate_general(plant, gains,
                         SimConfig{step, horizon, LoopForm::general});
  }
  return r;
}

StepResponse reduced_settled(double loop_gain, double delay, double step,
                             double horizon) {
  StepResponse r = simulate_reduced(loop_gain, delay,
                                    SimConfig{step, horizon, LoopForm::reduced});
  for (int i = 0;
       i < 6 && std::abs(r.output_y.back() - 1.0) > settled_tolerance; ++i) {
    horizon *= 2.0;
    r = simulate_reduced(loop_gain, delay,
                         SimConfig{step, horizon, LoopForm::reduced});
  }
  return r;
}

// Overshoot of the delay-normalized loop (L = 1, A = gamma/e). By the time
// scaling law this is the overshoot of every plant tuned to this gamma.
double overshoot_at_gamma(double gamma) {
  const StepResponse r = reduced_settled(gamma * inv_e, 1.0, 1.0 / 500.0,
                                         horizon_for_gamma(gamma, 1.0));
  return peak_overshoot(r).overshoot_pct;
}

TuningReport build_report(const FotdPlant& plant, const TuneSpec& spec,
                          double gamma, std::optional<std::string> warning,
                          const TuneOptions& options, const ChrRule* baseline) {
  const double step = resolve_step(plant, options);
  const bool extend = options.horizon <= 0.0;
  const double horizon0 =
      extend ? horizon_for_gamma(gamma, plant.delay) : options.horizon;

  TuningReport report{plant,
                      spec,
                      gamma,
                      gains_from_gamma(plant, gamma),
                      closed_loop_poles(plant, gamma),
                      ResponseMetrics{},
                      SimRecord{},
                      std::nullopt,
                      std::move(warning)};

  const StepResponse response =
      general_settled(plant, report.gains, step, horizon0, extend);
  report.metrics = compute_metrics(response, options.band_pct);
  report.sim = SimRecord{response.step_h,
                         response.time_at(response.size() - 1),
                         options.band_pct};

  if (baseline != nullptr) {
    ChrRow row;
    row.rule = baseline->name;
    row.gains = chr_gains(*baseline, plant);
    // The baseline is context, not the requested measurement: always run it
    // to steady state, or a short fixed horizon would leave its overshoot
    // meaningless (or unmeasurable, which used to abort the whole report).
    const double chr_horizon = std::max(40.0 * plant.delay, options.horizon);
    const StepResponse chr_response =
        general_settled(plant, row.gains, step, chr_horizon, true);
    row.metrics = compute_metrics(chr_response, options.band_pct);
    report.chr = std::move(row);
  }
  return report;
}

SweepRow sweep_point(double gamma, double band_pct) {
  const StepResponse r = reduced_settled(gamma * inv_e, 1.0, 1.0 / 500.0,
                                         horizon_for_gamma(gamma, 1.0));
  const ResponseMetrics m = compute_metrics(r, band_pct);
  return SweepRow{gamma, m.overshoot_pct, m.settling_time};
}

ordered_json json_plant(const FotdPlant& plant) {
  return ordered_json{
      {"K", plant.gain}, {"T", plant.time_constant}, {"L", plant.delay}};
}

ordered_json json_gains(const PiGains& gains) {
  return ordered_json{{"kp", gains.kp}, {"ki", gains.ki}};
}

ordered_json json_metrics(const ResponseMetrics& metrics) {
  return ordered_json{{"overshoot_pct", metrics.overshoot_pct},
                      {"settling_time", metrics.settling_time},
                      {"peak_time", metrics.peak_time},
                      {"settled", metrics.settled}};
}

}  // namespace

PiGains chr_gains(const ChrRule& rule, const FotdPlant& plant) {
  require_positive_gain(plant);
  const double kl = plant.gain * plant.delay;
  return PiGains{rule.kp_mult * plant.time_constant / kl, rule.ki_mult / kl};
}

double horizon_for_gamma(double gamma, double delay) {
  if (!std::isfinite(gamma) || gamma <= 0.0)
    throw DomainError("horizon_for_gamma: gamma must be positive");
  if (!std::isfinite(delay) || delay <= 0.0)
    throw DomainError("horizon_for_gamma: delay must be positive");
  if (gamma >= stability_limit_gamma) return 40.0 * delay;
  const FotdPlant unit{1.0, 1.0, delay};
  const double rate = -closed_loop_poles(unit, gamma).s1.real();
  if (!(rate > 0.0)) return 40.0 * delay;
  const double spans = std::ceil(12.0 / (rate * delay));
  return std::max(40.0, spans) * delay;
}

TuningReport tune_no_overshoot(const FotdPlant& plant,
                               const TuneOptions& options) {
  require_positive_gain(plant);
  validate_options(options);
  return build_report(plant, TuneSpec{TuneSpec::Mode::no_overshoot, 0.0}, 1.0,
                      std::nullopt, options, &chr_no_overshoot);
}

TuningReport tune_target_overshoot(const FotdPlant& plant, double target_pct,
                                   const TuneOptions& options) {
  require_positive_gain(plant);
  validate_options(options);
  if (!std::isfinite(target_pct) || target_pct <= 0.0 || target_pct > 40.0)
    throw DomainError(
        "tune_target_overshoot: target must lie in (0, 40] percent");

  const TuneSpec spec{TuneSpec::Mode::target_overshoot, target_pct};
  const ChrRule* baseline =
      std::abs(target_pct - 20.0) <= 1e-9 ? &chr_20_overshoot : nullptr;

  double gamma = 0.0;
  std::optional<std::string> warning;
  const double os_lo = overshoot_at_gamma(gamma_bracket_lo);
  if (target_pct < overshoot_floor_pct || target_pct <= os_lo) {
    // Arbitrarily small overshoots happen arbitrarily close to gamma = 1,
    // below what the fixed-step simulation can resolve. Return the edge of
    // the bracket and say so instead of bisecting noise.
    gamma = gamma_bracket_lo;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "target overshoot %.4g%% is below the %.2g%% resolution "
                  "floor; clamped to gamma = %.4g",
                  target_pct, overshoot_floor_pct, gamma_bracket_lo);
    warning = buf;
  } else {
    const double os_hi = overshoot_at_gamma(gamma_bracket_hi);
    if (target_pct >= os_hi) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "target overshoot %.4g%% is not reachable below gamma = "
                    "%.3g (max %.4g%%)",
                    target_pct, gamma_bracket_hi, os_hi);
      throw UnreachableTargetError(buf);
    }
    double lo = gamma_bracket_lo;
    double hi = gamma_bracket_hi;
    while (hi - lo > gamma_bracket_width) {
      const double mid = 0.5 * (lo + hi);
      (overshoot_at_gamma(mid) < target_pct ? lo : hi) = mid;
    }
    gamma = 0.5 * (lo + hi);
  }
  return build_report(plant, spec, gamma, std::move(warning), options,
                      baseline);
}

std::vector<SweepRow> sweep(double gamma_min, double gamma_max, double step,
                            double band_pct) {
  if (!std::isfinite(gamma_min) || gamma_min <= 0.0)
    throw DomainError("sweep: gamma_min must be positive");
  if (!std::isfinite(gamma_max) || gamma_max <= gamma_min)
    throw DomainError("sweep: gamma_max must exceed gamma_min");
  if (gamma_max >= stability_limit_gamma)
    throw DomainError("sweep: gamma_max must stay below the stability limit "
                      "e*pi/2");
  if (!std::isfinite(step) || step <= 0.0)
    throw DomainError("sweep: step must be positive");
  if (!std::isfinite(band_pct) || band_pct <= 0.0)
    throw DomainError("sweep: settling band must be positive");

  const auto count = static_cast<std::size_t>(
                         std::floor((gamma_max - gamma_min) / step + 1e-6)) +
                     1;
  std::vector<SweepRow> rows(count);
  const auto compute = [&](std::size_t i) {
    rows[i] = sweep_point(gamma_min + static_cast<double>(i) * step, band_pct);
  };

  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t n_threads =
      std::min<std::size_t>({hw == 0 ? 1 : hw, count, 16});
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) compute(i);
    return rows;
  }

  // Strided partition; every row index is written by exactly one thread and
  // row values depend only on gamma, so the result is deterministic.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(n_threads);
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += n_threads) compute(i);
      } catch (...) {
        failures[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& failure : failures)
    if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "gamma,overshoot_pct,ts_over_L\n";
  out.reserve(out.size() + rows.size() * 60);
  char buf[160];
  for (const SweepRow& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", row.gamma,
                  row.overshoot_pct, row.ts_over_l);
    out += buf;
  }
  return out;
}

ChrComparison chr_compare(const FotdPlant& plant, const TuneOptions& options) {
  require_positive_gain(plant);
  validate_options(options);
  const double step = resolve_step(plant, options);
  const bool extend = options.horizon <= 0.0;

  struct Entry {
    const char* name;
    PiGains gains;
    double gamma;
  };
  const GammaSpec chr_no = gamma_from_gains(plant, chr_gains(chr_no_overshoot, plant));
  const GammaSpec chr_20 = gamma_from_gains(plant, chr_gains(chr_20_overshoot, plant));
  const Entry entries[] = {
      {chr_no_overshoot.name, chr_gains(chr_no_overshoot, plant), chr_no.gamma},
      {chr_20_overshoot.name, chr_gains(chr_20_overshoot, plant), chr_20.gamma},
      {"lambert-no-overshoot", gains_from_gamma(plant, 1.0), 1.0},
      {"lambert-20-overshoot", gains_from_gamma(plant, gamma_20_overshoot),
       gamma_20_overshoot},
  };

  ChrComparison comparison{plant, {}};
  comparison.rows.reserve(std::size(entries));
  const double kl = plant.gain * plant.delay;
  for (const Entry& entry : entries) {
    const double horizon0 = extend
                                ? std::max(horizon_for_gamma(entry.gamma,
                                                             plant.delay),
                                           40.0 * plant.delay)
                                : options.horizon;
    const StepResponse response =
        general_settled(plant, entry.gains, step, horizon0, extend);
    ComparisonRow row;
    row.name = entry.name;
    row.gains = entry.gains;
    row.kp_mult = entry.gains.kp * kl / plant.time_constant;
    row.ki_mult = entry.gains.ki * kl;
    row.gamma = entry.gamma;
    row.metrics = compute_metrics(response, options.band_pct);
    comparison.rows.push_back(std::move(row));
  }
  return comparison;
}

std::string comparison_table(const ChrComparison& comparison) {
  const FotdPlant& plant = comparison.plant;
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "plant: K=%g T=%g L=%g\n", plant.gain,
                plant.time_constant, plant.delay);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-22s %11s %11s %10s %9s %12s %10s %9s\n",
                "rule", "kp", "ki", "kp*K*L/T", "ki*K*L", "overshoot_%", "ts",
                "ts/L");
  out += buf;
  for (const ComparisonRow& row : comparison.rows) {
    std::snprintf(buf, sizeof buf,
                  "%-22s %11.6f %11.6f %10.4f %9.4f %12.4f %10.4f %9.4f\n",
                  row.name.c_str(), row.gains.kp, row.gains.ki, row.kp_mult,
                  row.ki_mult, row.metrics.overshoot_pct,
                  row.metrics.settling_time,
                  row.metrics.settling_time / plant.delay);
    out += buf;
  }
  return out;
}

std::string report_to_json(const TuningReport& report) {
  ordered_json j;
  j["schema_version"] = report_schema_version;
  j["plant"] = json_plant(report.plant);
  if (report.spec.mode == TuneSpec::Mode::no_overshoot) {
    j["spec"] = ordered_json{{"mode", "no-overshoot"}};
  } else {
    j["spec"] = ordered_json{{"mode", "target-overshoot"},
                             {"target_pct", report.spec.target_pct}};
  }
  j["gamma"] = report.gamma;
  j["gains"] = json_gains(report.gains);
  j["poles"] = ordered_json::array(
      {ordered_json{{"re", report.poles.s1.real()},
                    {"im", report.poles.s1.imag()}},
       ordered_json{{"re", report.poles.s2.real()},
                    {"im", report.poles.s2.imag()}}});
  j["regime"] = to_string(report.poles.regime);
  j["metrics"] = json_metrics(report.metrics);
  j["sim"] = ordered_json{{"step", report.sim.step},
                          {"horizon", report.sim.horizon},
                          {"band_pct", report.sim.band_pct}};
  if (report.chr) {
    j["chr"] = ordered_json{{"rule", report.chr->rule},
                            {"gains", json_gains(report.chr->gains)},
                            {"metrics", json_metrics(report.chr->metrics)}};
  }
  if (report.warning) j["warning"] = *report.warning;
  return j.dump(2) + "\n";
}

std::string comparison_to_json(const ChrComparison& comparison) {
  ordered_json j;
  j["schema_version"] = report_schema_version;
  j["plant"] = json_plant(comparison.plant);
  ordered_json rows = ordered_json::array();
  for (const ComparisonRow& row : comparison.rows) {
    rows.push_back(ordered_json{{"rule", row.name},
                                {"gains", json_gains(row.gains)},
                                {"kp_mult", row.kp_mult},
                                {"ki_mult", row.ki_mult},
                                {"gamma", row.gamma},
                                {"metrics", json_metrics(row.metrics)}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace lwtune
