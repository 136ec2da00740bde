#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lwtune/metrics.hpp"
#include "lwtune/model.hpp"
#include "lwtune/simulator.hpp"
#include "lwtune/version.hpp"

namespace lwtune {

// Chien-Hrones-Reswick setpoint tuning constants for PI control,
// kp = kp_mult * T / (K L), ki = ki_mult / (K L).
struct ChrRule {
  const char* name;
  double kp_mult;
  double ki_mult;
};

inline constexpr ChrRule chr_no_overshoot{"chr-no-overshoot", 0.35, 0.29};
inline constexpr ChrRule chr_20_overshoot{"chr-20-overshoot", 0.6, 0.6};

// Gains a CHR rule prescribes for a plant. Requires K > 0.
PiGains chr_gains(const ChrRule& rule, const FotdPlant& plant);

// gamma giving 20% overshoot; the published companion of gamma = 1.
inline constexpr double gamma_20_overshoot = 1.8837;

struct TuneSpec {
  enum class Mode { no_overshoot, target_overshoot };
  Mode mode = Mode::no_overshoot;
  double target_pct = 0.0;  // meaningful only for target_overshoot
};

// Knobs shared by the tuning entry points. Zeros mean "pick for me": the
// default step is min(T, L)/500, and the default horizon starts at the
// larger of 40 L and 12 closed-loop time constants, then doubles until the
// response has reached steady state. A nonzero horizon is used verbatim for
// the tuned loop; the CHR baseline row is always run to steady state so its
// overshoot stays meaningful.
struct TuneOptions {
  double band_pct = 2.0;
  double step = 0.0;
  double horizon = 0.0;  // nonzero disables the automatic extension
};

// Simulation settings a report's metrics were computed with, kept so the
// numbers can be reproduced exactly.
struct SimRecord {
  double step = 0.0;
  double horizon = 0.0;
  double band_pct = 0.0;
};

struct ChrRow {
  std::string rule;
  PiGains gains;
  ResponseMetrics metrics;
};

struct TuningReport {
  FotdPlant plant;
  TuneSpec spec;
  double gamma = 0.0;
  PiGains gains;  // always exactly gains_from_gamma(plant, gamma)
  PolePair poles;
  ResponseMetrics metrics;
  SimRecord sim;
  std::optional<ChrRow> chr;        // CHR baseline, when one applies
  std::optional<std::string> warning;
};

// gamma = 1 (critical damping, zero overshoot). Attaches the CHR
// no-overshoot row as baseline. Requires K > 0.
TuningReport tune_no_overshoot(const FotdPlant& plant,
                               const TuneOptions& options = {});

// Finds gamma in (1, 3] whose simulated overshoot matches target_pct within
// 0.1 percentage points, by bisection on the delay-normalized reduced loop.
// Requires K > 0 and 0 < target_pct <= 40. Targets below the 0.01%
// resolution floor clamp to gamma just above 1 and set `warning`; targets
// above the overshoot at gamma = 3 throw UnreachableTargetError. A 20%
// target attaches the CHR 20%-overshoot row.
TuningReport tune_target_overshoot(const FotdPlant& plant, double target_pct,
                                   const TuneOptions& options = {});

// One point of the gamma sweep, computed on the normalized loop (L = 1);
// by the scaling law the overshoot and ts/L apply to every plant.
struct SweepRow {
  double gamma = 0.0;
  double overshoot_pct = 0.0;
  double ts_over_l = 0.0;
};

// Rows at gamma_min + i * step up to gamma_max, each simulated to steady
// state. Requires 0 < gamma_min < gamma_max and step > 0, with gamma_max
// below the delayed-loop stability limit (e pi / 2).
std::vector<SweepRow> sweep(double gamma_min, double gamma_max, double step,
                            double band_pct = 2.0);

// CSV with header "gamma,overshoot_pct,ts_over_L", 17 significant digits.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// One tuning rule evaluated on a plant. kp_mult and ki_mult are the
// dimensionless forms kp K L / T and ki K L.
struct ComparisonRow {
  std::string name;
  PiGains gains;
  double kp_mult = 0.0;
  double ki_mult = 0.0;
  double gamma = 0.0;
  ResponseMetrics metrics;
};

struct ChrComparison {
  FotdPlant plant;
  std::vector<ComparisonRow> rows;
};

// Both CHR setpoint rows next to the gamma = 1 and gamma = 1.8837 rules,
// each simulated through the general loop on the given plant. Requires K > 0.
ChrComparison chr_compare(const FotdPlant& plant,
                          const TuneOptions& options = {});

// Fixed-width text table of a comparison, one line per rule.
std::string comparison_table(const ChrComparison& comparison);

// JSON serializations. Key order is fixed, doubles print shortest
// round-trip, non-finite values become null; output is deterministic.
std::string report_to_json(const TuningReport& report);
std::string comparison_to_json(const ChrComparison& comparison);

// Horizon heuristic used by the tuner and sweep: max(40 L, 12 / |Re s1|)
// rounded up to a whole number of delays, where s1 is the dominant pole.
// Grows as gamma approaches 0 (sluggish loop) or the stability limit.
double horizon_for_gamma(double gamma, double delay);

}  // namespace lwtune
