#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lwtune/errors.hpp"
#include "lwtune/metrics.hpp"
#include "lwtune/model.hpp"
#include "lwtune/simulator.hpp"
#include "lwtune/tuner.hpp"
#include "lwtune/version.hpp"

namespace lwtune::cli {
namespace {

std::string error_json(const std::string& code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = nlohmann::ordered_json{{"code", code}, {"message", message}};
  return j.dump(2) + "\n";
}

// Empty path means stdout. File writes are atomic in the weak sense only
// (no temp file); a failed write reports code "io" and exits 1.
void write_artifact(const std::string& path, const std::string& content,
                    std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("io", "cannot open '" + path + "' for writing");
  file << content;
  file.flush();
  if (!file) throw Error("io", "failed while writing '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Analytical PI tuning for first-order-plus-dead-time plants, with a "
      "delay-exact simulator and a Chien-Hrones-Reswick baseline"};
  app.name("lwtune");
  app.set_version_flag("--version,-V",
                       std::string("lwtune ") + library_version +
                           " (report schema " +
                           std::to_string(report_schema_version) + ")");
  app.require_subcommand(1);

  double K = 1.0, T = 1.0, L = 1.0;
  double band = 2.0, dt = 0.0, horizon = 0.0;
  double target = 0.0, gamma = 0.0, kp = 0.0, ki = 0.0;
  double gamma_min = 0.1, gamma_max = 2.0, gamma_step = 0.01;
  std::string output, format;

  const auto add_plant = [&](CLI::App* cmd) {
    cmd->add_option("-K,--gain", K, "plant gain")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("-T,--time-constant", T, "plant time constant, seconds")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("-L,--delay", L, "plant dead time, seconds")
        ->required()
        ->check(CLI::PositiveNumber);
  };
  const auto add_output = [&](CLI::App* cmd, const char* fmt) {
    cmd->add_option("-o,--output", output,
                    "write the artifact to this file instead of stdout");
    cmd->add_option("--format", format, std::string("artifact format (") +
                                            fmt + ")")
        ->check(CLI::IsMember({fmt}));
  };
  const auto add_band = [&](CLI::App* cmd) {
    cmd->add_option("--band", band,
                    "settling band half-width in percent (default 2)")
        ->check(CLI::PositiveNumber);
  };
  const auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--dt", dt,
                    "integration step in seconds (default min(T,L)/500)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", horizon,
                    "simulation horizon in seconds (default: automatic)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* tune =
      app.add_subcommand("tune", "compute PI gains and a tuning report");
  add_plant(tune);
  CLI::App* goal = tune->add_option_group("goal", "overshoot goal");
  CLI::Option* no_overshoot_flag =
      goal->add_flag("--no-overshoot", "zero overshoot (critical damping)");
  goal->add_option("--overshoot", target, "target overshoot in percent");
  goal->require_option(1);
  add_output(tune, "json");
  add_band(tune);
  add_grid(tune);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "step-response trace for given gains or gamma");
  add_plant(simulate);
  CLI::Option* gamma_opt = simulate->add_option(
      "--gamma", gamma, "loop parameter; gains follow from kp = T ki");
  CLI::Option* kp_opt = simulate->add_option("--kp", kp, "proportional gain");
  CLI::Option* ki_opt = simulate->add_option("--ki", ki, "integral gain");
  gamma_opt->excludes(kp_opt)->excludes(ki_opt);
  kp_opt->needs(ki_opt);
  ki_opt->needs(kp_opt);
  add_output(simulate, "csv");
  add_grid(simulate);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "overshoot and settling time versus gamma (normalized, L = 1)");
  sweep_cmd->add_option("--gamma-min", gamma_min, "first gamma (default 0.1)")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--gamma-max", gamma_max, "last gamma (default 2.0)")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--step", gamma_step, "gamma increment (default 0.01)")
      ->check(CLI::PositiveNumber);
  add_output(sweep_cmd, "csv");
  add_band(sweep_cmd);

  CLI::App* compare = app.add_subcommand(
      "compare", "tabulate both tuning rules against the CHR constants");
  add_plant(compare);
  add_output(compare, "json");
  add_band(compare);
  add_grid(compare);

  try {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("lwtune");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help and version requests come through here with exit code 0.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (tune->parsed()) {
      const FotdPlant plant(K, T, L);
      const TuneOptions options{band, dt, horizon};
      const TuningReport report =
          no_overshoot_flag->count() > 0
              ? tune_no_overshoot(plant, options)
              : tune_target_overshoot(plant, target, options);
      write_artifact(output, report_to_json(report), out);
    } else if (simulate->parsed()) {
      const bool has_gamma = gamma_opt->count() > 0;
      if (!has_gamma && kp_opt->count() == 0) {
        err << "lwtune simulate: provide either --gamma or both --kp and "
               "--ki\n";
        return 2;
      }
      const FotdPlant plant(K, T, L);
      const PiGains gains =
          has_gamma ? gains_from_gamma(plant, gamma) : PiGains{kp, ki};
      SimConfig cfg = default_sim_config(plant);
      if (dt > 0.0) cfg.step = dt;
      if (horizon > 0.0) cfg.horizon = horizon;
      write_artifact(output, to_csv(simulate_general(plant, gains, cfg)), out);
    } else if (sweep_cmd->parsed()) {
      write_artifact(output,
                     sweep_to_csv(sweep(gamma_min, gamma_max, gamma_step,
                                        band)),
                     out);
    } else if (compare->parsed()) {
      const FotdPlant plant(K, T, L);
      const ChrComparison comparison =
          chr_compare(plant, TuneOptions{band, dt, horizon});
      out << comparison_table(comparison);
      if (!output.empty())
        write_artifact(output, comparison_to_json(comparison), out);
    }
  } catch (const Error& e) {
    out << error_json(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    out << error_json("internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace lwtune::cli
