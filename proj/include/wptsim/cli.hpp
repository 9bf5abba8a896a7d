#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wptsim/config.hpp"
#include "wptsim/csvfmt.hpp"
#include "wptsim/presets.hpp"
#include "wptsim/regulations.hpp"
#include "wptsim/simcore.hpp"

namespace wptsim::cli {

// Exit-code contract: 0 success/compliant, 1 failed compliance check,
// 2 input error, 3 I/O error.
inline constexpr int exit_ok = 0;
inline constexpr int exit_noncompliant = 1;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_io_error = 3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw IoError("cannot open output file for writing: " + path);
  }
  f << content;
  f.flush();
  if (!f) {
    throw IoError("failed while writing output file: " + path);
  }
}

/// Loads a config document from a file path, falling back to the bundled
/// preset of the same name.
inline config::json resolve_document(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    return config::load_json_file(arg);
  }
  if (const auto doc = presets::document(arg)) {
    return config::parse_json_text(*doc, "preset '" + arg + "'");
  }
  throw config::ConfigError("no such file or bundled preset: " + arg);
}

namespace detail {

struct SweepOptions {
  double erp_dbm = 27.0;
  double freq_mhz = 865.7;
  std::string window = "update";
  double d_min = 0.5;
  double d_max = 8.0;
  double d_step = 0.25;
  std::string chain = "868";
  std::string eta_rf_csv;
  double capacitance_uf = 22.0;
  double v_chrdy_v = 3.10;
  double v_ovdis_v = 2.80;
  std::optional<double> initial_target_v;
  double tag_gain_dbi = 2.15;
  double beamwidth_deg = 360.0;
  double exponent = 2.0;
  std::optional<double> ref_distance_m;
  double sensitivity_min_dbm = -19.0;
  double sensitivity_max_dbm = 10.0;
  std::string protocol;
  std::string measured;
  std::string out = "-";
};

inline std::map<std::int64_t, double> load_measured_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config::ConfigError("cannot open measured data file: " + path);
  }
  std::map<std::int64_t, double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("distance_m", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw config::ConfigError(path + ":" + std::to_string(lineno) +
                                ": expected distance_m,charge_time_s");
    }
    try {
      const double d = std::stod(line.substr(0, comma));
      const double t = std::stod(line.substr(comma + 1));
      out[std::llround(d * 1e6)] = t;
    } catch (const std::exception&) {
      throw config::ConfigError(path + ":" + std::to_string(lineno) +
                                ": not numeric: " + line);
    }
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points,
                             const std::map<std::int64_t, double>* measured) {
  std::string csv = measured ? "distance_m,charge_time_s,flag,measured_s\n"
                             : "distance_m,charge_time_s,flag\n";
  for (const auto& p : points) {
    csv += format_double(p.distance_m);
    csv += ',';
    if (!p.time.never) csv += format_double(p.time.seconds);
    csv += ',';
    csv += p.flag();
    if (measured) {
      csv += ',';
      const auto it = measured->find(std::llround(p.distance_m * 1e6));
      if (it != measured->end()) csv += format_double(it->second);
    }
    csv += '\n';
  }
  return csv;
}

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out) {
  std::vector<SweepPoint> points;
  if (!opt.protocol.empty()) {
    MeasurementPreset preset;
    if (opt.protocol == "omni_initial") {
      preset = MeasurementPreset::omni_initial;
    } else if (opt.protocol == "omni_update") {
      preset = MeasurementPreset::omni_update;
    } else if (opt.protocol == "dir_initial") {
      preset = MeasurementPreset::dir_initial;
    } else if (opt.protocol == "dir_update") {
      preset = MeasurementPreset::dir_update;
    } else {
      throw config::ConfigError(
          "invalid --protocol: expected one of omni_initial, omni_update, "
          "dir_initial, dir_update");
    }
    points = replay_measurement_protocol(preset).points;
  } else {
    if (!(opt.d_step > 0.0)) {
      throw config::ConfigError("invalid --d-step: must be > 0");
    }
    if (!(opt.d_min > 0.0) || opt.d_max < opt.d_min) {
      throw config::ConfigError(
          "invalid --d-min/--d-max: need 0 < d-min <= d-max");
    }
    if (opt.window != "update" && opt.window != "initial") {
      throw config::ConfigError(
          "invalid --window: expected 'initial' or 'update'");
    }
    SweepSpec spec;
    try {
      spec.beacon.erp = PowerQuantity::from_dbm(opt.erp_dbm);
      spec.beacon.frequency = Frequency::from_mhz(opt.freq_mhz);
      spec.beacon.antenna =
          opt.beamwidth_deg >= 360.0
              ? Antenna::omni(0.0)
              : Antenna::directional(0.0, opt.beamwidth_deg);
      spec.tag_antenna = Antenna::omni(opt.tag_gain_dbi);
      spec.stage.chain = opt.eta_rf_csv.empty()
                             ? config::parse_chain(config::json(opt.chain),
                                                   "--chain")
                             : [&] {
                                 EfficiencyChain c =
                                     config::parse_chain(config::json(opt.chain),
                                                         "--chain");
                                 c.eta_rf =
                                     EtaRfCurve::from_csv_file(opt.eta_rf_csv);
                                 return c;
                               }();
      spec.stage.sensitivity_min =
          PowerQuantity::from_dbm(opt.sensitivity_min_dbm);
      spec.stage.sensitivity_max =
          PowerQuantity::from_dbm(opt.sensitivity_max_dbm);
      spec.capacitor.capacitance_f = opt.capacitance_uf * 1e-6;
      spec.capacitor.v_chrdy = opt.v_chrdy_v;
      spec.capacitor.v_ovdis = opt.v_ovdis_v;
      spec.initial_target_v = opt.initial_target_v;
      spec.window = opt.window == "update" ? ChargeWindow::update
                                           : ChargeWindow::initial;
      spec.propagation.path_loss_exponent = opt.exponent;
      // Default the far-field reference down to the start of the sweep, but
      // never below the 0.25 m floor.
      spec.propagation.reference_distance_m =
          opt.ref_distance_m.value_or(std::min(1.0, opt.d_min));
      spec.propagation.validate();
    } catch (const config::ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw config::ConfigError(std::string("invalid sweep flags: ") +
                                e.what());
    }
    points =
        sweep_charge_time(spec, distance_grid(opt.d_min, opt.d_max, opt.d_step));
  }

  std::optional<std::map<std::int64_t, double>> measured;
  if (!opt.measured.empty()) {
    measured = load_measured_csv(opt.measured);
  }
  const std::string csv = sweep_csv(points, measured ? &*measured : nullptr);
  if (opt.out == "-") {
    out << csv;
  } else {
    write_text_file(opt.out, csv);
  }
  return exit_ok;
}

inline int cmd_regcheck(const std::string& plan_arg, bool as_csv,
                        std::ostream& out) {
  const TransmissionPlan plan = config::parse_plan(resolve_document(plan_arg));
  const ComplianceReport report = check_plan(plan);
  out << (as_csv ? report.to_csv() : report.to_text());
  return report.compliant ? exit_ok : exit_noncompliant;
}

inline int cmd_simulate(const std::string& scenario_arg,
                        const std::string& out_dir, std::ostream& out) {
  const Scenario scenario =
      config::parse_scenario(resolve_document(scenario_arg));
  const SimResult result = run(scenario);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir + ": " +
                  ec.message());
  }
  const auto events_path = (std::filesystem::path(out_dir) / "events.csv").string();
  const auto summary_path = (std::filesystem::path(out_dir) / "summary.csv").string();
  write_text_file(events_path, result.event_csv());
  write_text_file(summary_path, result.summary_csv());

  out << "simulated " << format_sig(result.duration_s) << " s, "
      << scenario.tags.size() << " tag(s), " << scenario.beacons.size()
      << " beacon(s)\n";
  for (const auto& t : result.tags) {
    out << "tag " << t.id << ": initial charge ";
    if (t.initial_charge_s) {
      out << format_sig(*t.initial_charge_s) << " s";
    } else {
      out << "never";
    }
    out << ", fixes " << t.fix_times_s.size();
    if (const auto mean = t.mean_update_s()) {
      out << ", mean update interval " << format_sig(*mean) << " s";
    }
    out << "\n";
  }
  for (const auto& b : result.beacons) {
    out << "beacon " << b.id << ": on " << format_sig(b.on_time_s)
        << " s, radiated " << format_sig(b.radiated_energy_j) << " J\n";
  }
  out << "wrote " << events_path << " and " << summary_path << "\n";
  return exit_ok;
}

inline int cmd_budget(const std::string& budget_arg, std::ostream& out) {
  const config::BudgetConfig cfg =
      config::parse_budget(resolve_document(budget_arg));
  const FeasibilityReport fr =
      storage_feasible(cfg.capacitor, cfg.profile, cfg.eta_ldo);
  const double initial_j =
      storage_energy(cfg.capacitor, 0.0, cfg.capacitor.v_chrdy);
  out << "storage_energy_uj: " << format_sig(fr.stored_j * 1e6) << "\n";
  out << "usable_energy_uj: " << format_sig(fr.usable_j * 1e6) << "\n";
  out << "fix_energy_uj: " << format_sig(fr.fix_j * 1e6) << "\n";
  out << "margin_uj: " << format_sig(fr.margin_j * 1e6) << "\n";
  out << "feasible: " << (fr.feasible ? "yes" : "no") << "\n";
  out << "initial_charge_energy_uj: " << format_sig(initial_j * 1e6) << "\n";
  if (cfg.coldstart) {
    const ColdstartRange range = max_coldstart_distance(
        cfg.coldstart->beacon, cfg.coldstart->tag_antenna, cfg.coldstart->stage,
        cfg.coldstart->propagation);
    out << "max_coldstart_distance_m: ";
    if (range.unbounded) {
      out << "unbounded\n";
    } else {
      out << format_sig(range.meters) << "\n";
    }
  }
  return exit_ok;
}

}  // namespace detail

/// Parses and executes one command line (without the program name).
/// Returns the process exit code; never throws.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{
      "wptsim - dual-band RF wireless power transfer planner for "
      "energy-neutral positioning tags"};
  app.require_subcommand(1);

  detail::SweepOptions sweep_opt;
  double initial_target = 0.0;
  double ref_distance = 0.0;
  auto* sweep = app.add_subcommand(
      "sweep", "Closed-form charge-time sweep over distance (CSV output)");
  sweep->add_option("--erp-dbm", sweep_opt.erp_dbm, "Beacon ERP in dBm");
  sweep->add_option("--freq-mhz", sweep_opt.freq_mhz, "Carrier frequency in MHz");
  sweep->add_option("--window", sweep_opt.window,
                    "Charge window: 'initial' (empty to charge-ready) or "
                    "'update' (overdischarge to charge-ready)");
  sweep->add_option("--d-min", sweep_opt.d_min, "Sweep start distance in m");
  sweep->add_option("--d-max", sweep_opt.d_max, "Sweep end distance in m");
  sweep->add_option("--d-step", sweep_opt.d_step, "Sweep step in m");
  sweep->add_option("--chain", sweep_opt.chain,
                    "Efficiency chain preset: 868 or 2g4");
  sweep->add_option("--eta-rf-csv", sweep_opt.eta_rf_csv,
                    "CSV file input_dbm,eta_rf overriding the RF-path curve");
  sweep->add_option("--capacitance-uf", sweep_opt.capacitance_uf,
                    "Storage capacitance in uF");
  sweep->add_option("--v-chrdy-v", sweep_opt.v_chrdy_v,
                    "Charge-ready voltage in V");
  sweep->add_option("--v-ovdis-v", sweep_opt.v_ovdis_v,
                    "Over-discharge voltage in V");
  auto* target_opt = sweep->add_option(
      "--initial-target-v", initial_target,
      "Target voltage of the initial window (defaults to v-chrdy)");
  sweep->add_option("--tag-gain-dbi", sweep_opt.tag_gain_dbi,
                    "Tag antenna gain in dBi");
  sweep->add_option("--beamwidth-deg", sweep_opt.beamwidth_deg,
                    "Beacon horizontal beamwidth (360 = omnidirectional)");
  sweep->add_option("--exponent", sweep_opt.exponent, "Path-loss exponent");
  auto* ref_opt = sweep->add_option(
      "--ref-distance-m", ref_distance,
      "Far-field reference distance (defaults to min(1, d-min))");
  sweep->add_option("--sensitivity-min-dbm", sweep_opt.sensitivity_min_dbm,
                    "Harvester minimum input power in dBm");
  sweep->add_option("--sensitivity-max-dbm", sweep_opt.sensitivity_max_dbm,
                    "Harvester maximum input power in dBm");
  sweep->add_option("--protocol", sweep_opt.protocol,
                    "Run the measurement-campaign preset instead of the flag "
                    "grid: omni_initial|omni_update|dir_initial|dir_update");
  sweep->add_option("--measured", sweep_opt.measured,
                    "Measured-data CSV (distance_m,charge_time_s) to join "
                    "as a side-by-side column");
  sweep->add_option("--out", sweep_opt.out, "Output CSV path ('-' = stdout)");

  std::string regcheck_plan;
  bool regcheck_csv = false;
  auto* regcheck = app.add_subcommand(
      "regcheck", "Check a transmission plan against the band rules");
  regcheck->add_option("plan", regcheck_plan,
                       "Plan config file or bundled preset name")
      ->required();
  regcheck->add_flag("--csv", regcheck_csv, "Emit the report as CSV");

  std::string sim_scenario;
  std::string sim_out_dir;
  auto* simulate = app.add_subcommand(
      "simulate", "Run the deterministic multi-tag charging simulation");
  simulate->add_option("scenario", sim_scenario,
                       "Scenario config file or bundled preset name")
      ->required();
  simulate->add_option("--out", sim_out_dir,
                       "Output directory for events.csv and summary.csv")
      ->required();

  std::string budget_arg;
  auto* budget = app.add_subcommand(
      "budget", "Storage/fix energy budget and feasibility report");
  budget->add_option("config", budget_arg,
                     "Tag budget config file or bundled preset name")
      ->required();

  std::vector<const char*> argv;
  argv.push_back("wptsim");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_ok : exit_input_error;
  }

  try {
    if (target_opt->count() > 0) sweep_opt.initial_target_v = initial_target;
    if (ref_opt->count() > 0) sweep_opt.ref_distance_m = ref_distance;
    if (sweep->parsed()) return detail::cmd_sweep(sweep_opt, out);
    if (regcheck->parsed()) {
      return detail::cmd_regcheck(regcheck_plan, regcheck_csv, out);
    }
    if (simulate->parsed()) {
      return detail::cmd_simulate(sim_scenario, sim_out_dir, out);
    }
    if (budget->parsed()) return detail::cmd_budget(budget_arg, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_io_error;
  } catch (const config::ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  return exit_input_error;
}

}  // namespace wptsim::cli
