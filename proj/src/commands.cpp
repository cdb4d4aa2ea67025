#include "qrotor/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "qrotor/errors.hpp"
#include "qrotor/output.hpp"

namespace qrotor {

namespace {

const double kNanoKelvin = 1e9;

void warn_or_throw(const std::vector<std::string>& warnings, double ratio, bool strict,
                   std::ostream& diag) {
  for (const auto& w : warnings) {
    if (strict) throw ValidityError(w, ratio);
    diag << "warning: " << w << '\n';
  }
}

void run_spectrum(const RunConfig& cfg, const CommandOverrides& o, std::ostream& out,
                  std::ostream& diag) {
  if (!(cfg.beam.trap_depth_V0 > 0.0))
    throw ConfigError("beam.trap_depth_V0", "must be > 0 for the spectrum");
  SpectrumLimits limits = cfg.spectrum;
  limits.parallelism = cfg.parallelism;
  const RotorSpectrum s = assemble_spectrum(cfg.beam, cfg.species, limits);
  const TrapGeometry g = ring_minimum(cfg.beam, cfg.species, limits.ring_index);
  const double worst = std::min(s.ratio_z_over_r, s.ratio_r_over_ell);
  if (!s.inequalities_ok)
    warn_or_throw({"eps_z >> eps_r >> eps_ell violated (smallest ratio " + format_double(worst) + ")"},
                  worst, o.strict, diag);

  if (cfg.output_format == OutputFormat::csv) {
    CsvWriter csv(out, {"n_z", "n_r", "m_ell", "energy_J", "energy_kB_nK", "degeneracy"});
    for (const auto& l : s.levels)
      csv.row({static_cast<long long>(l.qn.n_z), static_cast<long long>(l.qn.n_r),
               static_cast<long long>(l.qn.m_ell), l.energy, to_kelvin(l.energy) * kNanoKelvin,
               static_cast<long long>(l.degeneracy)});
    return;
  }
  Json j;
  j["command"] = "spectrum";
  j["geometry"] = {{"ring_index", g.ring_index_j},
                   {"z_j", g.z_j},
                   {"r_l", g.r_l},
                   {"omega_z", g.omega_z},
                   {"b_z", g.b_z},
                   {"omega_r", g.omega_r},
                   {"b_r", g.b_r},
                   {"rotational_constant_J", rotational_constant(g.r_l, cfg.species)}};
  j["gaps"] = {{"eps_z_J", s.gaps.eps_z},
               {"eps_r_J", s.gaps.eps_r},
               {"eps_ell_J", s.gaps.eps_ell},
               {"eps_z_kB_nK", to_kelvin(s.gaps.eps_z) * kNanoKelvin},
               {"eps_r_kB_nK", to_kelvin(s.gaps.eps_r) * kNanoKelvin},
               {"eps_ell_kB_nK", to_kelvin(s.gaps.eps_ell) * kNanoKelvin}};
  j["ratio_z_over_r"] = s.ratio_z_over_r;
  j["ratio_r_over_ell"] = s.ratio_r_over_ell;
  j["inequalities_ok"] = s.inequalities_ok;
  Json levels = Json::array();
  for (const auto& l : s.levels)
    levels.push_back({{"n_z", l.qn.n_z},
                      {"n_r", l.qn.n_r},
                      {"m_ell", l.qn.m_ell},
                      {"energy_J", l.energy},
                      {"energy_kB_nK", to_kelvin(l.energy) * kNanoKelvin},
                      {"degeneracy", l.degeneracy}});
  j["levels"] = levels;
  write_json(out, j);
}

void run_lineshape(const RunConfig& cfg, const CommandOverrides& o, std::ostream& out,
                   const std::optional<std::string>& out_path, std::ostream& diag) {
  const LineshapeSettings& ls = cfg.lineshape;
  double Omega_R = 0.0;
  double tau = 0.0;
  if (ls.Omega_R) {
    Omega_R = *ls.Omega_R;
    tau = ls.tau.value_or(kPi / Omega_R);
  } else {
    if (!cfg.raman) throw ConfigError("lineshape.Omega_R", "needed when there is no raman section");
    const RamanCoupling c = effective_coupling(*cfg.raman, cfg.beam, cfg.species);
    warn_or_throw(c.warnings, 0.0, o.strict, diag);
    if (!(c.Omega_R > 0.0)) throw ConfigError("raman", "effective coupling gives Omega_R = 0");
    Omega_R = c.Omega_R;
    tau = ls.tau.value_or(cfg.raman->pulse_duration_tau > 0.0 ? cfg.raman->pulse_duration_tau
                                                               : kPi / Omega_R);
  }
  const int j_max = o.jmax.value_or(ls.j_max);
  if (j_max < 0) throw ConfigError("jmax", "must be >= 0");

  ShiftModel model = ls.shift_model;
  std::optional<QuadraticCalibration> calibration;
  if (ls.calibrate_delta_max) {
    if (j_max < 1) throw ConfigError("lineshape.calibrate_delta_max", "needs j_max >= 1");
    calibration = calibrate_quadratic_scale(Omega_R, tau, j_max, *ls.calibrate_delta_max * Omega_R);
    model.scale_s = calibration->scale_s;
    if (!calibration->exact)
      diag << "warning: delta_max target " << format_double(*ls.calibrate_delta_max)
           << " Omega_R is out of reach; closest is " << format_double(calibration->peak.delta_max / Omega_R)
           << '\n';
  }
  const int kick_L = cfg.raman ? cfg.raman->kick_oam_L : cfg.sensor.kick_oam_L;
  const auto shifts = ring_detuning_shifts(model, cfg.beam, cfg.species, kick_L, j_max);
  const auto grid = linear_grid(ls.delta_min * Omega_R, ls.delta_max * Omega_R,
                                static_cast<std::size_t>(ls.points));
  const Lineshape curve = ensemble_lineshape(shifts, Omega_R, tau, grid, cfg.parallelism);
  const Peak peak = locate_peak(shifts, Omega_R, tau, grid.front(), grid.back());
  const FitResult fit = fit_lineshape(curve, ls.fit_model);

  Json fit_json = {{"amplitude_A", fit.amplitude_A},
                   {"delta_0", fit.delta_0},
                   {"Omega_R_eff", fit.Omega_R_eff},
                   {"rms_residual", fit.rms_residual},
                   {"delta_0_over_OmegaR", fit.delta_0 / Omega_R},
                   {"Omega_R_eff_over_OmegaR", fit.Omega_R_eff / Omega_R}};
  Json summary;
  summary["command"] = "lineshape";
  summary["Omega_R"] = Omega_R;
  summary["tau"] = tau;
  summary["j_max"] = j_max;
  summary["shift_model"] = {{"kind", ShiftModel::name(model.kind)}, {"scale_s", model.scale_s}};
  if (calibration) {
    summary["shift_model"]["calibration_target_over_OmegaR"] = *ls.calibrate_delta_max;
    summary["shift_model"]["calibration_exact"] = calibration->exact;
  }
  summary["peak"] = {{"delta_max_over_OmegaR", peak.delta_max / Omega_R}, {"P_max", peak.P_max}};
  summary["fit"] = fit_json;

  if (cfg.output_format == OutputFormat::csv) {
    CsvWriter csv(out, {"delta_over_OmegaR", "probability"});
    for (std::size_t i = 0; i < grid.size(); ++i) csv.row({grid[i] / Omega_R, curve.probability[i]});
    if (out_path) {
      std::ofstream f(*out_path + ".fit.json");
      if (!f) throw ConfigError("out", "cannot write " + *out_path + ".fit.json");
      write_json(f, summary);
    } else {
      write_json(diag, summary);
    }
    return;
  }
  Json points = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i)
    points.push_back({{"delta_over_OmegaR", grid[i] / Omega_R}, {"probability", curve.probability[i]}});
  summary["curve"] = points;
  write_json(out, summary);
}

void run_rotation_scan(const RunConfig& cfg, const CommandOverrides& o, std::ostream& out) {
  std::vector<double> omegas;
  if (o.omega) {
    omegas = {*o.omega};
  } else if (cfg.rotation_scan.points == 1) {
    omegas = {cfg.rotation_scan.Omega_min};
  } else {
    omegas = linear_grid(cfg.rotation_scan.Omega_min, cfg.rotation_scan.Omega_max,
                         static_cast<std::size_t>(cfg.rotation_scan.points));
  }
  const auto rows = rotation_scan(cfg.sensor.kick_oam_L, cfg.sensor.omega_0, omegas);
  if (cfg.output_format == OutputFormat::csv) {
    CsvWriter csv(out, {"Omega", "line_id", "m_ell", "zeta", "frequency"});
    for (const auto& r : rows)
      csv.row({r.Omega, r.line.id(), static_cast<long long>(r.line.m_ell),
               static_cast<long long>(r.line.zeta), r.frequency});
    return;
  }
  Json j;
  j["command"] = "rotation-scan";
  j["kick_oam_L"] = cfg.sensor.kick_oam_L;
  j["omega_0"] = cfg.sensor.omega_0;
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back({{"Omega", r.Omega},
                   {"line_id", r.line.id()},
                   {"m_ell", r.line.m_ell},
                   {"zeta", r.line.zeta},
                   {"frequency", r.frequency}});
  j["rows"] = arr;
  write_json(out, j);
}

void run_budget(const RunConfig& cfg, std::ostream& out) {
  const SensorBudget b = sensor_budget(cfg.sensor);
  const double hbar = PhysicalConstants::hbar;
  const std::vector<std::pair<std::string, double>> rows = {
      {"dOmega_freq", b.dOmega_freq},
      {"dOmega_rabi", b.dOmega_rabi},
      {"dOmega_shot", b.dOmega_shot},
      {"dphi_omega", b.rabi.dphi},
      {"dphi_omega_over_phi_R", b.rabi.dphi_over_phi},
      {"deps_omega_J", b.rabi.deps},
      {"deps_omega_over_hbar", b.rabi.deps / hbar},
      {"deps_omega_over_C", b.rabi.deps_over_C},
      {"dphi_I", b.shot.dphi},
      {"deps_I_J", b.shot.deps},
      {"deps_I_over_hbar", b.shot.deps / hbar},
  };
  if (cfg.output_format == OutputFormat::csv) {
    CsvWriter csv(out, {"quantity", "value"});
    for (const auto& [k, v] : rows) csv.row({k, v});
    return;
  }
  Json j;
  j["command"] = "budget";
  j["inputs"] = config_to_json(cfg)["sensor"];
  for (const auto& [k, v] : rows) j[k] = v;
  write_json(out, j);
}

void run_tilt(const RunConfig& cfg, std::ostream& out) {
  const auto vec = [](const std::array<double, 3>& a) { return Eigen::Vector3d(a[0], a[1], a[2]); };
  const TiltGeometry t = tilt_compensation(vec(cfg.tilt.gravity_g), vec(cfg.tilt.acceleration_a),
                                           vec(cfg.tilt.angular_velocity_Omega));
  const auto arr = [](const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); };
  if (cfg.output_format == OutputFormat::csv) {
    CsvWriter csv(out, {"quantity", "value"});
    csv.row({"tilt_angle_theta_a_rad", t.tilt_angle_theta_a});
    csv.row({"tilt_angle_theta_a_deg", t.tilt_angle_theta_a * 180.0 / kPi});
    csv.row({"effective_Omega_prime", t.effective_Omega_prime});
    for (int i = 0; i < 3; ++i) csv.row({"rotor_axis_" + std::string(1, "xyz"[i]), t.rotor_axis(i)});
    return;
  }
  Json j;
  j["command"] = "tilt";
  j["gravity_g"] = arr(t.gravity_g);
  j["acceleration_a"] = arr(t.acceleration_a);
  j["angular_velocity_Omega"] = arr(t.angular_velocity_Omega);
  j["effective_gravity"] = arr(t.effective_gravity);
  j["rotor_axis"] = arr(t.rotor_axis);
  j["tilt_angle_theta_a_rad"] = t.tilt_angle_theta_a;
  j["tilt_angle_theta_a_deg"] = t.tilt_angle_theta_a * 180.0 / kPi;
  j["effective_Omega_prime"] = t.effective_Omega_prime;
  write_json(out, j);
}

}  // namespace

void run_subcommand(const std::string& command, const RunConfig& cfg,
                    const CommandOverrides& overrides, std::ostream& out,
                    const std::optional<std::string>& out_path, std::ostream& diag) {
  if (command == "spectrum") run_spectrum(cfg, overrides, out, diag);
  else if (command == "lineshape") run_lineshape(cfg, overrides, out, out_path, diag);
  else if (command == "rotation-scan") run_rotation_scan(cfg, overrides, out);
  else if (command == "budget") run_budget(cfg, out);
  else if (command == "tilt") run_tilt(cfg, out);
  else if (command == "show-config") write_json(out, config_to_json(cfg));
  else throw InvalidInput("unknown subcommand '" + command + "'");
}

int exit_code_for_current_exception(std::ostream& diag) {
  try {
    throw;
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
    return exit_code::config;
  } catch (const ValidityError& e) {
    diag << "validity error: " << e.what() << " (ratio " << format_double(e.ratio()) << ")\n";
    return exit_code::validity;
  } catch (const ConvergenceError& e) {
    diag << "convergence error: " << e.what();
    if (!e.diagnostics().empty()) diag << " [" << e.diagnostics() << ']';
    diag << '\n';
    return exit_code::convergence;
  } catch (const FitFailure& e) {
    diag << "convergence error: " << e.what() << " (best rms "
         << format_double(e.best_so_far().rms_residual) << ")\n";
    return exit_code::convergence;
  } catch (const std::invalid_argument& e) {
    diag << "invalid input: " << e.what() << '\n';
    return exit_code::config;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-rotor spectra, Raman lineshapes and rotation-sensor budgets"};
  app.name("qrotor_cli");
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<unsigned> parallelism;
  CommandOverrides overrides;

  app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output file (default: config output.path, else stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--parallel,--parallelism", parallelism, "worker threads for grid sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--omega", overrides.omega, "rotation-scan: single angular velocity, rad/s");
  app.add_option("--jmax", overrides.jmax, "lineshape: ring index range -jmax..jmax")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--strict", overrides.strict, "treat validity-inequality violations as errors");
  const char* commands[][2] = {{"spectrum", "trap level table"},
                               {"lineshape", "ensemble Raman lineshape and fit"},
                               {"rotation-scan", "six transition lines versus Omega"},
                               {"budget", "rotation-sensor uncertainty budget"},
                               {"tilt", "rotor-plane tilt compensation"},
                               {"show-config", "resolved configuration with defaults"}};
  for (const auto& c : commands) app.add_subcommand(c[0], c[1])->fallthrough();
  app.require_subcommand(1, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return exit_code::usage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = parse_config(config_path);
    if (format) cfg.output_format = *format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (parallelism) cfg.parallelism = *parallelism;
    if (!out_path && cfg.output_path) out_path = cfg.output_path->string();

    std::ostringstream buffer;
    run_subcommand(command, cfg, overrides, buffer, out_path, err);
    if (out_path) {
      std::ofstream f(*out_path, std::ios::binary);
      if (!f) throw ConfigError("out", "cannot write " + *out_path);
      f << buffer.str();
    } else {
      out << buffer.str();
    }
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
  return exit_code::ok;
}

}  // namespace qrotor
