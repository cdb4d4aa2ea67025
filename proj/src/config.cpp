#include "qrotor/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qrotor/errors.hpp"

namespace qrotor {

namespace {

/// Reads typed keys from one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const Json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    const Json& node = root.at(name_);
    if (!node.is_object()) throw ConfigError(name_, "must be an object");
    node_ = &node;
  }

  bool present() const { return node_ != nullptr; }
  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  template <class T>
  void read(const std::string& key, T& target) {
    if (!has(key)) return;
    used_.insert(key);
    try {
      target = node_->at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(field(key), "has the wrong type");
    }
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& target) {
    if (!has(key)) return;
    T value{};
    read(key, value);
    target = value;
  }

  std::string field(const std::string& key) const { return name_ + "." + key; }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items())
      if (!used_.count(key)) throw ConfigError(field(key), "unknown key");
  }

 private:
  std::string name_;
  const Json* node_ = nullptr;
  std::set<std::string> used_;
};

void read_vector(Section& s, const std::string& key, std::array<double, 3>& target) {
  std::vector<double> v;
  s.read(key, v);
  if (!s.has(key)) return;
  if (v.size() != 3) throw ConfigError(s.field(key), "must have 3 components");
  std::copy(v.begin(), v.end(), target.begin());
}

/// Runs a module validator and reports its field-prefixed message as a ConfigError.
template <class Fn>
void check(Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto space = msg.find(' ');
    const std::string head = msg.substr(0, space);
    const bool named = head.find('.') != std::string::npos && head.find(':') == std::string::npos;
    throw ConfigError(named ? head : "", named && space != std::string::npos ? msg.substr(space + 1) : msg);
  }
}

}  // namespace

void RunConfig::validate() const {
  check([&] { species.validate(); });
  check([&] { beam.validate(); });
  if (spectrum.n_z_max < 0) throw ConfigError("spectrum.n_z_max", "must be >= 0");
  if (spectrum.n_r_max < 0) throw ConfigError("spectrum.n_r_max", "must be >= 0");
  if (spectrum.m_ell_max < 0) throw ConfigError("spectrum.m_ell_max", "must be >= 0");
  if (spectrum.axial_points < 16) throw ConfigError("spectrum.axial_points", "must be >= 16");
  if (spectrum.radial_points < 16) throw ConfigError("spectrum.radial_points", "must be >= 16");
  if (!(spectrum.ratio_threshold > 0.0)) throw ConfigError("spectrum.ratio_threshold", "must be > 0");
  if (raman) check([&] { raman->validate(beam); });
  if (lineshape.j_max < 0) throw ConfigError("lineshape.j_max", "must be >= 0");
  if (lineshape.Omega_R && !(*lineshape.Omega_R > 0.0))
    throw ConfigError("lineshape.Omega_R", "must be > 0");
  if (lineshape.tau && !(*lineshape.tau > 0.0)) throw ConfigError("lineshape.tau", "must be > 0");
  if (lineshape.shift_model.scale_s < 0.0) throw ConfigError("lineshape.scale_s", "must be >= 0");
  if (!(lineshape.delta_max > lineshape.delta_min))
    throw ConfigError("lineshape.delta_max", "must exceed delta_min");
  if (lineshape.points < 50) throw ConfigError("lineshape.points", "must be >= 50");
  if (lineshape.calibrate_delta_max && lineshape.shift_model.kind != ShiftModel::Kind::quadratic)
    throw ConfigError("lineshape.calibrate_delta_max", "needs shift_model = quadratic");
  check([&] { sensor.validate(); });
  if (!(sensor_omega_p > 0.0)) throw ConfigError("sensor.omega_p", "must be > 0");
  if (rotation_scan.points < 1) throw ConfigError("rotation_scan.points", "must be >= 1");
  if (rotation_scan.points > 1 && !(rotation_scan.Omega_max > rotation_scan.Omega_min))
    throw ConfigError("rotation_scan.Omega_max", "must exceed Omega_min");
  if (parallelism < 1) throw ConfigError("parallelism", "must be >= 1");
}

RunConfig parse_config_text(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");

  RunConfig cfg;
  static const std::set<std::string> sections{"species", "beam",    "spectrum", "raman",
                                              "lineshape", "sensor", "rotation_scan", "tilt",
                                              "output", "parallelism"};
  for (const auto& [key, value] : root.items())
    if (!sections.count(key)) throw ConfigError(key, "unknown section");

  Section species(root, "species");
  std::string preset = "6Li";
  species.read("preset", preset);
  if (preset != "6Li") throw ConfigError("species.preset", "only 6Li is built in; give mass_u etc. explicitly");
  std::optional<double> mass_u;
  species.read("mass_u", mass_u);
  if (mass_u) cfg.species.mass = *mass_u * PhysicalConstants::atomic_mass;
  species.read("g_factor", cfg.species.g_factor);
  species.read("hyperfine_splitting", cfg.species.hyperfine_splitting);
  species.read("F_ground", cfg.species.F_ground);
  species.read("label", cfg.species.label);
  species.finish();

  Section beam(root, "beam");
  beam.read("wavelength", cfg.beam.wavelength);
  beam.read("waist_w0", cfg.beam.waist_w0);
  beam.read("power_P0", cfg.beam.power_P0);
  beam.read("oam_l", cfg.beam.oam_l);
  beam.read("radial_p", cfg.beam.radial_p);
  beam.read("phase_z0", cfg.beam.phase_z0);
  beam.read("collimated", cfg.beam.collimated);
  beam.read("divergence_scale_z_eff", cfg.beam.divergence_scale_z_eff);
  if (beam.has("trap_depth_V0") && beam.has("trap_depth_E0_units"))
    throw ConfigError("beam.trap_depth_V0", "give either trap_depth_V0 or trap_depth_E0_units");
  beam.read("trap_depth_V0", cfg.beam.trap_depth_V0);
  std::optional<double> depth_e0;
  beam.read("trap_depth_E0_units", depth_e0);
  beam.finish();
  if (depth_e0) {
    if (!(cfg.beam.wavelength > 0.0)) throw ConfigError("beam.wavelength", "must be > 0");
    if (!(cfg.species.mass > 0.0)) throw ConfigError("species.mass_u", "must be > 0");
    cfg.beam.trap_depth_V0 = *depth_e0 * recoil_energy(cfg.species, cfg.beam.wavelength);
  }

  Section spectrum(root, "spectrum");
  spectrum.read("n_z_max", cfg.spectrum.n_z_max);
  spectrum.read("n_r_max", cfg.spectrum.n_r_max);
  spectrum.read("m_ell_max", cfg.spectrum.m_ell_max);
  spectrum.read("ring_index", cfg.spectrum.ring_index);
  spectrum.read("ratio_threshold", cfg.spectrum.ratio_threshold);
  spectrum.read("axial_points", cfg.spectrum.axial_points);
  spectrum.read("radial_points", cfg.spectrum.radial_points);
  spectrum.read("axial_box_lengths", cfg.spectrum.axial_box_lengths);
  spectrum.read("radial_box_lengths", cfg.spectrum.radial_box_lengths);
  spectrum.finish();

  Section raman(root, "raman");
  if (raman.present()) {
    RamanConfig r;
    raman.read("B_p0", r.B_p0);
    raman.read("B_s0", r.B_s0);
    raman.read("omega_p", r.omega_p);
    raman.read("omega_s", r.omega_s);
    raman.read("Delta_hf", r.Delta_hf);
    raman.read("kick_power_P_e", r.kick_power_P_e);
    raman.read("kick_waist_w_e", r.kick_waist_w_e);
    raman.read("kick_oam_L", r.kick_oam_L);
    raman.read("Delta_e", r.Delta_e);
    raman.read("polarizability", r.polarizability);
    raman.read("pulse_duration_tau", r.pulse_duration_tau);
    raman.read("omega0", r.omega0);
    raman.finish();
    cfg.raman = r;
  }

  Section lineshape(root, "lineshape");
  lineshape.read("j_max", cfg.lineshape.j_max);
  lineshape.read("Omega_R", cfg.lineshape.Omega_R);
  lineshape.read("tau", cfg.lineshape.tau);
  std::string model = ShiftModel::name(cfg.lineshape.shift_model.kind);
  lineshape.read("shift_model", model);
  try {
    cfg.lineshape.shift_model.kind = ShiftModel::parse(model);
  } catch (const InvalidInput& e) {
    throw ConfigError("lineshape.shift_model", e.what());
  }
  lineshape.read("scale_s", cfg.lineshape.shift_model.scale_s);
  lineshape.read("calibrate_delta_max", cfg.lineshape.calibrate_delta_max);
  lineshape.read("delta_min", cfg.lineshape.delta_min);
  lineshape.read("delta_max", cfg.lineshape.delta_max);
  lineshape.read("points", cfg.lineshape.points);
  std::string fit = "pi_pulse";
  lineshape.read("fit_model", fit);
  if (fit == "pi_pulse") cfg.lineshape.fit_model = FitModel::PiPulse;
  else if (fit == "fixed_duration") cfg.lineshape.fit_model = FitModel::FixedDuration;
  else throw ConfigError("lineshape.fit_model", "must be pi_pulse or fixed_duration");
  lineshape.finish();

  Section sensor(root, "sensor");
  sensor.read("kick_oam_L", cfg.sensor.kick_oam_L);
  sensor.read("ring_count_N", cfg.sensor.ring_count_N);
  sensor.read("omega_0", cfg.sensor.omega_0);
  sensor.read("Omega_R", cfg.sensor.Omega_R);
  sensor.read("photon_count_pump", cfg.sensor.photon_count_pump);
  sensor.read("photon_count_stokes", cfg.sensor.photon_count_stokes);
  sensor.read("Delta_hf", cfg.sensor.Delta_hf);
  sensor.read("distinguishability_threshold", cfg.sensor.distinguishability_threshold);
  sensor.read("omega_p", cfg.sensor_omega_p);
  const bool explicit_uncertainty = sensor.has("freq_uncertainty_pump") || sensor.has("freq_uncertainty_stokes");
  if (explicit_uncertainty && sensor.has("fractional_stability"))
    throw ConfigError("sensor.fractional_stability", "conflicts with explicit freq_uncertainty_*");
  sensor.read("freq_uncertainty_pump", cfg.sensor.freq_uncertainty_pump);
  sensor.read("freq_uncertainty_stokes", cfg.sensor.freq_uncertainty_stokes);
  if (!explicit_uncertainty) {
    double fraction = 2e-18;
    sensor.read("fractional_stability", fraction);
    if (fraction < 0.0) throw ConfigError("sensor.fractional_stability", "must be >= 0");
    cfg.sensor_fractional_stability = fraction;
    if (cfg.sensor_omega_p > 0.0) apply_fractional_stability(cfg.sensor, cfg.sensor_omega_p, fraction);
  }
  sensor.finish();

  Section scan(root, "rotation_scan");
  scan.read("Omega_min", cfg.rotation_scan.Omega_min);
  scan.read("Omega_max", cfg.rotation_scan.Omega_max);
  scan.read("points", cfg.rotation_scan.points);
  scan.finish();

  Section tilt(root, "tilt");
  read_vector(tilt, "gravity_g", cfg.tilt.gravity_g);
  read_vector(tilt, "acceleration_a", cfg.tilt.acceleration_a);
  read_vector(tilt, "angular_velocity_Omega", cfg.tilt.angular_velocity_Omega);
  tilt.finish();

  Section output(root, "output");
  std::optional<std::string> path;
  output.read("path", path);
  if (path) cfg.output_path = *path;
  std::string format = "csv";
  output.read("format", format);
  if (format == "csv") cfg.output_format = OutputFormat::csv;
  else if (format == "json") cfg.output_format = OutputFormat::json;
  else throw ConfigError("output.format", "must be csv or json");
  output.finish();

  if (root.contains("parallelism")) {
    const Json& p = root.at("parallelism");
    if (!p.is_number_integer() || p.get<long long>() < 1) throw ConfigError("parallelism", "must be an integer >= 1");
    cfg.parallelism = static_cast<unsigned>(p.get<long long>());
  }

  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["species"] = {{"label", cfg.species.label},
                  {"mass_u", cfg.species.mass / PhysicalConstants::atomic_mass},
                  {"g_factor", cfg.species.g_factor},
                  {"hyperfine_splitting", cfg.species.hyperfine_splitting},
                  {"F_ground", cfg.species.F_ground}};
  Json beam = {{"wavelength", cfg.beam.wavelength},
               {"waist_w0", cfg.beam.waist_w0},
               {"power_P0", cfg.beam.power_P0},
               {"oam_l", cfg.beam.oam_l},
               {"radial_p", cfg.beam.radial_p},
               {"phase_z0", cfg.beam.phase_z0},
               {"trap_depth_V0", cfg.beam.trap_depth_V0},
               {"collimated", cfg.beam.collimated}};
  if (cfg.beam.divergence_scale_z_eff) beam["divergence_scale_z_eff"] = *cfg.beam.divergence_scale_z_eff;
  j["beam"] = beam;
  j["spectrum"] = {{"n_z_max", cfg.spectrum.n_z_max},
                   {"n_r_max", cfg.spectrum.n_r_max},
                   {"m_ell_max", cfg.spectrum.m_ell_max},
                   {"ring_index", cfg.spectrum.ring_index},
                   {"ratio_threshold", cfg.spectrum.ratio_threshold},
                   {"axial_points", cfg.spectrum.axial_points},
                   {"radial_points", cfg.spectrum.radial_points},
                   {"axial_box_lengths", cfg.spectrum.axial_box_lengths},
                   {"radial_box_lengths", cfg.spectrum.radial_box_lengths}};
  if (cfg.raman) {
    const RamanConfig& r = *cfg.raman;
    Json raman = {{"B_p0", r.B_p0},
                  {"B_s0", r.B_s0},
                  {"omega_p", r.omega_p},
                  {"omega_s", r.omega_s},
                  {"Delta_hf", r.Delta_hf},
                  {"kick_power_P_e", r.kick_power_P_e},
                  {"kick_waist_w_e", r.kick_waist(cfg.beam)},
                  {"kick_oam_L", r.kick_oam_L},
                  {"Delta_e", r.Delta_e},
                  {"polarizability", r.polarizability},
                  {"pulse_duration_tau", r.pulse_duration_tau},
                  {"omega0", r.omega0}};
    j["raman"] = raman;
  }
  Json ls = {{"j_max", cfg.lineshape.j_max},
             {"shift_model", ShiftModel::name(cfg.lineshape.shift_model.kind)},
             {"scale_s", cfg.lineshape.shift_model.scale_s},
             {"delta_min", cfg.lineshape.delta_min},
             {"delta_max", cfg.lineshape.delta_max},
             {"points", cfg.lineshape.points},
             {"fit_model", cfg.lineshape.fit_model == FitModel::PiPulse ? "pi_pulse" : "fixed_duration"}};
  if (cfg.lineshape.Omega_R) ls["Omega_R"] = *cfg.lineshape.Omega_R;
  if (cfg.lineshape.tau) ls["tau"] = *cfg.lineshape.tau;
  if (cfg.lineshape.calibrate_delta_max) ls["calibrate_delta_max"] = *cfg.lineshape.calibrate_delta_max;
  j["lineshape"] = ls;
  Json sensor = {{"kick_oam_L", cfg.sensor.kick_oam_L},
                 {"ring_count_N", cfg.sensor.ring_count_N},
                 {"omega_0", cfg.sensor.omega_0},
                 {"Omega_R", cfg.sensor.Omega_R},
                 {"freq_uncertainty_pump", cfg.sensor.freq_uncertainty_pump},
                 {"freq_uncertainty_stokes", cfg.sensor.freq_uncertainty_stokes},
                 {"photon_count_pump", cfg.sensor.photon_count_pump},
                 {"photon_count_stokes", cfg.sensor.photon_count_stokes},
                 {"Delta_hf", cfg.sensor.Delta_hf},
                 {"distinguishability_threshold", cfg.sensor.distinguishability_threshold},
                 {"omega_p", cfg.sensor_omega_p}};
  if (cfg.sensor_fractional_stability) sensor["fractional_stability"] = *cfg.sensor_fractional_stability;
  j["sensor"] = sensor;
  j["rotation_scan"] = {{"Omega_min", cfg.rotation_scan.Omega_min},
                        {"Omega_max", cfg.rotation_scan.Omega_max},
                        {"points", cfg.rotation_scan.points}};
  j["tilt"] = {{"gravity_g", cfg.tilt.gravity_g},
               {"acceleration_a", cfg.tilt.acceleration_a},
               {"angular_velocity_Omega", cfg.tilt.angular_velocity_Omega}};
  j["output"] = {{"format", cfg.output_format == OutputFormat::csv ? "csv" : "json"}};
  if (cfg.output_path) j["output"]["path"] = cfg.output_path->string();
  return j;
}

}  // namespace qrotor
