#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "nvsim/config.hpp"
#include "nvsim/lambda_dynamics.hpp"
#include "nvsim/polariton.hpp"
#include "nvsim/ultrafast.hpp"

#ifndef NVSIM_VERSION
#define NVSIM_VERSION "0.1.0"
#endif

// Scenario runner: config file in, data files out, manifest returned.
namespace nvsim::scenario {

using config::Quantity;
using config::Section;
using json = nlohmann::json;

struct CatalogEntry {
  std::string name;
  std::string reproduces;
  std::vector<std::string> schema;
};

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c{
      {"levels",
       "Excited-state fine structure against axial field or strain, with the lower-branch |L,0>/|L,+1> "
       "anticrossing located on the field axis.",
       {"params.*", "field.{b | b_z, strain_delta, strain_angle}", "scan.{axis: bz|strain, start, stop, points}",
        "include_diamagnetic"}},
      {"sw-compare",
       "Exact 6x6 eigenvalues against the numeric and closed-form second-order branch Hamiltonians over a "
       "strain sweep, with log-log error slopes.",
       {"params.*", "field.{b_z, strain_angle}", "sweep.{start, stop, points, spacing: log|linear}"}},
      {"stark-faraday",
       "Faraday rotation of the probe and the optical Stark shift it implies, against laser detuning, in the "
       "far-detuned or odd-Lorentzian form.",
       {"params.*", "stark_faraday.{mode: far_detuned|lorentzian, power, duration, mode_area | coupling_d, "
                    "dipole_angle, detuning.{start, stop, points}, transitions.{zero, minus_one}.{energy, linewidth, "
                    "faraday_amplitude}}"}},
      {"cpt",
       "Coherent population trapping in the five-level Lambda model: ground-qubit Bloch vector and dark-state "
       "fidelity while the drive pumps into the dark state.",
       {"lambda.{delta_l, delta_e, omega, theta, phi, epsilon_s, two_photon_detuning, excited: R|L|both, "
        "include_singlet}",
        "rates.{gamma_rad, gamma_isc, gamma_isc_rev, isc_rev_to_zero, gamma_1, gamma_phi}", "initial: 0g|+1g",
        "target_branch: R|L", "time.{stop, points}"}},
      {"srt",
       "Stimulated Raman rotation of the ground qubit by a detuned two-field drive, including the inward spiral "
       "when both excited levels compete.",
       {"same keys as cpt"}},
      {"tdqt",
       "Pulse-pair spin trajectories against inter-pulse delay and the precession rate and tilt fitted from "
       "them.",
       {"params.*", "field.*", "tdqt.{backend: effective|branch, effective.{omega_gs, omega_es, eta, omega_opt}, "
                                "field_points, pulse.{theta, phi}, initial: 0|+1|x|y, delays.{stop, points}, "
                                "dissipation.{gamma_rad, gamma_phi}}"}},
  };
  return c;
}

struct RunManifest {
  std::string scenario;
  std::string config_path;
  std::string config_sha256;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;
  json summary = json::object();

  json to_json() const {
    return {{"tool", "nvsim"},
            {"version", NVSIM_VERSION},
            {"constants_table_version", constants::table_version},
            {"scenario", scenario},
            {"config", config_path},
            {"config_sha256", config_sha256},
            {"wall_time_s", wall_time_s},
            {"outputs", outputs},
            {"summary", summary}};
  }
};

inline std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string csv() const {
    std::string out;
    for (size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
      out += "\n";
    }
    return out;
  }

  json to_json() const { return {{"columns", columns}, {"rows", rows}}; }
};

class OutputSink {
 public:
  OutputSink(std::filesystem::path path, std::string format) : path_(std::move(path)), format_(std::move(format)) {}

  const std::string& format() const { return format_; }

  // Writes the file next to the configured path, with the stem suffixed.
  void write(const std::string& suffix, const std::string& ext, const std::string& content) {
    std::filesystem::path p = path_.parent_path() / (path_.stem().string() + suffix + ext);
    if (!p.parent_path().empty()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + p.string());
    written_.push_back(p.string());
  }

  void table(const Table& t, const json& extra = json::object(), const std::string& suffix = "") {
    if (format_ == "csv") {
      write(suffix, ".csv", t.csv());
    } else {
      json j = t.to_json();
      for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
      write(suffix, ".json", j.dump(2) + "\n");
    }
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::filesystem::path path_;
  std::string format_;
  std::vector<std::string> written_;
};

// Model validation failures inside a config section are reported as config
// validation errors against that section.
template <class F>
void validated(const Section& s, F&& check) {
  try {
    check();
  } catch (const ModelError& e) {
    throw ConfigError(ConfigError::Kind::Validation, s.path(), 0, e.what());
  }
}

inline NvParams read_params(Section s) {
  NvParams p;
  p.lambda_so = s.quantity("lambda_so", Quantity::Frequency, p.lambda_so);
  p.d_es = s.quantity("d_es", Quantity::Frequency, p.d_es);
  p.delta1 = s.quantity("delta1", Quantity::Frequency, p.delta1);
  p.delta2 = s.quantity("delta2", Quantity::Frequency, p.delta2);
  p.d_gs = s.quantity("d_gs", Quantity::Frequency, p.d_gs);
  p.g_gs = s.quantity("g_gs", Quantity::Dimensionless, p.g_gs);
  p.g_es_par = s.quantity("g_es_par", Quantity::Dimensionless, p.g_es_par);
  p.g_es_perp = s.quantity("g_es_perp", Quantity::Dimensionless, p.g_es_perp);
  p.l_z = s.quantity("l_z", Quantity::Dimensionless, p.l_z);
  p.gamma_r = s.quantity("gamma_r", Quantity::Rate, p.gamma_r);
  p.e_ph = s.quantity("e_ph", Quantity::Energy, p.e_ph);
  p.n_diamond = s.quantity("n_diamond", Quantity::Dimensionless, p.n_diamond);
  p.f_dw = s.quantity("f_dw", Quantity::Dimensionless, p.f_dw);
  s.finish();
  validated(s, [&] { p.validate(); });
  return p;
}

inline FieldConfig read_field(Section s) {
  FieldConfig f;
  if (s.has("b") && s.has("b_z")) throw s.invalid("b_z", "give either b or b_z, not both");
  if (s.has("b")) {
    auto b = s.quantity_list("b", Quantity::Field);
    if (b.size() != 3) throw s.invalid("b", "expected three components");
    f.b_gauss = {b[0], b[1], b[2]};
  } else {
    f.b_gauss[2] = s.quantity("b_z", Quantity::Field, 0.0);
  }
  f.strain_delta = s.quantity("strain_delta", Quantity::Frequency, 0.0);
  f.strain_angle = s.quantity("strain_angle", Quantity::Angle, 0.0);
  s.finish();
  validated(s, [&] { f.validate(); });
  return f;
}

inline std::vector<double> linear_grid(double start, double stop, int points) {
  std::vector<double> v;
  for (int k = 0; k < points; ++k)
    v.push_back(points == 1 ? start : start + (stop - start) * static_cast<double>(k) / (points - 1));
  return v;
}

inline std::vector<double> read_grid(Section s, Quantity q, bool allow_log = false) {
  const double start = s.quantity("start", q);
  const double stop = s.quantity("stop", q);
  const int points = s.integer("points", 101);
  const std::string spacing = allow_log ? s.choice("spacing", {"linear", "log"}, "linear") : "linear";
  s.finish();
  if (points < 1) throw s.invalid("points", "need at least one point");
  if (spacing == "linear") return linear_grid(start, stop, points);
  if (!(start > 0 && stop > 0)) throw s.invalid("start", "log spacing needs positive bounds");
  std::vector<double> v;
  for (double x : linear_grid(std::log(start), std::log(stop), points)) v.push_back(std::exp(x));
  return v;
}

inline std::vector<double> read_time_grid(Section s) {
  const double stop = s.quantity("stop", Quantity::Time);
  const int points = s.integer("points", 201);
  s.finish();
  if (!(stop > 0)) throw s.invalid("stop", "must be > 0");
  if (points < 2) throw s.invalid("points", "need at least two points");
  return linear_grid(0.0, stop, points);
}

inline void run_levels(Section& root, OutputSink& out, json& summary) {
  Section params = root.section("params"), field = root.section("field"), scan = root.section("scan");
  const bool dia = root.boolean("include_diamagnetic", false);
  root.finish();
  const NvParams p = read_params(params);
  const FieldConfig f = read_field(field);
  const std::string axis_name = scan.choice("axis", {"bz", "strain"}, "bz");
  const ScanAxis axis = axis_name == "bz" ? ScanAxis::Bz : ScanAxis::Strain;
  const auto values = read_grid(scan, axis == ScanAxis::Bz ? Quantity::Field : Quantity::Frequency);

  const FineStructureScan s = fine_structure_scan(p, f, axis, values, dia);
  Table t;
  t.columns = {axis == ScanAxis::Bz ? "scan_value_gauss" : "scan_value_hz", "e1_hz", "e2_hz", "e3_hz",
               "e4_hz", "e5_hz", "e6_hz"};
  for (size_t i = 0; i < values.size(); ++i) {
    std::vector<double> row{axis == ScanAxis::Bz ? values[i] : to_hz(values[i])};
    for (double e : s.points[i].values) row.push_back(to_hz(e));
    t.rows.push_back(row);
  }
  json extra = json::object();
  if (axis == ScanAxis::Bz) {
    const Anticrossing ac = lower_branch_anticrossing(s);
    summary["anticrossing_gauss"] = ac.location;
    summary["anticrossing_gap_hz"] = to_hz(ac.gap);
    summary["gap_over_delta2"] = ac.gap / std::abs(p.delta2);
    extra["anticrossing"] = {{"location_gauss", ac.location}, {"gap_hz", to_hz(ac.gap)}};
  }
  out.table(t, extra);
}

inline void run_sw_compare(Section& root, OutputSink& out, json& summary) {
  Section params = root.section("params"), field = root.section("field"), sweep = root.section("sweep");
  root.finish();
  const NvParams p = read_params(params);
  const FieldConfig f = read_field(field);
  const auto deltas = read_grid(sweep, Quantity::Frequency, true);

  const SwScaling s = sw_scaling(p, f, deltas);
  Table t;
  t.columns = {"delta_hz"};
  for (const char* tag : {"exact", "numeric", "closed"})
    for (int k = 1; k <= 6; ++k) t.columns.push_back(std::string(tag) + "_e" + std::to_string(k) + "_hz");
  for (const char* c : {"numeric_vs_exact_hz", "closed_vs_exact_hz", "closed_vs_numeric_hz"}) t.columns.push_back(c);
  for (const auto& pt : s.points) {
    std::vector<double> row{to_hz(pt.delta)};
    for (const auto* v : {&pt.exact, &pt.numeric, &pt.closed_form})
      for (double e : *v) row.push_back(to_hz(e));
    row.push_back(to_hz(pt.numeric_vs_exact));
    row.push_back(to_hz(pt.closed_vs_exact));
    row.push_back(to_hz(pt.closed_vs_numeric));
    t.rows.push_back(row);
  }
  summary["slope_numeric_vs_exact"] = s.slope_numeric_vs_exact;
  summary["slope_closed_vs_exact"] = s.slope_closed_vs_exact;
  summary["slope_closed_vs_numeric"] = s.slope_closed_vs_numeric;
  out.table(t, {{"slopes", summary}});
}

inline Transition read_transition(Section s) {
  Transition t;
  t.energy = s.quantity("energy", Quantity::Frequency, 0.0);
  t.linewidth = s.quantity("linewidth", Quantity::Frequency);
  t.faraday_amplitude = s.quantity("faraday_amplitude", Quantity::FaradayAmplitude, 0.0);
  s.finish();
  if (!(t.linewidth > 0)) throw s.invalid("linewidth", "must be > 0");
  return t;
}

inline void run_stark_faraday(Section& root, OutputSink& out, json& summary) {
  Section params = root.section("params"), sf = root.section("stark_faraday");
  root.finish();
  const NvParams p = read_params(params);
  const std::string mode = sf.choice("mode", {"far_detuned", "lorentzian"}, "far_detuned");
  OpticalPulse pulse;
  pulse.power = sf.quantity("power", Quantity::Power, pulse.power);
  pulse.duration = sf.quantity("duration", Quantity::Time, pulse.duration);
  pulse.dipole_angle = sf.quantity("dipole_angle", Quantity::Angle, 0.0);
  if (sf.has("coupling_d") && sf.has("mode_area")) throw sf.invalid("coupling_d", "give mode_area or coupling_d");
  if (sf.has("coupling_d"))
    pulse.mode_area = mode_area_for_coupling(p, pulse.dipole_angle, sf.quantity("coupling_d", Quantity::Frequency));
  else
    pulse.mode_area = sf.quantity("mode_area", Quantity::Area, pulse.mode_area);
  const auto detunings = read_grid(sf.section("detuning"), Quantity::Frequency);
  Section tr = sf.section("transitions");
  TransitionSet ts{{0, read_transition(tr.section("zero"))}, {-1, read_transition(tr.section("minus_one"))}};
  tr.finish();
  sf.finish();
  validated(sf, [&] {
    pulse.validate();
    validate(ts);
  });

  const double d = coupling_constant_d(p, pulse);
  const double omega_s = ts.at(-1).energy - ts.at(0).energy;
  summary["coupling_d_hz"] = to_hz(d);
  summary["mode_area_m2"] = pulse.mode_area;
  summary["photons_per_mode"] = photons_per_mode(p, pulse);
  Table t;
  t.columns = {"detuning_hz", "stark_hz", "faraday_rad"};
  for (double d0 : detunings) {
    const double phi_f =
        mode == "far_detuned" ? faraday_phase_far_detuned(d, omega_s, d0) : faraday_phase_lorentzian(ts, d0);
    t.rows.push_back({to_hz(d0), stark_from_faraday(pulse.power, p.e_ph, phi_f), phi_f});
  }
  out.table(t);
}

inline LambdaModel read_lambda(Section lam, Section rates) {
  LambdaModel m;
  m.delta_l = lam.quantity("delta_l", Quantity::Frequency, 0.0);
  m.delta_e = lam.quantity("delta_e", Quantity::Frequency, 0.0);
  m.omega = lam.quantity("omega", Quantity::Frequency);
  m.theta = lam.quantity("theta", Quantity::Angle);
  m.phi = lam.quantity("phi", Quantity::Angle, 0.0);
  m.epsilon_s = lam.quantity("epsilon_s", Quantity::Frequency, 0.0);
  m.two_photon_detuning = lam.quantity("two_photon_detuning", Quantity::Frequency, 0.0);
  const std::string ex = lam.choice("excited", {"R", "L", "both"}, "both");
  m.excited = ex == "R" ? ExcitedLevels::R : ex == "L" ? ExcitedLevels::L : ExcitedLevels::Both;
  m.include_singlet = lam.boolean("include_singlet", true);
  lam.finish();
  RateTable& r = m.rates;
  r.gamma_rad = rates.quantity("gamma_rad", Quantity::Rate, r.gamma_rad);
  r.gamma_isc = rates.quantity("gamma_isc", Quantity::Rate, 0.0);
  r.gamma_isc_rev = rates.quantity("gamma_isc_rev", Quantity::Rate, 0.0);
  r.isc_rev_to_zero = rates.quantity("isc_rev_to_zero", Quantity::Dimensionless, 0.5);
  r.gamma_1 = rates.quantity("gamma_1", Quantity::Rate, 0.0);
  r.gamma_phi = rates.quantity("gamma_phi", Quantity::Rate, 0.0);
  rates.finish();
  validated(lam, [&] { m.validate(); });
  return m;
}

inline void run_lambda(Section& root, OutputSink& out, json& summary) {
  Section lam = root.section("lambda"), rates = root.section("rates"), time = root.section("time");
  const std::string initial = root.choice("initial", {"0g", "+1g"}, "0g");
  const std::string target = root.choice("target_branch", {"R", "L"}, "R");
  root.finish();
  const LambdaModel m = read_lambda(lam, rates);
  const auto times = read_time_grid(time);

  Vec g(2);
  if (initial == "0g")
    g << 0, 1;
  else
    g << 1, 0;
  const Vec dark = dark_state(m.theta, m.phi, target == "R" ? ExcitedLevels::R : ExcitedLevels::L);
  const auto traj = evolve(m, ground_density(m, g), times);

  Table t;
  t.columns = {"t_s", "bx", "by", "bz", "fidelity", "p_excited", "p_singlet"};
  json snapshots = json::array();
  for (size_t k = 0; k < times.size(); ++k) {
    const BlochVector b = bloch_vector(traj[k]);
    t.rows.push_back({times[k], b.bx, b.by, b.bz, fidelity(traj[k], dark), excited_population(traj[k]),
                      singlet_population(traj[k])});
    if (out.format() == "json") {
      const Mat& r = traj[k].matrix();
      json re = json::array(), im = json::array();
      for (Eigen::Index i = 0; i < r.rows(); ++i) {
        json rr = json::array(), ii = json::array();
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
          rr.push_back(r(i, j).real());
          ii.push_back(r(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
      }
      snapshots.push_back({{"t_s", times[k]}, {"re", re}, {"im", im}});
    }
  }
  const BlochVector last = bloch_vector(traj.back());
  summary["final_fidelity"] = fidelity(traj.back(), dark);
  summary["final_bloch_norm"] = last.norm();
  summary["raman_period_s"] = m.omega > 0 ? constants::two_pi / raman_frequency(m.delta_l, m.omega) : 0.0;
  json extra = json::object();
  if (out.format() == "json") {
    extra["labels"] = traj.front().op().labels();
    extra["rho"] = snapshots;
  }
  out.table(t, extra);
}

inline Vec initial_spin(const std::string& name) {
  Vec v(2);
  if (name == "0")
    v << 1, 0;
  else if (name == "+1")
    v << 0, 1;
  else if (name == "x")
    v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  else
    v << 1 / std::sqrt(2.0), cplx(0, 1 / std::sqrt(2.0));
  return v;
}

inline void run_tdqt(Section& root, OutputSink& out, json& summary) {
  Section params = root.section("params"), field = root.section("field"), td = root.section("tdqt");
  root.finish();
  const NvParams p = read_params(params);
  const FieldConfig f_template = read_field(field);
  const std::string backend = td.choice("backend", {"effective", "branch"}, "effective");
  Section pulse = td.section("pulse");
  const double theta = pulse.quantity("theta", Quantity::Angle, constants::pi);
  const double phi = pulse.quantity("phi", Quantity::Angle, 0.0);
  pulse.finish();
  const Vec psi0 = initial_spin(td.choice("initial", {"0", "+1", "x", "y"}, "y"));
  const auto times = read_time_grid(td.section("delays"));
  Section ds = td.section("dissipation");
  TdqtDissipation diss{ds.quantity("gamma_rad", Quantity::Rate, 0.0), ds.quantity("gamma_phi", Quantity::Rate, 0.0)};
  ds.finish();
  validated(ds, [&] { diss.validate(); });

  struct Point {
    json label;
    std::vector<TdqtPoint> traj;
    double omega_es, eta;
  };
  std::vector<Point> points;
  if (backend == "effective") {
    Section es = td.section("effective");
    EffectiveFourLevel e;
    e.omega_gs = es.quantity("omega_gs", Quantity::Frequency, 0.0);
    e.omega_es = es.quantity("omega_es", Quantity::Frequency);
    e.eta = es.quantity("eta", Quantity::Angle);
    e.omega_opt = es.quantity("omega_opt", Quantity::Frequency, 0.0);
    es.finish();
    validated(es, [&] { e.validate(); });
    points.push_back({json::object(), tdqt_scan(e, times, psi0, theta, phi, diss), e.omega_es, e.eta});
  } else {
    const auto fields = td.quantity_list("field_points", Quantity::Field);
    for (double bz : fields) {
      FieldConfig f = f_template;
      f.b_gauss = {0.0, 0.0, bz};
      const auto [w, eta] = branch_precession_parameters(p, f);
      points.push_back({{{"b_z_gauss", bz}}, tdqt_scan_branch(p, f, times, psi0, theta, phi, diss), w, eta});
    }
  }
  td.finish();

  json fits = json::array();
  for (size_t k = 0; k < points.size(); ++k) {
    Table t;
    t.columns = {"t_s", "bx", "by", "bz"};
    for (const auto& pt : points[k].traj) t.rows.push_back({pt.t, pt.b.bx, pt.b.by, pt.b.bz});
    out.table(t, points[k].label, "_" + std::to_string(k));
    json fit = points[k].label;
    fit["expected_omega_es_hz"] = to_hz(points[k].omega_es);
    fit["expected_eta_rad"] = points[k].eta;
    try {
      const PrecessionFit pf = extract_precession(points[k].traj);
      fit["omega_es_hz"] = to_hz(pf.omega_es);
      fit["eta_rad"] = pf.eta;
      fit["residual"] = pf.residual;
    } catch (const ModelError& e) {
      fit["fit_error"] = e.what();
    }
    fits.push_back(fit);
  }
  out.write("_fit", ".json", fits.dump(2) + "\n");
  summary["fits"] = fits;
}

// Runs a config. output_dir, when given, replaces the directory of the
// configured output path; otherwise relative paths resolve against the
// config file's directory.
inline RunManifest run(const std::string& config_path, const std::optional<std::string>& output_dir = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Section root = config::load_file(config_path);
  RunManifest m;
  m.config_path = config_path;
  m.config_sha256 = sha256_file(config_path);
  std::vector<std::string> names;
  for (const auto& c : catalog()) names.push_back(c.name);
  m.scenario = root.choice("scenario", names, "");

  Section o = root.section("output");
  std::filesystem::path path = o.string("path", m.scenario + ".csv");
  const std::string format = o.choice("format", {"csv", "json"}, "csv");
  o.finish();
  if (output_dir)
    path = std::filesystem::path(*output_dir) / path.filename();
  else if (path.is_relative())
    path = std::filesystem::path(config_path).parent_path() / path;
  OutputSink sink(path, format);

  if (m.scenario == "levels")
    run_levels(root, sink, m.summary);
  else if (m.scenario == "sw-compare")
    run_sw_compare(root, sink, m.summary);
  else if (m.scenario == "stark-faraday")
    run_stark_faraday(root, sink, m.summary);
  else if (m.scenario == "cpt" || m.scenario == "srt")
    run_lambda(root, sink, m.summary);
  else
    run_tdqt(root, sink, m.summary);

  m.outputs = sink.written();
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return m;
}

}  // namespace nvsim::scenario
