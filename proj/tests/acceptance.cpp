// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <unistd.h>

#include "nvsim/scenario.hpp"
#include "printed_matrices.hpp"

using namespace nvsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double uniform(std::mt19937& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

fs::path scratch(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("nvsim_acceptance_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome hamiltonian_golden() {
  std::mt19937 rng(101);
  double worst = 0;
  for (int draw = 0; draw < 100; ++draw) {
    NvParams p;
    p.lambda_so = from_ghz(uniform(rng, 3, 7));
    p.d_es = from_ghz(uniform(rng, 0.5, 2.5));
    p.delta1 = from_ghz(uniform(rng, -1, 1));
    p.delta2 = from_mhz(uniform(rng, 50, 250));
    p.g_es_par = uniform(rng, 1.9, 2.1);
    p.g_es_perp = uniform(rng, 1.9, 2.1);
    p.l_z = uniform(rng, 0.03, 0.07);
    FieldConfig f;
    f.b_gauss = {uniform(rng, -300, 300), uniform(rng, -300, 300), uniform(rng, -300, 300)};
    f.strain_delta = from_ghz(uniform(rng, 0, 10));
    f.strain_angle = uniform(rng, -constants::pi, constants::pi);
    const double scale = std::max({p.lambda_so, p.d_es, f.strain_delta, constants::bohr_magneton * 300});
    for (double dev : {max_abs(h_so(p).matrix() - printed::h_so(p)), max_abs(h_ss(p).matrix() - printed::h_ss(p)),
                       max_abs(h_zeeman(p, f).matrix() - printed::h_zeeman(p, f)),
                       max_abs(h_diamagnetic(p, f).matrix() - printed::h_diamagnetic(p, f)),
                       max_abs(h_strain(f).matrix() - printed::h_strain(f))})
      worst = std::max(worst, dev / scale);
  }
  return {worst < 1e-14, fmt("100 draws, worst entry deviation %.2e relative", worst)};
}

Outcome spin_orbit_basis() {
  const Mat u = spin_orbit_basis_matrix();
  const double unitarity = max_abs(u.adjoint() * u - Mat::Identity(6, 6));
  NvParams p;
  Mat t = to_spin_orbit_basis(h_es_total(p, FieldConfig{})).matrix();
  t.diagonal().setZero();
  const double off = max_abs(t);
  return {unitarity < 1e-12 && off <= std::abs(p.delta2) * (1 + 1e-12),
          fmt("unitarity defect %.2e, max off-diagonal %.4g x |Delta2|", unitarity, off / std::abs(p.delta2))};
}

Outcome schrieffer_wolff_scaling() {
  NvParams p;
  FieldConfig f;
  f.b_gauss = {0, 0, 100};
  f.strain_angle = -0.08;
  std::vector<double> deltas;
  for (int k = 0; k < 13; ++k) deltas.push_back(p.lambda_so * 3 * std::pow(10.0, k / 12.0));
  const SwScaling s = sw_scaling(p, f, deltas);
  auto ok = [](double slope) { return std::abs(slope + 2) <= 0.2; };
  return {ok(s.slope_numeric_vs_exact) && ok(s.slope_closed_vs_numeric),
          fmt("slopes: numeric vs exact %.3f, closed vs numeric %.3f, closed vs exact %.3f (target -2 +/- 0.2)",
              s.slope_numeric_vs_exact, s.slope_closed_vs_numeric, s.slope_closed_vs_exact)};
}

Outcome polariton_anchors() {
  const double w0 = from_mhz(70);
  auto [ep, em] = polariton_energies(0, 0.0, w0, 0.0);
  const bool split_ok = ep - em == w0;

  NvParams p;
  OpticalPulse pulse;
  pulse.mode_area = mode_area_for_coupling(p, 0.0, from_khz(10));
  const double n = photons_per_mode(p, pulse);
  const double w = rabi_frequency(p, pulse, n), d = coupling_constant_d(p, pulse);
  double worst = 0;
  for (double r = 10.01; r < 1000; r *= 1.3)
    for (double sgn : {-1.0, 1.0}) {
      const double delta = sgn * r * w;
      worst = std::max(worst, std::abs(accumulated_phase_far_detuned(n, delta, d) /
                                           accumulated_phase_exact(delta, w, pulse.duration) - 1));
    }
  const double per_photon = accumulated_phase_far_detuned(1, from_ghz(1), d);
  return {split_ok && worst < 0.01 && std::abs(per_photon - 1.000e-5) < 0.0005e-5,
          fmt("resonant splitting %s, far-detuned worst %.3f%%, per-photon phase %.4e rad",
              split_ok ? "exact" : "off", 100 * worst, per_photon)};
}

Outcome faraday_stark() {
  NvParams p;
  OpticalPulse pulse;
  pulse.mode_area = mode_area_for_coupling(p, 0.0, from_khz(10));
  const double n = photons_per_mode(p, pulse), d = coupling_constant_d(p, pulse), ws = from_ghz(-3);
  double worst = 0;
  for (double d0 = from_ghz(-20); d0 <= from_ghz(20); d0 += from_ghz(0.37)) {
    if (std::abs(d0) < from_ghz(0.1) || std::abs(d0 - ws) < from_ghz(0.1)) continue;
    const double phi_f = faraday_phase_far_detuned(d, ws, d0);
    // Stark frequency from the two spin levels' accumulated phases
    const double phi_ose = accumulated_phase_far_detuned(n, d0, d) - accumulated_phase_far_detuned(n, d0 - ws, d);
    const double sigma = phi_ose / (constants::two_pi * pulse.duration);
    worst = std::max(worst, std::abs(stark_from_faraday(pulse.power, p.e_ph, phi_f) / sigma - 1));
  }
  const double f0 = from_hz(6.9e-6 * 1e9), g0 = from_mhz(140);
  const double peak = lorentzian_phase(f0, g0, g0);
  return {worst < 1e-12 && std::abs(peak / 24.64e-6 - 1) < 1e-3,
          fmt("Stark/Faraday identity worst %.2e relative, odd-Lorentzian peak %.4f urad", worst, peak * 1e6)};
}

Outcome lindblad_validity() {
  std::mt19937 rng(606);
  double trace = 0, herm = 0, min_eig = 1;
  int worst_rank = 24;
  for (int i = 0; i < 10000; ++i) {
    LambdaModel m;
    m.delta_l = from_ghz(uniform(rng, -2, 2));
    m.delta_e = from_mhz(uniform(rng, 50, 300));
    m.omega = from_mhz(uniform(rng, 0, 300));
    m.theta = uniform(rng, 0, constants::pi);
    m.phi = uniform(rng, -constants::pi, constants::pi);
    m.epsilon_s = from_ghz(uniform(rng, -5, 5));
    m.rates.gamma_rad = uniform(rng, 0.5, 2) / 13e-9;
    m.rates.gamma_isc = uniform(rng, 0, 3e7);
    m.rates.gamma_isc_rev = uniform(rng, 1e6, 1e7);
    m.rates.isc_rev_to_zero = uniform(rng, 0, 1);
    m.rates.gamma_1 = uniform(rng, 1e2, 1e5);
    m.rates.gamma_phi = uniform(rng, 1e4, 1e7);
    Mat a(5, 5);
    for (Eigen::Index r = 0; r < 5; ++r)
      for (Eigen::Index c = 0; c < 5; ++c) a(r, c) = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
    Mat rho = a * a.adjoint();
    rho /= rho.trace();
    const double t = std::pow(10.0, uniform(rng, -10, -5));
    const auto defects = evolve(m, DensityMatrix(OperatorMatrix(rho, lambda_labels())), {t})[0].defects();
    trace = std::max(trace, defects.trace);
    herm = std::max(herm, defects.hermiticity);
    min_eig = std::min(min_eig, defects.min_eigenvalue);
    if (i % 100 == 0) {
      const int rank = numerical_rank(build_superoperator(m).matrix());
      if (rank != 24) worst_rank = rank;
    }
  }
  return {trace < 1e-10 && herm < 1e-10 && min_eig >= -1e-9 && worst_rank == 24,
          fmt("10^4 evolutions: trace %.2e, hermiticity %.2e, min eigenvalue %.2e; rank %d", trace, herm, min_eig,
              worst_rank)};
}

Outcome dark_state_physics() {
  double worst_fid = 1, worst_res = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      LambdaModel m;
      m.omega = from_mhz(50);
      m.delta_e = from_mhz(180);
      m.theta = 0.2 + (constants::pi - 0.4) * i / 4;
      m.phi = -constants::pi + constants::two_pi * (j + 0.5) / 5;
      m.excited = ExcitedLevels::R;
      m.include_singlet = false;
      const Vec dark = dark_state(m.theta, m.phi, ExcitedLevels::R);
      worst_fid = std::min(worst_fid, fidelity(steady_state(m), dark));
      const Mat w = build_superoperator(m).matrix();
      Vec d = Vec::Zero(3);
      d.head(2) = dark;
      worst_res = std::max(worst_res, (w * vectorize(d * d.adjoint())).norm() / w.norm());
    }
  return {worst_fid >= 0.999 && worst_res < 1e-10,
          fmt("5x5 grid: worst fidelity %.8f, worst stationarity residual %.2e x |W|", worst_fid, worst_res)};
}

Outcome competing_lambda() {
  LambdaModel m;
  m.omega = from_mhz(50);
  m.delta_l = from_ghz(1);
  m.delta_e = from_mhz(180);
  m.theta = constants::pi / 2;
  m.include_singlet = false;
  const double period = constants::two_pi / raman_frequency(m.delta_l, m.omega);
  Vec start(2);
  start << 0, 1;
  m.excited = ExcitedLevels::R;
  const double single = bloch_vector(evolve(m, ground_density(m, start), {period})[0]).norm();
  m.excited = ExcitedLevels::Both;
  const double both = bloch_vector(evolve(m, ground_density(m, start), {period})[0]).norm();
  return {both < single, fmt("Bloch norm after one Raman period: single %.6f, both %.6f", single, both)};
}

Outcome ultrafast_anchors() {
  const double t_pi = pi_rotation_time(from_mhz(260));
  std::mt19937 rng(909);
  double unitarity = 0;
  for (int i = 0; i < 1000; ++i) {
    PulseSpec ps{uniform(rng, -4, 4), uniform(rng, -0.78, 0.78), uniform(rng, 0, 7), uniform(rng, -4, 4)};
    for (auto kind : {PulseKind::FP1, PulseKind::FP2}) {
      const Mat u = pulse_unitary(ps, kind).matrix();
      unitarity = std::max(unitarity, max_abs(u.adjoint() * u - Mat::Identity(3, 3)));
    }
  }
  double worst = 0;
  Vec psi0(2);
  psi0 << 1 / std::sqrt(2.0), cplx(0, 1 / std::sqrt(2.0));
  for (double eta : {0.1, 0.5, 1.0, constants::pi / 2})
    for (double w : {from_mhz(50), from_mhz(260)}) {
      EffectiveFourLevel e{from_mhz(10), w, eta, 0.0};
      const double span = 1.3 * constants::two_pi / w;
      std::vector<double> times;
      for (int k = 0; k < 40; ++k) times.push_back(span * k / 39);
      const PrecessionFit fit = extract_precession(tdqt_scan(e, times, psi0));
      worst = std::max({worst, std::abs(fit.omega_es / w - 1), std::abs(fit.eta / eta - 1)});
    }
  return {std::abs(t_pi / 1.923e-9 - 1) < 0.02 && unitarity < 1e-12 && worst < 0.005,
          fmt("pi time %.4f ns, pulse unitarity defect %.2e, round-trip worst %.2e relative", t_pi * 1e9, unitarity,
              worst)};
}

Outcome anticrossing_scenario() {
  const fs::path out = scratch("levels");
  const auto m = scenario::run(std::string(NVSIM_SCENARIO_DIR) + "/levels.yaml", out.string());
  fs::remove_all(out);
  const double at = m.summary.at("anticrossing_gauss").get<double>();
  const double ratio = m.summary.at("gap_over_delta2").get<double>();
  return {at >= 80 && at <= 140 && std::abs(ratio - 1) <= 0.25,
          fmt("minimum lower-branch gap at %.1f G, gap/Delta2 = %.3f", at, ratio)};
}

Outcome determinism() {
  std::vector<std::string> configs;
  for (const auto& e : fs::directory_iterator(NVSIM_SCENARIO_DIR))
    if (e.path().extension() == ".yaml") configs.push_back(e.path().string());
  std::sort(configs.begin(), configs.end());
  int files = 0, mismatched = 0;
  for (const auto& c : configs) {
    const fs::path a = scratch("a"), b = scratch("b");
    const auto ma = scenario::run(c, a.string()), mb = scenario::run(c, b.string());
    if (ma.outputs.size() != mb.outputs.size()) ++mismatched;
    for (size_t i = 0; i < std::min(ma.outputs.size(), mb.outputs.size()); ++i, ++files)
      if (slurp(ma.outputs[i]) != slurp(mb.outputs[i])) ++mismatched;
    fs::remove_all(a);
    fs::remove_all(b);
  }
  return {!configs.empty() && mismatched == 0,
          fmt("%zu configs run twice, %d data files compared, %d differ", configs.size(), files, mismatched)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Hamiltonian golden matrices", 1, hamiltonian_golden},
      {2, "spin-orbit basis", 1, spin_orbit_basis},
      {3, "Schrieffer-Wolff error scaling", 5, schrieffer_wolff_scaling},
      {4, "polariton anchors", 1, polariton_anchors},
      {5, "Faraday/Stark consistency", 1, faraday_stark},
      {6, "Lindblad validity", 60, lindblad_validity},
      {7, "dark-state steady states", 5, dark_state_physics},
      {8, "competing Lambda systems", 5, competing_lambda},
      {9, "ultrafast anchors", 5, ultrafast_anchors},
      {10, "anticrossing scenario", 5, anticrossing_scenario},
      {11, "determinism", 10, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s  %s: %s [%.3f s of %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), dt, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
