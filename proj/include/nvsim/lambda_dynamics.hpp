#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nvsim/lindblad.hpp"
#include "nvsim/units.hpp"

// Five-level Lambda system {|+1_g>, |0_g>, |R_e>, |L_e>, |S>} driven in the
// rotating frame. Either excited level and the singlet can be dropped, in
// which case the density matrix lives on the retained levels only.
namespace nvsim {

enum class ExcitedLevels { R, L, Both };

struct RateTable {
  double gamma_rad = 1.0 / 13e-9;  // each excited level -> each ground level
  double gamma_isc = 0.0;          // each excited level -> singlet
  double gamma_isc_rev = 0.0;      // singlet -> ground, total
  double isc_rev_to_zero = 0.5;    // fraction of gamma_isc_rev landing in |0_g>
  double gamma_1 = 0.0;            // ground relaxation, split Gamma_1/2 each way
  double gamma_phi = 0.0;          // pure dephasing through |0_g><0_g|

  void validate() const {
    if (!(gamma_rad >= 0 && gamma_isc >= 0 && gamma_isc_rev >= 0 && gamma_1 >= 0 && gamma_phi >= 0))
      throw ModelError(Errc::InvalidArgument, "rates must be >= 0");
    if (!(isc_rev_to_zero >= 0 && isc_rev_to_zero <= 1))
      throw ModelError(Errc::InvalidArgument, "inverse ISC branching must lie in [0, 1]");
  }
};

struct LambdaModel {
  double delta_l = 0.0;
  double delta_e = 0.0;
  double omega = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double epsilon_s = 0.0;
  double two_photon_detuning = 0.0;  // added to the |+1_g> diagonal
  RateTable rates;
  ExcitedLevels excited = ExcitedLevels::Both;
  bool include_singlet = true;

  void validate() const {
    if (!(omega >= 0)) throw ModelError(Errc::InvalidArgument, "Rabi frequency must be >= 0");
    if (!(theta >= 0 && theta <= constants::pi)) throw ModelError(Errc::InvalidArgument, "theta must lie in [0, pi]");
    rates.validate();
    if (!include_singlet && (rates.gamma_isc > 0 || rates.gamma_isc_rev > 0))
      throw ModelError(Errc::InvalidArgument, "ISC rates need the singlet level");
  }
};

namespace level {
inline constexpr int plus_one = 0, zero = 1, r = 2, l = 3, singlet = 4;
}

inline std::vector<std::string> lambda_labels() { return {"+1g", "0g", "Re", "Le", "S"}; }

inline std::vector<int> retained_levels(const LambdaModel& m) {
  std::vector<int> keep{level::plus_one, level::zero};
  if (m.excited != ExcitedLevels::L) keep.push_back(level::r);
  if (m.excited != ExcitedLevels::R) keep.push_back(level::l);
  if (m.include_singlet) keep.push_back(level::singlet);
  return keep;
}

inline OperatorMatrix build_hcpt(const LambdaModel& m) {
  m.validate();
  const double c = m.omega * std::cos(m.theta / 2), s = m.omega * std::sin(m.theta / 2);
  const cplx e = std::exp(I_ * m.phi);
  Mat h = Mat::Zero(5, 5);
  h(0, 0) = m.delta_l + m.two_photon_detuning;
  h(1, 1) = m.delta_l;
  h(3, 3) = -m.delta_e;
  h(4, 4) = m.epsilon_s;
  h(0, 2) = c;
  h(0, 3) = c;
  h(1, 2) = s * e;
  h(1, 3) = -s * e;
  h(2, 0) = c;
  h(3, 0) = c;
  h(2, 1) = s * std::conj(e);
  h(3, 1) = -s * std::conj(e);
  return OperatorMatrix(h, lambda_labels());
}

namespace detail {

inline Mat restrict_to(const Mat& full, const std::vector<int>& keep) {
  const Eigen::Index n = static_cast<Eigen::Index>(keep.size());
  Mat out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = full(keep[static_cast<size_t>(i)], keep[static_cast<size_t>(j)]);
  return out;
}

// Index of a full-model level inside the retained list, or -1.
inline Eigen::Index position(const std::vector<int>& keep, int lvl) {
  for (size_t i = 0; i < keep.size(); ++i)
    if (keep[i] == lvl) return static_cast<Eigen::Index>(i);
  return -1;
}

inline std::vector<std::string> retained_labels(const std::vector<int>& keep) {
  std::vector<std::string> out;
  const auto all = lambda_labels();
  for (int k : keep) out.push_back(all[static_cast<size_t>(k)]);
  return out;
}

}  // namespace detail

inline OperatorMatrix reduced_hamiltonian(const LambdaModel& m) {
  const auto keep = retained_levels(m);
  return OperatorMatrix(detail::restrict_to(build_hcpt(m).matrix(), keep), detail::retained_labels(keep));
}

// Jumps |to><from| at the table's rates, on the retained levels.
inline std::vector<Jump> jump_operators(const LambdaModel& m) {
  m.validate();
  const auto keep = retained_levels(m);
  const Eigen::Index n = static_cast<Eigen::Index>(keep.size());
  std::vector<Jump> jumps;
  auto add = [&](int from, int to, double rate) {
    const Eigen::Index a = detail::position(keep, from), b = detail::position(keep, to);
    if (a < 0 || b < 0 || rate == 0) return;
    Mat op = Mat::Zero(n, n);
    op(b, a) = 1.0;
    jumps.push_back({op, rate});
  };
  const RateTable& r = m.rates;
  for (int e : {level::r, level::l}) {
    add(e, level::zero, r.gamma_rad);
    add(e, level::plus_one, r.gamma_rad);
    add(e, level::singlet, r.gamma_isc);
  }
  add(level::singlet, level::zero, r.gamma_isc_rev * r.isc_rev_to_zero);
  add(level::singlet, level::plus_one, r.gamma_isc_rev * (1 - r.isc_rev_to_zero));
  add(level::plus_one, level::zero, r.gamma_1 / 2);
  add(level::zero, level::plus_one, r.gamma_1 / 2);
  add(level::zero, level::zero, r.gamma_phi);
  return jumps;
}

inline OperatorMatrix build_superoperator(const LambdaModel& m) {
  const OperatorMatrix h = reduced_hamiltonian(m);
  std::vector<std::string> labels;
  for (const auto& col : h.labels())
    for (const auto& row : h.labels()) labels.push_back(row + "|" + col);
  return OperatorMatrix(lindblad_superoperator(h.matrix(), jump_operators(m)), labels);
}

// Density matrix on the retained levels from a ground-qubit state given in
// the ordering (|+1_g>, |0_g>).
inline DensityMatrix ground_density(const LambdaModel& m, const Vec& ground) {
  const auto keep = retained_levels(m);
  Vec psi = Vec::Zero(static_cast<Eigen::Index>(keep.size()));
  psi(0) = ground(0);
  psi(1) = ground(1);
  return DensityMatrix::pure(psi, detail::retained_labels(keep));
}

inline std::vector<DensityMatrix> evolve(const LambdaModel& m, const DensityMatrix& rho0,
                                         const std::vector<double>& times) {
  rho0.validate();
  const OperatorMatrix w = build_superoperator(m);
  const Eigen::Index n = rho0.dim();
  if (n * n != w.dim()) throw ModelError(Errc::InvalidState, "initial state does not match the retained levels");
  const Vec v0 = vectorize(rho0.matrix());
  const auto labels = rho0.op().labels();
  for (double t : times)
    if (t < 0) throw ModelError(Errc::InvalidArgument, "negative evolution time");

  bool uniform = times.size() > 2;
  const double dt = uniform ? times[1] - times[0] : 0.0;
  for (size_t k = 1; uniform && k < times.size(); ++k)
    uniform = std::abs((times[k] - times[k - 1]) - dt) <= 1e-9 * std::abs(dt) && dt > 0;

  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  if (uniform) {
    const Mat step = expm(Mat(w.matrix() * dt));
    Vec v = expm(Mat(w.matrix() * times[0])) * v0;
    for (size_t k = 0; k < times.size(); ++k) {
      if (k > 0) v = step * v;
      out.emplace_back(OperatorMatrix(unvectorize(v, n), labels));
    }
  } else {
    for (double t : times) out.emplace_back(OperatorMatrix(unvectorize(expm(Mat(w.matrix() * t)) * v0, n), labels));
  }
  return out;
}

inline DensityMatrix steady_state(const LambdaModel& m) {
  const OperatorMatrix h = reduced_hamiltonian(m);
  const Mat w = lindblad_superoperator(h.matrix(), jump_operators(m));
  return DensityMatrix(OperatorMatrix(stationary_state(w, h.dim()), h.labels()));
}

// State of the ground qubit, in the ordering (|+1_g>, |0_g>), that the given
// excited level does not couple to under build_hcpt.
inline Vec dark_state(double theta, double phi, ExcitedLevels branch) {
  if (branch == ExcitedLevels::Both) throw ModelError(Errc::InvalidArgument, "dark state needs a single branch");
  const double sign = branch == ExcitedLevels::R ? -1.0 : 1.0;
  Vec d(2);
  d(0) = sign * std::exp(-I_ * phi) * std::sin(theta / 2);
  d(1) = std::cos(theta / 2);
  return d;
}

// Raman (ground-state) precession frequency of one Lambda system: the light
// shift of the bright state for coupling omega at detuning delta_l.
inline double raman_frequency(double delta_l, double omega) {
  return std::hypot(delta_l / 2, omega) - std::abs(delta_l) / 2;
}

namespace detail {
inline std::pair<Eigen::Index, Eigen::Index> ground_indices(const DensityMatrix& rho) {
  Eigen::Index p = -1, z = -1;
  const auto& labels = rho.op().labels();
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == "+1g") p = static_cast<Eigen::Index>(i);
    if (labels[i] == "0g") z = static_cast<Eigen::Index>(i);
  }
  if (p < 0 || z < 0) throw ModelError(Errc::InvalidState, "density matrix has no ground qubit labels");
  return {p, z};
}
}  // namespace detail

// b_i = Tr(sigma_i rho) with sigma_z = |0_g><0_g| - |+1_g><+1_g|.
inline BlochVector bloch_vector(const DensityMatrix& rho) {
  const auto [p, z] = detail::ground_indices(rho);
  return bloch_from_block(rho.matrix(), z, p);
}

// <D|rho|D> for a ground-qubit target in the ordering (|+1_g>, |0_g>).
inline double fidelity(const DensityMatrix& rho, const Vec& target) {
  if (target.size() != 2) throw ModelError(Errc::InvalidArgument, "fidelity target must be a ground-qubit state");
  if (std::abs(target.norm() - 1.0) > 1e-10) throw ModelError(Errc::InvalidArgument, "fidelity target not normalised");
  const auto [p, z] = detail::ground_indices(rho);
  const Mat& r = rho.matrix();
  const cplx f = std::conj(target(0)) * (r(p, p) * target(0) + r(p, z) * target(1)) +
                 std::conj(target(1)) * (r(z, p) * target(0) + r(z, z) * target(1));
  return f.real();
}

inline double excited_population(const DensityMatrix& rho) {
  double pop = 0;
  const auto& labels = rho.op().labels();
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == "Re" || labels[i] == "Le") pop += rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  return pop;
}

inline double singlet_population(const DensityMatrix& rho) {
  const auto& labels = rho.op().labels();
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == "S") return rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  return 0.0;
}

}  // namespace nvsim
