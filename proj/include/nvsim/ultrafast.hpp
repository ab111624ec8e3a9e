#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "nvsim/effective_branch.hpp"
#include "nvsim/lindblad.hpp"

// Ultrafast pulse-pair control. Pulses are instantaneous unitaries on the
// orbital degree of freedom; the spin only evolves between them.
namespace nvsim {

inline std::vector<std::string> orbital_labels() { return {"G", "X", "Y"}; }

// {G, X, Y} basis. The excited pair splits by delta here (off-diagonals
// delta/2), half the 2*delta splitting of the fine-structure Hamiltonian.
inline OperatorMatrix orbital_hamiltonian(double f0, double delta, double alpha_s) {
  Mat h = Mat::Zero(3, 3);
  h(1, 1) = f0 - 0.5 * delta * std::cos(alpha_s);
  h(2, 2) = f0 + 0.5 * delta * std::cos(alpha_s);
  h(1, 2) = h(2, 1) = 0.5 * delta * std::sin(alpha_s);
  return OperatorMatrix(h, orbital_labels());
}

struct PulseSpec {
  double alpha_e = 0.0;
  double beta_e = 0.0;
  double theta = constants::pi;
  double phi = 0.0;

  void validate() const {
    if (!(std::abs(beta_e) <= constants::pi / 4 + 1e-15))
      throw ModelError(Errc::OutOfRange, "ellipticity beta_e must lie in [-pi/4, pi/4]");
  }
};

inline Vec pulse_polarization(double alpha_e, double beta_e) {
  PulseSpec{alpha_e, beta_e, 0, 0}.validate();
  const double ca = std::cos(alpha_e), sa = std::sin(alpha_e), cb = std::cos(beta_e), sb = std::sin(beta_e);
  Vec e(2);
  e(0) = cplx(ca * cb, -sa * sb);
  e(1) = cplx(sa * cb, ca * sb);
  return e;
}

// (|E>, |E'>) in the {G, X, Y} basis: the excited orbital the pulse couples
// to and the one it leaves alone.
inline std::pair<Vec, Vec> coupled_states(const Vec& pol) {
  if (pol.size() != 2 || std::abs(pol.norm() - 1.0) > 1e-12)
    throw ModelError(Errc::InvalidArgument, "polarisation must be a unit 2-vector");
  Vec e(3), ep(3);
  e << 0, -pol(1), pol(0);
  ep << 0, std::conj(pol(0)), std::conj(pol(1));
  return {e, ep};
}

enum class PulseKind { FP1, FP2 };

inline OperatorMatrix pulse_unitary(const PulseSpec& ps, PulseKind kind) {
  ps.validate();
  const auto [e, ep] = coupled_states(pulse_polarization(ps.alpha_e, ps.beta_e));
  Vec g = Vec::Zero(3);
  g(0) = 1.0;
  const double c = std::cos(ps.theta / 2), s = std::sin(ps.theta / 2);
  const cplx ph = kind == PulseKind::FP2 ? std::exp(I_ * ps.phi) : cplx(1.0);
  Mat u = ep * ep.adjoint() + c * (e * e.adjoint() + g * g.adjoint()) +
          s * (ph * e * g.adjoint() - std::conj(ph) * g * e.adjoint());
  return OperatorMatrix(u, orbital_labels());
}

// The same rotation restricted to {|G>, |E>}.
inline Mat pulse_rotation(double theta, double phi) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat u(2, 2);
  u << c, -s * std::exp(-I_ * phi), s * std::exp(I_ * phi), c;
  return u;
}

struct EffectiveFourLevel {
  double omega_gs = 0.0;
  double omega_es = 0.0;
  double eta = 0.0;
  double omega_opt = 0.0;

  void validate() const {
    if (!(omega_es >= 0)) throw ModelError(Errc::InvalidArgument, "omega_es must be >= 0");
    if (!(eta >= 0 && eta <= constants::pi)) throw ModelError(Errc::InvalidArgument, "eta must lie in [0, pi]");
  }
};

inline std::vector<std::string> four_level_labels() { return {"G,0", "G,+1", "L,0", "L,+1"}; }

namespace detail {
// Spin-1/2 Paulis on (|0>, |+1>) with s_z|0> = +|0>.
inline Mat half_x() { return (Mat(2, 2) << 0, 1, 1, 0).finished(); }
inline Mat half_z() { return (Mat(2, 2) << 1, 0, 0, -1).finished(); }
}  // namespace detail

inline Mat excited_spin_hamiltonian(const EffectiveFourLevel& e) {
  return 0.5 * e.omega_es * (std::sin(e.eta) * detail::half_x() + std::cos(e.eta) * detail::half_z());
}

inline OperatorMatrix effective_hamiltonian_4level(const EffectiveFourLevel& e) {
  e.validate();
  Mat h = Mat::Zero(4, 4);
  h.block(0, 0, 2, 2) = 0.5 * e.omega_gs * detail::half_z();
  h.block(2, 2, 2, 2) = excited_spin_hamiltonian(e) + e.omega_opt * Mat::Identity(2, 2);
  return OperatorMatrix(h, four_level_labels());
}

// Drops the global phase: the first entry above 1e-12 in column-major order
// is made real and non-negative.
inline Mat fix_global_phase(const Mat& u) {
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const cplx z = u(k % u.rows(), k / u.rows());
    if (std::abs(z) > 1e-12) return u * (std::abs(z) / z);
  }
  return u;
}

// Ground-qubit map of pulse(theta) - free evolution t - pulse(theta). For
// theta = pi it is unitary; the global phase is fixed by fix_global_phase.
inline OperatorMatrix pulse_pair_spin_map(const EffectiveFourLevel& e, double t, double theta = constants::pi) {
  if (!(t >= 0)) throw ModelError(Errc::InvalidArgument, "delay must be >= 0");
  const Mat h = effective_hamiltonian_4level(e).matrix();
  const Mat pulse = kron(pulse_rotation(theta, 0.0), Mat::Identity(2, 2));
  const Mat u = pulse * expm(Mat(-I_ * h * t)) * pulse;
  return OperatorMatrix(fix_global_phase(u.block(0, 0, 2, 2)), {"0", "+1"});
}

inline double pi_rotation_time(double omega_es) {
  if (!(omega_es > 0)) throw ModelError(Errc::InvalidArgument, "omega_es must be > 0");
  return constants::pi / omega_es;
}

// (omega, eta) of a 2x2 spin Hamiltonian on (|0>, |+1>), read as
// a + (omega/2) n.sigma with eta the polar angle of n.
inline std::pair<double, double> precession_parameters(const Mat& h2) {
  const double nz = 0.5 * (h2(0, 0) - h2(1, 1)).real();
  const double nx = h2(0, 1).real(), ny = -h2(0, 1).imag();
  const double half = std::sqrt(nx * nx + ny * ny + nz * nz);
  return {2 * half, std::atan2(std::hypot(nx, ny), nz)};
}

struct TdqtDissipation {
  double gamma_rad = 0.0;  // |G,m> <- |L,m>, spin conserving
  double gamma_phi = 0.0;  // dephasing through |L,0><L,0|

  bool any() const { return gamma_rad > 0 || gamma_phi > 0; }
  void validate() const {
    if (!(gamma_rad >= 0 && gamma_phi >= 0)) throw ModelError(Errc::InvalidArgument, "rates must be >= 0");
  }
};

struct TdqtPoint {
  double t = 0.0;
  BlochVector b;
  double ground_population = 0.0;
};

namespace detail {

// Orbital {G, L} x spin of dimension ns. zero/plus locate |0>, |+1> in the spin basis.
inline std::vector<TdqtPoint> tdqt_core(const Mat& h, Eigen::Index ns, Eigen::Index zero, Eigen::Index plus,
                                        double theta, double phi, const std::vector<double>& times,
                                        const Vec& psi0, const TdqtDissipation& diss) {
  diss.validate();
  if (psi0.size() != 2 || std::abs(psi0.norm() - 1.0) > 1e-10)
    throw ModelError(Errc::InvalidArgument, "initial spin state must be a unit vector on (|0>, |+1>)");
  for (size_t k = 1; k < times.size(); ++k)
    if (times[k] < times[k - 1]) throw ModelError(Errc::InvalidArgument, "delay grid must be sorted");
  if (!times.empty() && times.front() < 0) throw ModelError(Errc::InvalidArgument, "negative delay");

  const Eigen::Index n = 2 * ns;
  Vec psi = Vec::Zero(n);
  psi(zero) = psi0(0);
  psi(plus) = psi0(1);
  const Mat id = Mat::Identity(ns, ns);
  const Mat u1 = kron(pulse_rotation(theta, 0.0), id), u2 = kron(pulse_rotation(theta, phi), id);
  const Mat rho1 = u1 * psi * psi.adjoint() * u1.adjoint();

  std::vector<Jump> jumps;
  for (Eigen::Index m = 0; m < ns && diss.gamma_rad > 0; ++m) {
    Mat op = Mat::Zero(n, n);
    op(m, ns + m) = 1.0;
    jumps.push_back({op, diss.gamma_rad});
  }
  if (diss.gamma_phi > 0) {
    Mat op = Mat::Zero(n, n);
    op(ns + zero, ns + zero) = 1.0;
    jumps.push_back({op, diss.gamma_phi});
  }
  const Mat w = diss.any() ? lindblad_superoperator(h, jumps) : Mat();

  std::vector<TdqtPoint> out;
  out.reserve(times.size());
  for (double t : times) {
    Mat rho;
    if (diss.any()) {
      rho = unvectorize(expm(Mat(w * t)) * vectorize(rho1), n);
    } else {
      const Mat u = expm(Mat(-I_ * h * t));
      rho = u * rho1 * u.adjoint();
    }
    rho = u2 * rho * u2.adjoint();
    TdqtPoint p;
    p.t = t;
    p.b = bloch_from_block(rho, zero, plus);
    p.ground_population = rho.block(0, 0, ns, ns).trace().real();
    out.push_back(p);
  }
  return out;
}

}  // namespace detail

// Pulse pair with area theta (the second carrying relative phase phi) around
// a delay t, starting from the ground spin state psi0 on (|0>, |+1>).
inline std::vector<TdqtPoint> tdqt_scan(const EffectiveFourLevel& e, const std::vector<double>& times, const Vec& psi0,
                                        double theta = constants::pi, double phi = 0.0,
                                        const TdqtDissipation& diss = {}) {
  return detail::tdqt_core(effective_hamiltonian_4level(e).matrix(), 2, 0, 1, theta, phi, times, psi0, diss);
}

// Lower-branch spin Hamiltonian (3x3 on |-1>, |0>, |+1>) including the
// common shift, from the numeric second-order reduction.
inline Mat lower_branch_block(const NvParams& p, const FieldConfig& f) {
  const BranchHamiltonians b = h_eff_numeric(p, f);
  return b.lower.matrix() + b.common_shift.matrix().block(0, 0, 3, 3);
}

// Same experiment with {G, L} x {-1, 0, +1}: ground spin from h_gs and the
// excited spin from the lower branch, offset by omega_opt.
inline std::vector<TdqtPoint> tdqt_scan_branch(const NvParams& p, const FieldConfig& f,
                                               const std::vector<double>& times, const Vec& psi0,
                                               double theta = constants::pi, double phi = 0.0,
                                               const TdqtDissipation& diss = {}, double omega_opt = 0.0) {
  Mat h = Mat::Zero(6, 6);
  h.block(0, 0, 3, 3) = h_gs(p, f).matrix();
  h.block(3, 3, 3, 3) = lower_branch_block(p, f) + omega_opt * Mat::Identity(3, 3);
  return detail::tdqt_core(h, 3, 1, 2, theta, phi, times, psi0, diss);
}

// Effective (omega_es, eta) implied by the lower branch's {|0>, |+1>} block.
inline std::pair<double, double> branch_precession_parameters(const NvParams& p, const FieldConfig& f) {
  return precession_parameters(Mat(lower_branch_block(p, f).block(1, 1, 2, 2)));
}

struct PrecessionFit {
  double omega_es = 0.0;
  double eta = 0.0;
  double residual = 0.0;  // rms distance of the points from the fitted circle
  BlochVector axis;
};

// Plane fit (SVD of the centred points) for the axis, algebraic circle fit in
// that plane, then a linear fit of the unwrapped angle against time.
inline PrecessionFit extract_precession(const std::vector<TdqtPoint>& traj) {
  const size_t n = traj.size();
  if (n < 8) throw ModelError(Errc::InsufficientSpan, "need at least 8 trajectory points");
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), 3);
  for (size_t k = 0; k < n; ++k) pts.row(static_cast<Eigen::Index>(k)) << traj[k].b.bx, traj[k].b.by, traj[k].b.bz;
  const Eigen::RowVector3d mean = pts.colwise().mean();
  const Eigen::MatrixXd centred = pts.rowwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (sv(0) < 1e-9 * std::sqrt(static_cast<double>(n)))
    throw ModelError(Errc::InsufficientSpan, "trajectory does not move");
  if (sv(1) < 1e-6 * sv(0)) throw ModelError(Errc::FitDidNotConverge, "trajectory is a line, not a circle");
  const Eigen::Vector3d e1 = svd.matrixV().col(0), e2 = svd.matrixV().col(1);
  Eigen::Vector3d axis = svd.matrixV().col(2);

  // circle x^2 + y^2 = 2 a x + 2 b y + c in plane coordinates
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k) {
    const double x = centred.row(k).dot(e1), y = centred.row(k).dot(e2);
    a.row(k) << 2 * x, 2 * y, 1.0;
    rhs(k) = x * x + y * y;
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(rhs);
  const double cx = sol(0), cy = sol(1), radius = std::sqrt(sol(2) + cx * cx + cy * cy);
  if (!std::isfinite(radius) || radius < 1e-9) throw ModelError(Errc::FitDidNotConverge, "circle fit failed");

  std::vector<double> angle(n);
  double sq = 0;
  for (size_t k = 0; k < n; ++k) {
    const Eigen::Index r = static_cast<Eigen::Index>(k);
    const double x = centred.row(r).dot(e1) - cx, y = centred.row(r).dot(e2) - cy, z = centred.row(r).dot(axis);
    const double d = std::hypot(x, y) - radius;
    sq += d * d + z * z;
    angle[k] = std::atan2(y, x);
    if (k > 0) {
      while (angle[k] - angle[k - 1] > constants::pi) angle[k] -= constants::two_pi;
      while (angle[k] - angle[k - 1] < -constants::pi) angle[k] += constants::two_pi;
    }
  }
  const double residual = std::sqrt(sq / static_cast<double>(n));
  if (residual > 0.1 * radius) throw ModelError(Errc::FitDidNotConverge, "points do not lie on a circle");
  if (std::abs(angle.back() - angle.front()) < constants::two_pi * (1 - 1e-9))
    throw ModelError(Errc::InsufficientSpan, "trajectory covers less than one precession period");

  std::vector<double> t(n);
  for (size_t k = 0; k < n; ++k) t[k] = traj[k].t;
  double tm = 0, am = 0;
  for (size_t k = 0; k < n; ++k) {
    tm += t[k] / static_cast<double>(n);
    am += angle[k] / static_cast<double>(n);
  }
  double num = 0, den = 0;
  for (size_t k = 0; k < n; ++k) {
    num += (t[k] - tm) * (angle[k] - am);
    den += (t[k] - tm) * (t[k] - tm);
  }
  if (!(den > 0)) throw ModelError(Errc::InsufficientSpan, "all points share one time");
  double rate = num / den;
  // e1 x e2 = axis orients the angle; flip so the precession rate is positive
  if (e1.cross(e2).dot(axis) < 0) rate = -rate;
  if (rate < 0) {
    axis = -axis;
    rate = -rate;
  }
  PrecessionFit fit;
  fit.omega_es = rate;
  fit.eta = std::acos(std::clamp(axis(2), -1.0, 1.0));
  fit.residual = residual;
  fit.axis = {axis(0), axis(1), axis(2)};
  return fit;
}

}  // namespace nvsim
