#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nvsim/numerics.hpp"
#include "nvsim/units.hpp"

namespace nvsim {

// Frequencies in rad/s, rates in 1/s, e_ph in joules.
// D_gs, D_es, Delta1 and the g-factors are placeholders, not measured values
// from the model's source; override them in configs. Delta1 and Delta2 are
// signed reduced matrix elements.
struct NvParams {
  double lambda_so = from_ghz(5.33);
  double d_es = from_ghz(1.5);
  double delta1 = from_ghz(-0.9);
  double delta2 = from_mhz(150.0);
  double d_gs = from_ghz(2.87);
  double g_gs = 2.0028;
  double g_es_par = 2.01;
  double g_es_perp = 2.01;
  double l_z = 0.05;
  double gamma_r = 1.0 / 13e-9;
  double e_ph = ev_to_joules(1.945);
  double n_diamond = 2.4;
  double f_dw = 0.04;

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    for (double v : {lambda_so, d_es, delta1, delta2, d_gs, g_gs, g_es_par, g_es_perp, l_z, gamma_r, e_ph,
                     n_diamond, f_dw})
      if (!finite(v)) throw ModelError(Errc::InvalidArgument, "non-finite NV parameter");
    if (lambda_so < 0 || d_es < 0 || d_gs < 0 || gamma_r < 0 || e_ph < 0)
      throw ModelError(Errc::InvalidArgument, "lambda_so, d_es, d_gs, gamma_r and e_ph must be >= 0");
    if (!(f_dw > 0 && f_dw <= 1)) throw ModelError(Errc::InvalidArgument, "f_dw must lie in (0, 1]");
    if (n_diamond < 1) throw ModelError(Errc::InvalidArgument, "n_diamond must be >= 1");
  }
};

struct FieldConfig {
  std::array<double, 3> b_gauss{0.0, 0.0, 0.0};
  double strain_delta = 0.0;  // half the orbital branch splitting, rad/s
  double strain_angle = 0.0;  // radians

  void validate() const {
    for (double b : b_gauss)
      if (!std::isfinite(b)) throw ModelError(Errc::InvalidArgument, "non-finite magnetic field");
    if (!(strain_delta >= 0)) throw ModelError(Errc::InvalidArgument, "strain_delta must be >= 0");
    if (!(std::abs(strain_angle) <= constants::pi))
      throw ModelError(Errc::InvalidArgument, "strain_angle must lie in [-pi, pi]");
  }
};

inline const std::vector<std::string>& spin_labels() {
  static const std::vector<std::string> l{"-1", "0", "+1"};
  return l;
}

inline const std::vector<std::string>& product_labels() {
  static const std::vector<std::string> l{"X,-1", "X,0", "X,+1", "Y,-1", "Y,0", "Y,+1"};
  return l;
}

inline const std::vector<std::string>& spin_orbit_labels() {
  static const std::vector<std::string> l{"A1", "A2", "E1", "E2", "Ex", "Ey"};
  return l;
}

namespace detail {

inline Mat on_orbital(const Mat& orb) { return kron(orb, Mat::Identity(3, 3)); }
inline Mat on_spin(const Mat& spin) { return kron(Mat::Identity(2, 2), spin); }
inline OperatorMatrix product(Mat m) { return OperatorMatrix(std::move(m), product_labels()); }

}  // namespace detail

inline OperatorMatrix h_gs(const NvParams& p, const FieldConfig& f) {
  const auto s = spin_one();
  const Mat sz = s.sz.matrix();
  const auto& b = f.b_gauss;
  Mat h = p.d_gs * (sz * sz - (2.0 / 3.0) * Mat::Identity(3, 3)) +
          p.g_gs * constants::bohr_magneton * (b[0] * s.sx.matrix() + b[1] * s.sy.matrix() + b[2] * sz);
  return OperatorMatrix(h, spin_labels());
}

inline OperatorMatrix h_so(const NvParams& p) {
  const auto s = spin_one();
  const auto o = orbital_pauli();
  return detail::product(-p.lambda_so * kron(o.py.matrix(), s.sz.matrix()));
}

inline OperatorMatrix h_ss(const NvParams& p) {
  const auto s = spin_one();
  const auto o = orbital_pauli();
  const Mat sz = s.sz.matrix(), sp = s.s_plus.matrix(), sm = s.s_minus.matrix();
  const Mat op = o.p_plus.matrix(), om = o.p_minus.matrix();
  Mat h = p.d_es * detail::on_spin(sz * sz - (2.0 / 3.0) * Mat::Identity(3, 3)) -
          (p.delta1 / 4.0) * (kron(om, sp * sp) + kron(op, sm * sm)) +
          (p.delta2 / (2.0 * std::sqrt(2.0))) * (kron(op, sp * sz + sz * sp) + kron(om, sm * sz + sz * sm));
  return detail::product(h);
}

// Transverse elements carry g_perp mu_B (Bx ± i By) with no 1/sqrt2, as in the
// printed excited-state Zeeman matrix.
inline OperatorMatrix h_zeeman(const NvParams& p, const FieldConfig& f) {
  const auto& b = f.b_gauss;
  const cplx bp(b[0], b[1]);
  Mat z = Mat::Zero(3, 3);
  z(0, 0) = -p.g_es_par * b[2];
  z(2, 2) = p.g_es_par * b[2];
  z(0, 1) = z(1, 2) = p.g_es_perp * bp;
  z(1, 0) = z(2, 1) = p.g_es_perp * std::conj(bp);
  return detail::product(detail::on_spin(constants::bohr_magneton * z));
}

inline OperatorMatrix h_diamagnetic(const NvParams& p, const FieldConfig& f) {
  return detail::product(detail::on_orbital(constants::bohr_magneton * p.l_z * f.b_gauss[2] *
                                            orbital_pauli().py.matrix()));
}

inline OperatorMatrix h_strain(const FieldConfig& f) {
  const double c = std::cos(f.strain_angle), s = std::sin(f.strain_angle);
  Mat m(2, 2);
  m << -c, s, s, c;
  return detail::product(detail::on_orbital(f.strain_delta * m));
}

inline OperatorMatrix h_es_total(const NvParams& p, const FieldConfig& f, bool include_diamagnetic = true) {
  OperatorMatrix h = h_so(p) + h_ss(p) + h_zeeman(p, f) + h_strain(f);
  if (include_diamagnetic) h = h + h_diamagnetic(p, f);
  return h;
}

// Columns are |A1>, |A2>, |E1>, |E2>, |Ex>, |Ey> in the product basis.
inline Mat spin_orbit_basis_matrix() {
  Mat u = Mat::Zero(6, 6);
  const cplx i = I_;
  enum { Xm, X0, Xp, Ym, Y0, Yp };
  // A1 = -i/2 (|X,-1> + |X,+1> + i|Y,-1> - i|Y,+1>)
  u(Xm, 0) = -i / 2.0; u(Xp, 0) = -i / 2.0; u(Ym, 0) = 0.5; u(Yp, 0) = -0.5;
  // A2 = 1/2 (|X,-1> - |X,+1> + i|Y,-1> + i|Y,+1>)
  u(Xm, 1) = 0.5; u(Xp, 1) = -0.5; u(Ym, 1) = i / 2.0; u(Yp, 1) = i / 2.0;
  // E1 = -i/2 (|X,-1> + |X,+1> - i|Y,-1> + i|Y,+1>)
  u(Xm, 2) = -i / 2.0; u(Xp, 2) = -i / 2.0; u(Ym, 2) = -0.5; u(Yp, 2) = 0.5;
  // E2 = -1/2 (|X,-1> - |X,+1> - i|Y,-1> - i|Y,+1>)
  u(Xm, 3) = -0.5; u(Xp, 3) = 0.5; u(Ym, 3) = i / 2.0; u(Yp, 3) = i / 2.0;
  u(Y0, 4) = -1.0;
  u(X0, 5) = 1.0;
  return u;
}

inline OperatorMatrix to_spin_orbit_basis(const OperatorMatrix& m) {
  if (m.dim() != 6) throw ModelError(Errc::InvalidArgument, "spin-orbit basis change needs a 6x6 operator");
  const Mat u = spin_orbit_basis_matrix();
  if (!is_unitary(u, 1e-12)) throw ModelError(Errc::NotUnitary, "spin-orbit basis matrix");
  return OperatorMatrix(u.adjoint() * m.matrix() * u, spin_orbit_labels());
}

enum class ScanAxis { Strain, Bz };

struct FineStructureScan {
  ScanAxis axis = ScanAxis::Bz;
  std::vector<double> values;
  std::vector<EigenSystem> points;
  // tracks[i][k]: index into points[i].values of the state continuing
  // adiabatic track k (track k starts as the k-th lowest state at point 0).
  std::vector<std::vector<int>> tracks;
};

inline FieldConfig apply_scan_value(FieldConfig f, ScanAxis axis, double v) {
  if (axis == ScanAxis::Strain)
    f.strain_delta = v;
  else
    f.b_gauss[2] = v;
  return f;
}

// Greedy maximum-overlap assignment; ties resolved toward lower eigenvalue index.
inline std::vector<int> match_states(const Mat& previous, const Mat& current) {
  const Eigen::Index n = previous.cols();
  Eigen::MatrixXd overlap = (previous.adjoint() * current).cwiseAbs();
  std::vector<int> assign(static_cast<size_t>(n), -1);
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (Eigen::Index round = 0; round < n; ++round) {
    double best = -1.0;
    Eigen::Index bk = 0, bj = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (assign[static_cast<size_t>(k)] >= 0) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        if (overlap(k, j) > best) {
          best = overlap(k, j);
          bk = k;
          bj = j;
        }
      }
    }
    assign[static_cast<size_t>(bk)] = static_cast<int>(bj);
    used[static_cast<size_t>(bj)] = true;
  }
  return assign;
}

inline FineStructureScan fine_structure_scan(const NvParams& p, const FieldConfig& f_template, ScanAxis axis,
                                             const std::vector<double>& values, bool include_diamagnetic = false) {
  if (values.empty()) throw ModelError(Errc::EmptyScan, "fine-structure scan needs at least one value");
  for (double v : values)
    if (!std::isfinite(v)) throw ModelError(Errc::InvalidArgument, "non-finite scan value");

  FineStructureScan scan;
  scan.axis = axis;
  scan.values = values;
  for (double v : values) {
    const FieldConfig f = apply_scan_value(f_template, axis, v);
    scan.points.push_back(eigh(h_es_total(p, f, include_diamagnetic)));
  }

  std::vector<int> first(6);
  for (int k = 0; k < 6; ++k) first[static_cast<size_t>(k)] = k;
  scan.tracks.push_back(first);
  for (size_t i = 1; i < scan.points.size(); ++i) {
    const auto& prev_track = scan.tracks.back();
    Mat prev(6, 6);
    for (int k = 0; k < 6; ++k) prev.col(k) = scan.points[i - 1].vectors.col(prev_track[static_cast<size_t>(k)]);
    scan.tracks.push_back(match_states(prev, scan.points[i].vectors));
  }
  return scan;
}

// Population of spin projection m (-1, 0, +1) summed over both orbitals.
inline double spin_weight(const Vec& v, int m) {
  const Eigen::Index s = m + 1;
  return std::norm(v(s)) + std::norm(v(3 + s));
}

struct Anticrossing {
  double location = 0.0;  // scan value at the minimum gap
  double gap = std::numeric_limits<double>::infinity();  // rad/s
  size_t index = 0;
};

// Minimum splitting between the two lower-branch states that carry the
// m_s = 0 and m_s = +1 character. At each point the lower-branch state with
// the largest m_s = -1 weight is set aside.
inline Anticrossing lower_branch_anticrossing(const FineStructureScan& scan) {
  Anticrossing best;
  for (size_t i = 0; i < scan.points.size(); ++i) {
    const auto& es = scan.points[i];
    int skip = 0;
    double wmax = -1.0;
    for (int k = 0; k < 3; ++k) {
      double w = spin_weight(es.vectors.col(k), -1);
      if (w > wmax) {
        wmax = w;
        skip = k;
      }
    }
    std::vector<double> rest;
    for (int k = 0; k < 3; ++k)
      if (k != skip) rest.push_back(es.values[static_cast<size_t>(k)]);
    const double gap = std::abs(rest[1] - rest[0]);
    if (gap < best.gap) best = {scan.values[i], gap, i};
  }
  return best;
}

}  // namespace nvsim
