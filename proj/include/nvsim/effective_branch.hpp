#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nvsim/nv_hamiltonian.hpp"

namespace nvsim {

struct BranchHamiltonians {
  OperatorMatrix lower;         // 3x3, -delta orbital block
  OperatorMatrix upper;         // 3x3, +delta orbital block
  OperatorMatrix common_shift;  // 6x6 diagonal: D_es(Sz^2-2/3) + g mu_B Bz Sz - delta sigma_z
};

inline const std::vector<std::string>& branch_labels() {
  static const std::vector<std::string> l{"L,-1", "L,0", "L,+1", "U,-1", "U,0", "U,+1"};
  return l;
}

namespace detail {

inline void require_axial_field(const FieldConfig& f) {
  if (f.b_gauss[0] != 0.0 || f.b_gauss[1] != 0.0)
    throw ModelError(Errc::TransverseFieldNotSupported, "branch reduction assumes B along z");
}

inline Mat off_block(const Mat& m) {
  Mat v = Mat::Zero(6, 6);
  v.block(0, 3, 3, 3) = m.block(0, 3, 3, 3);
  v.block(3, 0, 3, 3) = m.block(3, 0, 3, 3);
  return v;
}

// Orbital rotation exp(-i angle sigma_y) on the product space, in closed form.
inline Mat orbital_rotation(double angle) {
  Mat r = std::cos(angle) * Mat::Identity(2, 2) - I_ * std::sin(angle) * orbital_pauli().py.matrix();
  return on_orbital(r);
}

}  // namespace detail

// The strain block becomes -delta sigma_z under a rotation by half the strain
// angle, exp(-i (alpha_s/2) sigma_y).
inline OperatorMatrix rotated_hamiltonian(const NvParams& p, const FieldConfig& f) {
  detail::require_axial_field(f);
  const Mat r = detail::orbital_rotation(f.strain_angle / 2.0);
  const Mat h = h_es_total(p, f, false).matrix();
  return OperatorMatrix(r * h * r.adjoint(), branch_labels());
}

inline OperatorMatrix coupling_v(const NvParams& p, const FieldConfig& f) {
  if (!(2.0 * f.strain_delta > p.lambda_so))
    throw ModelError(Errc::StrainTooWeak, "branch reduction needs 2 delta > lambda");
  return OperatorMatrix(detail::off_block(rotated_hamiltonian(p, f).matrix()), branch_labels());
}

namespace detail {

// Connected components of the nonzero pattern of h.
inline std::vector<std::vector<Eigen::Index>> coupled_blocks(const Mat& h) {
  const Eigen::Index n = h.rows();
  const double tiny = 1e-14 * std::max(max_abs(h), 1e-300);
  std::vector<Eigen::Index> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index a) {
    while (parent[static_cast<size_t>(a)] != a) a = parent[static_cast<size_t>(a)];
    return a;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(h(i, j)) > tiny || std::abs(h(j, i)) > tiny) parent[static_cast<size_t>(find(j))] = find(i);
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> root_of_block;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = find(i);
    auto it = std::find(root_of_block.begin(), root_of_block.end(), r);
    if (it == root_of_block.end()) {
      root_of_block.push_back(r);
      blocks.push_back({i});
    } else {
      blocks[static_cast<size_t>(it - root_of_block.begin())].push_back(i);
    }
  }
  return blocks;
}

}  // namespace detail

// Solves [G, h0] = -v with G anti-Hermitian. h0 is diagonalised block by block
// (blocks = connected components of its sparsity pattern) and G is filled in
// elementwise in that eigenbasis.
inline OperatorMatrix sw_generator(const OperatorMatrix& h0, const OperatorMatrix& v) {
  const Mat& H = h0.matrix();
  const Mat& V = v.matrix();
  const Eigen::Index n = H.rows();
  if (V.rows() != n) throw ModelError(Errc::InvalidArgument, "h0 and v dimensions differ");

  const auto blocks = detail::coupled_blocks(H);
  std::vector<int> block_of(static_cast<size_t>(n));
  Mat U = Mat::Zero(n, n);
  Eigen::VectorXd E(n);
  for (size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    Mat sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = H(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    const EigenSystem es = eigh(sub);
    for (Eigen::Index i = 0; i < k; ++i) {
      block_of[static_cast<size_t>(idx[static_cast<size_t>(i)])] = static_cast<int>(b);
      E(idx[static_cast<size_t>(i)]) = es.values[static_cast<size_t>(i)];
      for (Eigen::Index j = 0; j < k; ++j)
        U(idx[static_cast<size_t>(j)], idx[static_cast<size_t>(i)]) = es.vectors(j, i);
    }
  }

  const double vtiny = 1e-14 * std::max(max_abs(V), 1e-300);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (block_of[static_cast<size_t>(i)] == block_of[static_cast<size_t>(j)] && std::abs(V(i, j)) > vtiny)
        throw ModelError(Errc::InvalidArgument, "v couples states inside a block of h0");

  const Mat Vt = U.adjoint() * V * U;
  const double escale = std::max(E.cwiseAbs().maxCoeff(), 1e-300);
  Mat Gt = Mat::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      if (std::abs(Vt(a, b)) <= vtiny) continue;
      const double gap = E(a) - E(b);
      if (std::abs(gap) < 1e-6 * escale)
        throw ModelError(Errc::DegenerateDenominator, "coupled states are degenerate across blocks");
      Gt(a, b) = Vt(a, b) / gap;
    }
  return h0.relabel(U * Gt * U.adjoint());
}

inline OperatorMatrix common_shift(const NvParams& p, const FieldConfig& f) {
  const Mat sz = spin_one().sz.matrix();
  Mat spin = p.d_es * (sz * sz - (2.0 / 3.0) * Mat::Identity(3, 3)) +
             p.g_es_par * constants::bohr_magneton * f.b_gauss[2] * sz;
  Mat m = detail::on_spin(spin) - f.strain_delta * detail::on_orbital(orbital_pauli().pz.matrix());
  return OperatorMatrix(m, branch_labels());
}

inline cplx f_pm(const NvParams& p, double delta, double alpha, int sign) {
  return p.delta1 / delta + 2.0 * std::exp(3.0 * I_ * alpha) * (2.0 + sign * p.lambda_so / delta);
}

inline BranchHamiltonians h_eff_closed_form(const NvParams& p, const FieldConfig& f) {
  const double d = f.strain_delta;
  if (d == 0.0) throw ModelError(Errc::ZeroStrain, "closed-form branch Hamiltonians need delta > 0");
  const double a = f.strain_angle, lam = p.lambda_so, d1 = p.delta1, d2 = p.delta2;
  const cplx fp = f_pm(p, d, a, +1), fm = f_pm(p, d, a, -1);
  const double rep = lam * lam / (2 * d) + d1 * d1 / (8 * d);
  auto e = [](cplx z) { return std::exp(z); };

  Mat hl(3, 3), hu(3, 3);
  hl << -rep, -0.125 * e(-2.0 * I_ * a) * d2 * fp, 0.5 * e(-I_ * a) * d1 * (lam / d - 1),
      -0.125 * e(2.0 * I_ * a) * d2 * std::conj(fp), 0.0, 0.125 * e(-2.0 * I_ * a) * d2 * fp,
      0.5 * e(I_ * a) * d1 * (lam / d - 1), 0.125 * e(2.0 * I_ * a) * d2 * std::conj(fp), -rep;
  hu << rep, 0.125 * e(-2.0 * I_ * a) * d2 * fm, 0.5 * e(-I_ * a) * d1 * (lam / d + 1),
      0.125 * e(2.0 * I_ * a) * d2 * std::conj(fm), 0.0, -0.125 * e(-2.0 * I_ * a) * d2 * fm,
      0.5 * e(I_ * a) * d1 * (lam / d + 1), -0.125 * e(2.0 * I_ * a) * d2 * std::conj(fm), rep;

  return {OperatorMatrix(hl, {"L,-1", "L,0", "L,+1"}), OperatorMatrix(hu, {"U,-1", "U,0", "U,+1"}),
          common_shift(p, f)};
}

// Full second-order effective Hamiltonian H0 + [G, V]/2 in the rotated frame.
inline OperatorMatrix effective_hamiltonian(const NvParams& p, const FieldConfig& f) {
  const OperatorMatrix v = coupling_v(p, f);
  const OperatorMatrix h0 = rotated_hamiltonian(p, f) - v;
  const OperatorMatrix g = sw_generator(h0, v);
  return h0.relabel(h0.matrix() + 0.5 * commutator(g.matrix(), v.matrix()));
}

inline BranchHamiltonians h_eff_numeric(const NvParams& p, const FieldConfig& f) {
  const OperatorMatrix shift = common_shift(p, f);
  const Mat rest = effective_hamiltonian(p, f).matrix() - shift.matrix();
  return {OperatorMatrix(rest.block(0, 0, 3, 3), {"L,-1", "L,0", "L,+1"}),
          OperatorMatrix(rest.block(3, 3, 3, 3), {"U,-1", "U,0", "U,+1"}), shift};
}

// Ascending eigenvalues of common_shift + diag(lower, upper): lower branch first.
inline std::vector<double> branch_eigenvalues(const BranchHamiltonians& b) {
  Mat full = b.common_shift.matrix();
  full.block(0, 0, 3, 3) += b.lower.matrix();
  full.block(3, 3, 3, 3) += b.upper.matrix();
  std::vector<double> out = eigh(Mat(full.block(0, 0, 3, 3))).values;
  const auto up = eigh(Mat(full.block(3, 3, 3, 3))).values;
  out.insert(out.end(), up.begin(), up.end());
  return out;
}

struct SwComparisonPoint {
  double delta = 0.0;
  std::vector<double> exact;        // eigh of the full 6x6, ascending
  std::vector<double> numeric;      // branch eigenvalues of H0 + [G,V]/2
  std::vector<double> closed_form;  // branch eigenvalues of the closed form
  double numeric_vs_exact = 0.0;    // max eigenvalue deviation
  double closed_vs_exact = 0.0;
  double closed_vs_numeric = 0.0;   // max entry deviation of the 3x3 blocks
};

inline SwComparisonPoint sw_compare(const NvParams& p, const FieldConfig& f) {
  SwComparisonPoint pt;
  pt.delta = f.strain_delta;
  pt.exact = eigh(h_es_total(p, f, false)).values;
  const BranchHamiltonians num = h_eff_numeric(p, f);
  const BranchHamiltonians cf = h_eff_closed_form(p, f);
  pt.numeric = branch_eigenvalues(num);
  pt.closed_form = branch_eigenvalues(cf);
  for (size_t k = 0; k < 6; ++k) {
    pt.numeric_vs_exact = std::max(pt.numeric_vs_exact, std::abs(pt.numeric[k] - pt.exact[k]));
    pt.closed_vs_exact = std::max(pt.closed_vs_exact, std::abs(pt.closed_form[k] - pt.exact[k]));
  }
  pt.closed_vs_numeric = std::max(max_abs(num.lower.matrix() - cf.lower.matrix()),
                                  max_abs(num.upper.matrix() - cf.upper.matrix()));
  return pt;
}

struct SwScaling {
  std::vector<SwComparisonPoint> points;
  double slope_numeric_vs_exact = 0.0;
  double slope_closed_vs_exact = 0.0;
  double slope_closed_vs_numeric = 0.0;
};

inline SwScaling sw_scaling(const NvParams& p, FieldConfig f, const std::vector<double>& deltas) {
  SwScaling s;
  std::vector<double> a, b, c;
  for (double d : deltas) {
    f.strain_delta = d;
    s.points.push_back(sw_compare(p, f));
    a.push_back(s.points.back().numeric_vs_exact);
    b.push_back(s.points.back().closed_vs_exact);
    c.push_back(s.points.back().closed_vs_numeric);
  }
  s.slope_numeric_vs_exact = loglog_slope(deltas, a);
  s.slope_closed_vs_exact = loglog_slope(deltas, b);
  s.slope_closed_vs_numeric = loglog_slope(deltas, c);
  return s;
}

}  // namespace nvsim
