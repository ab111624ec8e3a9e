#pragma once

#include <string>
#include <vector>

#include <Eigen/SVD>

#include "nvsim/states.hpp"

// Column-stacking vectorisation: vec(rho)[i + n*j] = rho(i, j), so
// vec(A X B) = (B^T kron A) vec(X).
namespace nvsim {

struct Jump {
  Mat op;       // L
  double rate;  // multiplies L rho L^dag - {L^dag L, rho}/2
};

inline Vec vectorize(const Mat& rho) { return Eigen::Map<const Vec>(rho.data(), rho.size()); }

inline Mat unvectorize(const Vec& v, Eigen::Index n) {
  if (v.size() != n * n) throw ModelError(Errc::InvalidArgument, "vector length is not n^2");
  return Eigen::Map<const Mat>(v.data(), n, n);
}

inline Mat lindblad_superoperator(const Mat& h, const std::vector<Jump>& jumps) {
  const Eigen::Index n = h.rows();
  if (!is_hermitian(h)) throw ModelError(Errc::NotHermitian, "Lindblad Hamiltonian is not Hermitian");
  const Mat id = Mat::Identity(n, n);
  Mat w = I_ * kron(Mat(h.transpose()), id) - I_ * kron(id, h);
  for (const Jump& j : jumps) {
    if (j.rate < 0) throw ModelError(Errc::InvalidArgument, "negative Lindblad rate");
    if (j.rate == 0) continue;
    const Mat ldl = j.op.adjoint() * j.op;
    w += j.rate * (kron(Mat(j.op.conjugate()), j.op) - 0.5 * kron(id, ldl) - 0.5 * kron(Mat(ldl.transpose()), id));
  }
  return w;
}

// Row vector t with t . vec(rho) = Tr(rho).
inline Eigen::RowVectorXcd trace_functional(Eigen::Index n) {
  return vectorize(Mat::Identity(n, n)).transpose();
}

inline Eigen::VectorXd singular_values(const Mat& w) {
  return Eigen::JacobiSVD<Mat>(w).singularValues();
}

inline int numerical_rank(const Mat& w, double rel_tol = 1e-10) {
  const Eigen::VectorXd s = singular_values(w);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

// Stationary state from the right singular vector of the smallest singular
// value. Refuses when the null space looks more than one-dimensional: the
// next singular value must clear both gap_ratio * smallest and the rank
// threshold rel_tol * largest (an exact zero would otherwise pass any ratio).
inline Mat stationary_state(const Mat& w, Eigen::Index n, double gap_ratio = 1e3, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Mat> svd(w, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const Eigen::Index k = s.size();
  const double smallest = s(k - 1), second = s(k - 2);
  if (second < gap_ratio * smallest || second <= rel_tol * s(0))
    throw ModelError(Errc::DegenerateSteadyState, "null space of W is not one-dimensional (sigma_min=" +
                                                      std::to_string(smallest) +
                                                      ", next=" + std::to_string(second) + ")");
  Mat rho = unvectorize(svd.matrixV().col(k - 1), n);
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace nvsim
