#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "nvsim/errors.hpp"

namespace nvsim {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx I_{0.0, 1.0};

// Dense complex square matrix over a labelled, ordered basis.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;

  OperatorMatrix(Mat m, std::vector<std::string> labels) : m_(std::move(m)), labels_(std::move(labels)) {
    if (m_.rows() != m_.cols())
      throw ModelError(Errc::InvalidArgument, "operator matrix must be square");
    if (static_cast<Eigen::Index>(labels_.size()) != m_.rows())
      throw ModelError(Errc::InvalidArgument, "basis label count does not match dimension");
  }

  // Unlabelled basis gets "0".."n-1".
  explicit OperatorMatrix(Mat m) : OperatorMatrix(m, index_labels(m.rows())) {}

  Eigen::Index dim() const { return m_.rows(); }
  const Mat& matrix() const { return m_; }
  const std::vector<std::string>& labels() const { return labels_; }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  // Entries in row-major order.
  std::vector<cplx> entries() const {
    std::vector<cplx> out;
    out.reserve(static_cast<size_t>(m_.size()));
    for (Eigen::Index r = 0; r < m_.rows(); ++r)
      for (Eigen::Index c = 0; c < m_.cols(); ++c) out.push_back(m_(r, c));
    return out;
  }

  OperatorMatrix relabel(Mat m) const { return OperatorMatrix(std::move(m), labels_); }

  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    check_same(a, b);
    return OperatorMatrix(a.m_ + b.m_, a.labels_);
  }
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    check_same(a, b);
    return OperatorMatrix(a.m_ - b.m_, a.labels_);
  }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    check_same(a, b);
    return OperatorMatrix(a.m_ * b.m_, a.labels_);
  }
  friend OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return OperatorMatrix(s * a.m_, a.labels_); }
  friend OperatorMatrix operator*(double s, const OperatorMatrix& a) { return OperatorMatrix(s * a.m_, a.labels_); }

  static std::vector<std::string> index_labels(Eigen::Index n) {
    std::vector<std::string> l;
    for (Eigen::Index i = 0; i < n; ++i) l.push_back(std::to_string(i));
    return l;
  }

 private:
  static void check_same(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) throw ModelError(Errc::InvalidArgument, "dimension mismatch");
  }

  Mat m_;
  std::vector<std::string> labels_;
};

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double hermiticity_defect(const Mat& m) {
  double scale = max_abs(m);
  if (scale == 0.0) return 0.0;
  return max_abs(m - m.adjoint()) / scale;
}

inline bool is_hermitian(const Mat& m, double rel_tol = 1e-10) { return hermiticity_defect(m) <= rel_tol; }

inline bool is_unitary(const Mat& m, double tol = 1e-12) {
  return max_abs(m.adjoint() * m - Mat::Identity(m.rows(), m.cols())) <= tol;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  std::vector<std::string> labels;
  labels.reserve(a.labels().size() * b.labels().size());
  for (const auto& la : a.labels())
    for (const auto& lb : b.labels()) labels.push_back(la + "⊗" + lb);
  return OperatorMatrix(kron(a.matrix(), b.matrix()), std::move(labels));
}

inline OperatorMatrix identity(Eigen::Index n, std::vector<std::string> labels = {}) {
  if (labels.empty()) labels = OperatorMatrix::index_labels(n);
  return OperatorMatrix(Mat::Identity(n, n), std::move(labels));
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

// Multiply v by a unit phase so that its first non-negligible component is
// real and positive.
inline void fix_phase(Eigen::Ref<Vec> v, double rel_tol = 1e-8) {
  double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > rel_tol * scale) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

struct EigenSystem {
  std::vector<double> values;  // ascending
  Mat vectors;                 // column k belongs to values[k]
};

// Within each degenerate cluster the basis is rebuilt by Gram-Schmidt on the
// projections of e_0, e_1, ... so the result does not depend on LAPACK's
// arbitrary choice inside the subspace.
inline void canonicalize_degenerate(EigenSystem& es, double tol) {
  const Eigen::Index n = es.vectors.rows();
  size_t start = 0;
  while (start < es.values.size()) {
    size_t end = start + 1;
    while (end < es.values.size() && es.values[end] - es.values[end - 1] <= tol) ++end;
    const Eigen::Index k = static_cast<Eigen::Index>(end - start);
    if (k > 1) {
      Mat q = es.vectors.middleCols(static_cast<Eigen::Index>(start), k);
      Mat chosen(n, k);
      Eigen::Index found = 0;
      for (Eigen::Index j = 0; j < n && found < k; ++j) {
        Vec p = q * q.row(j).adjoint();  // Q Q^† e_j
        for (Eigen::Index c = 0; c < found; ++c) p -= chosen.col(c) * chosen.col(c).dot(p);
        double nrm = p.norm();
        if (nrm > 1e-6) chosen.col(found++) = p / nrm;
      }
      es.vectors.middleCols(static_cast<Eigen::Index>(start), k) = chosen;
    }
    start = end;
  }
}

inline EigenSystem eigh(const Mat& h) {
  if (h.rows() != h.cols()) throw ModelError(Errc::InvalidArgument, "eigh needs a square matrix");
  double defect = hermiticity_defect(h);
  if (defect > 1e-10)
    throw ModelError(Errc::NotHermitian, "relative Hermiticity defect " + std::to_string(defect));
  Mat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) throw ModelError(Errc::InvalidArgument, "eigensolver failed");

  EigenSystem es;
  es.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  es.vectors = solver.eigenvectors();
  double scale = std::max(max_abs(sym), 1e-300);
  canonicalize_degenerate(es, 1e-9 * scale);
  for (Eigen::Index k = 0; k < es.vectors.cols(); ++k) fix_phase(es.vectors.col(k));
  return es;
}

inline EigenSystem eigh(const OperatorMatrix& h) { return eigh(h.matrix()); }

inline Mat expm(const Mat& m) { return m.exp(); }

inline OperatorMatrix expm(const OperatorMatrix& m) { return m.relabel(expm(m.matrix())); }

struct SpinOneOperators {
  OperatorMatrix sx, sy, sz, s_plus, s_minus;
};

// Spin-1 matrices in the ordering (|-1>, |0>, |+1>).
inline SpinOneOperators spin_one() {
  const std::vector<std::string> labels{"-1", "0", "+1"};
  const double r = 1.0 / std::sqrt(2.0);
  Mat sx = Mat::Zero(3, 3), sy = Mat::Zero(3, 3), sz = Mat::Zero(3, 3);
  sx(0, 1) = sx(1, 0) = sx(1, 2) = sx(2, 1) = r;
  sy(1, 0) = sy(2, 1) = -I_ * r;
  sy(0, 1) = sy(1, 2) = I_ * r;
  sz(0, 0) = -1.0;
  sz(2, 2) = 1.0;
  return {OperatorMatrix(sx, labels), OperatorMatrix(sy, labels), OperatorMatrix(sz, labels),
          OperatorMatrix(sx + I_ * sy, labels), OperatorMatrix(sx - I_ * sy, labels)};
}

struct OrbitalPauli {
  OperatorMatrix px, py, pz, p_plus, p_minus;
};

// Orbital Pauli operators in the ordering (|X>, |Y>). p_plus/p_minus are
// pz ± i px, not ladder operators.
inline OrbitalPauli orbital_pauli() {
  const std::vector<std::string> labels{"X", "Y"};
  Mat px(2, 2), py(2, 2), pz(2, 2);
  px << 0, 1, 1, 0;
  py << 0, -I_, I_, 0;
  pz << 1, 0, 0, -1;
  return {OperatorMatrix(px, labels), OperatorMatrix(py, labels), OperatorMatrix(pz, labels),
          OperatorMatrix(pz + I_ * px, labels), OperatorMatrix(pz - I_ * px, labels)};
}

// Least-squares slope of log|y| against log|x|.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double lx = std::log(std::abs(x[i])), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nvsim
