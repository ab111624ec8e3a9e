#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nvsim/numerics.hpp"

namespace nvsim {

// Hermitian, unit-trace, positive-semidefinite operator.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(OperatorMatrix rho, bool check = true) : rho_(std::move(rho)) {
    if (check) validate();
  }

  static DensityMatrix pure(const Vec& psi, std::vector<std::string> labels) {
    Vec v = psi / psi.norm();
    return DensityMatrix(OperatorMatrix(v * v.adjoint(), std::move(labels)));
  }

  const OperatorMatrix& op() const { return rho_; }
  const Mat& matrix() const { return rho_.matrix(); }
  Eigen::Index dim() const { return rho_.dim(); }

  double trace() const { return rho_.matrix().trace().real(); }
  double purity() const { return (rho_.matrix() * rho_.matrix()).trace().real(); }
  double min_eigenvalue() const { return eigh(Mat(0.5 * (matrix() + matrix().adjoint()))).values.front(); }

  struct Defects {
    double hermiticity, trace, min_eigenvalue;
  };

  Defects defects() const {
    return {max_abs(matrix() - matrix().adjoint()), std::abs(trace() - 1.0), min_eigenvalue()};
  }

  void validate(double herm_tol = 1e-10, double trace_tol = 1e-10, double eig_floor = -1e-9) const {
    const Defects d = defects();
    if (d.hermiticity > herm_tol)
      throw ModelError(Errc::InvalidState, "density matrix not Hermitian (" + std::to_string(d.hermiticity) + ")");
    if (d.trace > trace_tol)
      throw ModelError(Errc::InvalidState, "density matrix trace off by " + std::to_string(d.trace));
    if (d.min_eigenvalue < eig_floor)
      throw ModelError(Errc::InvalidState, "density matrix has eigenvalue " + std::to_string(d.min_eigenvalue));
  }

 private:
  OperatorMatrix rho_;
};

struct BlochVector {
  double bx = 0.0, by = 0.0, bz = 0.0;
  double norm() const { return std::sqrt(bx * bx + by * by + bz * bz); }
  double dot(const BlochVector& o) const { return bx * o.bx + by * o.by + bz * o.bz; }
};

// Bloch vector of a 2x2 block in the ordering (|a>, |b>) with
// sigma_z = |a><a| - |b><b|, sigma_x = |a><b| + |b><a|, sigma_y = -i|a><b| + i|b><a|.
inline BlochVector bloch_from_block(const Mat& rho, Eigen::Index a, Eigen::Index b) {
  const cplx rba = rho(b, a);
  return {2.0 * rba.real(), 2.0 * rba.imag(), (rho(a, a) - rho(b, b)).real()};
}

}  // namespace nvsim
