#pragma once

// The excited-state matrices exactly as printed in the model description,
// typed in entry by entry. They serve as the independent oracle for the
// operator-algebra constructors.

#include <cmath>

#include "nvsim/nv_hamiltonian.hpp"

namespace printed {

using nvsim::cplx;
using nvsim::Mat;

inline Mat h_so(const nvsim::NvParams& p) {
  const cplx il(0, p.lambda_so);
  Mat m = Mat::Zero(6, 6);
  m(0, 3) = -il;
  m(2, 5) = il;
  m(3, 0) = il;
  m(5, 2) = -il;
  return m;
}

inline Mat h_ss(const nvsim::NvParams& p) {
  const double D = p.d_es, a = p.delta1 / 2, b = p.delta2 / 2;
  const cplx i(0, 1);
  Mat m(6, 6);
  m << D / 3, -b, -a, 0, i * b, -i * a,
       -b, -2 * D / 3, b, -i * b, 0, -i * b,
       -a, b, D / 3, i * a, i * b, 0,
       0, i * b, -i * a, D / 3, b, a,
       -i * b, 0, -i * b, b, -2 * D / 3, -b,
       i * a, i * b, 0, a, -b, D / 3;
  return m;
}

inline Mat h_zeeman(const nvsim::NvParams& p, const nvsim::FieldConfig& f) {
  const double mu = nvsim::constants::bohr_magneton;
  const double bx = f.b_gauss[0], by = f.b_gauss[1], bz = f.b_gauss[2];
  const cplx i(0, 1);
  const double gp = p.g_es_par, gt = p.g_es_perp;
  Mat s(3, 3);
  s << -gp * bz, gt * (bx + i * by), 0,
       gt * (bx - i * by), 0, gt * (bx + i * by),
       0, gt * (bx - i * by), gp * bz;
  Mat m = Mat::Zero(6, 6);
  m.block(0, 0, 3, 3) = mu * s;
  m.block(3, 3, 3, 3) = mu * s;
  return m;
}

inline Mat h_diamagnetic(const nvsim::NvParams& p, const nvsim::FieldConfig& f) {
  const double w = nvsim::constants::bohr_magneton * p.l_z * f.b_gauss[2];
  Mat m = Mat::Zero(6, 6);
  for (int k = 0; k < 3; ++k) {
    m(k, 3 + k) = cplx(0, -w);
    m(3 + k, k) = cplx(0, w);
  }
  return m;
}

inline Mat h_strain(const nvsim::FieldConfig& f) {
  const double d = f.strain_delta, c = std::cos(f.strain_angle), s = std::sin(f.strain_angle);
  Mat m = Mat::Zero(6, 6);
  for (int k = 0; k < 3; ++k) {
    m(k, k) = -d * c;
    m(3 + k, 3 + k) = d * c;
    m(k, 3 + k) = d * s;
    m(3 + k, k) = d * s;
  }
  return m;
}

// Columns A1, A2, E1, E2, Ex, Ey over rows (X,-1) (X,0) (X,+1) (Y,-1) (Y,0) (Y,+1).
inline Mat spin_orbit_basis() {
  const cplx i(0, 1);
  Mat u(6, 6);
  u << -i / 2.0, 0.5, -i / 2.0, -0.5, 0, 0,
       0, 0, 0, 0, 0, 1,
       -i / 2.0, -0.5, -i / 2.0, 0.5, 0, 0,
       0.5, i / 2.0, -0.5, i / 2.0, 0, 0,
       0, 0, 0, 0, -1, 0,
       -0.5, i / 2.0, 0.5, i / 2.0, 0, 0;
  return u;
}

}  // namespace printed
