#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nvsim/nv_hamiltonian.hpp"
#include "nvsim/states.hpp"

// Dispersive light-matter coupling. Quantities are SI except frequencies and
// detunings (rad/s); energies returned by the polariton functions are
// angular frequencies (hbar = 1).
namespace nvsim {

struct OpticalPulse {
  double power = 1e-6;           // W, both polarisation modes
  double duration = 1e-6;        // s
  double mode_area = 4.12e-13;   // m^2
  double dipole_angle = 0.0;     // rad, between dipole and polarisation
  std::map<int, double> detunings;  // m_s -> Delta_j, rad/s

  void validate() const {
    if (!(power > 0 && duration > 0 && mode_area > 0))
      throw ModelError(Errc::InvalidArgument, "pulse power, duration and mode area must be > 0");
  }
};

struct Transition {
  double energy = 0.0;             // rad/s
  double linewidth = 1.0;          // Gamma_j, rad/s
  double faraday_amplitude = 0.0;  // F_j, rad * rad/s
};

using TransitionSet = std::map<int, Transition>;  // keyed by m_s

inline void validate(const TransitionSet& t) {
  for (const auto& [m, tr] : t)
    if (!(tr.linewidth > 0))
      throw ModelError(Errc::InvalidArgument, "linewidth of m_s=" + std::to_string(m) + " must be > 0");
}

// |mu| in C m, from the radiative decay rate.
inline double dipole_moment(const NvParams& p) {
  using namespace constants;
  const double h4 = hbar * hbar * hbar * hbar;
  const double c3 = speed_of_light * speed_of_light * speed_of_light;
  return std::sqrt(3 * pi * vacuum_permittivity * h4 * c3 * p.gamma_r / (p.e_ph * p.e_ph * p.e_ph * p.n_diamond));
}

// Photon number per polarisation mode; the pulse carries two equally populated modes.
inline double photons_per_mode(const NvParams& p, const OpticalPulse& pulse) {
  return pulse.power * pulse.duration / (2 * p.e_ph);
}

// Peak field amplitude |E0| (V/m) for n photons in the coupled mode.
inline double field_amplitude(const NvParams& p, const OpticalPulse& pulse, double n_photons) {
  using namespace constants;
  return std::sqrt(2 * n_photons * p.e_ph /
                   (p.n_diamond * vacuum_permittivity * pulse.mode_area * speed_of_light * pulse.duration));
}

inline double rabi_frequency(const NvParams& p, const OpticalPulse& pulse, double n_photons) {
  if (n_photons < 0) throw ModelError(Errc::InvalidArgument, "photon number must be >= 0");
  return std::sqrt(p.f_dw) * dipole_moment(p) * field_amplitude(p, pulse, n_photons) *
         std::cos(pulse.dipole_angle) / constants::hbar;
}

// Per-photon coupling D (rad/s).
inline double coupling_constant_d(const NvParams& p, const OpticalPulse& pulse) {
  if (!(pulse.mode_area > 0)) throw ModelError(Errc::InvalidArgument, "mode area must be > 0");
  using namespace constants;
  const double mu = dipole_moment(p), c = std::cos(pulse.dipole_angle);
  return mu * mu * p.f_dw * p.e_ph * c * c /
         (2 * hbar * hbar * speed_of_light * p.n_diamond * vacuum_permittivity * pulse.mode_area);
}

// Mode area giving a target D; the inverse of coupling_constant_d.
inline double mode_area_for_coupling(const NvParams& p, double dipole_angle, double d_target) {
  OpticalPulse unit;
  unit.mode_area = 1.0;
  unit.dipole_angle = dipole_angle;
  return coupling_constant_d(p, unit) / d_target;
}

// Mode area giving a target on-resonance Rabi frequency for n photons.
inline double mode_area_for_rabi(const NvParams& p, OpticalPulse pulse, double n_photons, double omega_target) {
  pulse.mode_area = 1.0;
  const double w = rabi_frequency(p, pulse, n_photons);
  return (w / omega_target) * (w / omega_target);
}

// E_± of the dressed pair with n photons, relative to zero, in rad/s.
inline std::pair<double, double> polariton_energies(int n, double delta, double omega0, double e_ph) {
  if (n < 0) throw ModelError(Errc::InvalidArgument, "photon number must be >= 0");
  const double mid = e_ph * (n + 0.5), half = 0.5 * std::hypot(delta, omega0);
  return {mid + half, mid - half};
}

enum class DetuningSide { Unspecified, Positive, Negative };

// Shift of the ground-like polariton, in rad/s. Evaluated as
// sign(Delta) Omega^2 / (2 (sqrt(Delta^2+Omega^2) + |Delta|)), which equals the
// textbook (Delta/2)(sqrt(1+Omega^2/Delta^2) - 1) without its cancellation at
// large detuning. At Delta = 0 the branch has to be named.
inline double energy_shift(double delta, double omega0, DetuningSide side = DetuningSide::Unspecified) {
  double sign;
  if (delta > 0)
    sign = 1.0;
  else if (delta < 0)
    sign = -1.0;
  else if (side == DetuningSide::Positive)
    sign = 1.0;
  else if (side == DetuningSide::Negative)
    sign = -1.0;
  else
    throw ModelError(Errc::AmbiguousBranch, "zero detuning needs a branch side");
  const double ad = std::abs(delta);
  if (omega0 == 0.0) return 0.0;
  return sign * omega0 * omega0 / (2 * (std::hypot(delta, omega0) + ad));
}

inline double accumulated_phase_far_detuned(double n, double delta, double d) {
  if (delta == 0.0) throw ModelError(Errc::DivisionByZeroDetuning, "far-detuned phase at zero detuning");
  return d * n / delta;
}

inline double accumulated_phase_exact(double delta, double omega0, double tau,
                                      DetuningSide side = DetuningSide::Unspecified) {
  return tau * energy_shift(delta, omega0, side);
}

struct SpinLightState {
  std::vector<int> labels;  // m_s of each ground component
  std::vector<cplx> beta;
  cplx alpha{0.0, 0.0};
  std::vector<double> phi;  // per-photon phase of each component

  void validate() const {
    if (beta.size() != labels.size() || phi.size() != labels.size())
      throw ModelError(Errc::InvalidArgument, "spin-light state component counts differ");
    double n = 0;
    for (cplx b : beta) n += std::norm(b);
    if (std::abs(n - 1.0) > 1e-10) throw ModelError(Errc::InvalidState, "spin amplitudes not normalised");
  }
};

// <a|b> for coherent states, written as exp(-|a-b|^2/2 + i Im(a* b)) so large
// amplitudes with nearby phases don't cancel.
inline cplx coherent_overlap(cplx a, cplx b) {
  return std::exp(cplx(-0.5 * std::norm(a - b), std::imag(std::conj(a) * b)));
}

inline SpinLightState evolve_spin_light(SpinLightState s, double d, const std::map<int, double>& detunings) {
  s.validate();
  for (size_t j = 0; j < s.labels.size(); ++j) {
    auto it = detunings.find(s.labels[j]);
    if (it == detunings.end())
      throw ModelError(Errc::InvalidArgument, "no detuning for m_s=" + std::to_string(s.labels[j]));
    s.phi[j] = accumulated_phase_far_detuned(1.0, it->second, d);
  }
  return s;
}

inline SpinLightState evolve_spin_light(const SpinLightState& s, const NvParams& p, const OpticalPulse& pulse) {
  return evolve_spin_light(s, coupling_constant_d(p, pulse), pulse.detunings);
}

struct CoherentMixture {
  std::vector<double> weights;
  std::vector<cplx> amplitudes;
};

inline CoherentMixture reduced_light(const SpinLightState& s) {
  s.validate();
  CoherentMixture m;
  for (size_t j = 0; j < s.labels.size(); ++j) {
    m.weights.push_back(std::norm(s.beta[j]));
    m.amplitudes.push_back(s.alpha * std::exp(I_ * s.phi[j]));
  }
  return m;
}

// Density matrix of the mixture truncated to Fock states 0..n_max-1.
inline Mat light_density_fock(const CoherentMixture& m, int n_max) {
  Mat rho = Mat::Zero(n_max, n_max);
  for (size_t k = 0; k < m.weights.size(); ++k) {
    Vec psi(n_max);
    const cplx a = m.amplitudes[k];
    cplx term = std::exp(-0.5 * std::norm(a));
    for (int n = 0; n < n_max; ++n) {
      psi(n) = term;
      term *= a / std::sqrt(static_cast<double>(n + 1));
    }
    rho += m.weights[k] * psi * psi.adjoint();
  }
  return rho;
}

enum class SpinTrace { Exact, SmallPhase };

// Spin state after tracing out the light. Exact uses the coherent-state
// overlap <alpha e^{i phi_k}|alpha e^{i phi_j}>; SmallPhase replaces it by
// exp(i |alpha|^2 (phi_j - phi_k)), valid for phi << 1.
inline DensityMatrix reduced_spin(const SpinLightState& s, SpinTrace mode = SpinTrace::Exact) {
  s.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(s.labels.size());
  std::vector<std::string> labels;
  for (int m : s.labels) labels.push_back(std::to_string(m));
  const double nbar = std::norm(s.alpha);
  Mat rho(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const size_t uj = static_cast<size_t>(j), uk = static_cast<size_t>(k);
      const cplx coh = mode == SpinTrace::Exact
                           ? coherent_overlap(s.alpha * std::exp(I_ * s.phi[uk]), s.alpha * std::exp(I_ * s.phi[uj]))
                           : std::exp(I_ * nbar * (s.phi[uj] - s.phi[uk]));
      rho(j, k) = s.beta[uj] * std::conj(s.beta[uk]) * coh;
    }
  return DensityMatrix(OperatorMatrix(rho, labels), mode == SpinTrace::Exact);
}

inline double lorentzian_phase(double amplitude, double linewidth, double delta) {
  return amplitude * delta / (delta * delta + linewidth * linewidth);
}

// Faraday phase phi_0 - phi_{-1} in the far-detuned limit. omega_s is the
// m_s=-1 transition frequency minus the m_s=0 one; Delta_{-1} = Delta_0 - omega_s.
inline double faraday_phase_far_detuned(double d, double omega_s, double delta0) {
  const double dm1 = delta0 - omega_s;
  if (delta0 == 0.0 || dm1 == 0.0) throw ModelError(Errc::DivisionByZeroDetuning, "Faraday phase on resonance");
  return -d * omega_s / (delta0 * dm1);
}

inline double faraday_phase_lorentzian(const TransitionSet& t, double delta0) {
  validate(t);
  auto z = t.find(0), m = t.find(-1);
  if (z == t.end() || m == t.end())
    throw ModelError(Errc::InvalidArgument, "Faraday phase needs m_s=0 and m_s=-1 transitions");
  const double omega_s = m->second.energy - z->second.energy;
  const double dm1 = delta0 - omega_s;
  return lorentzian_phase(z->second.faraday_amplitude, z->second.linewidth, delta0) -
         lorentzian_phase(m->second.faraday_amplitude, m->second.linewidth, dm1);
}

// Stark shift of one spin level's precession frequency, in Hz.
inline double stark_shift(double delta, double omega0, DetuningSide side = DetuningSide::Unspecified) {
  return energy_shift(delta, omega0, side) / constants::two_pi;
}

// Optical Stark frequency from a Faraday phase, in Hz; e_ph in joules.
inline double stark_from_faraday(double power, double e_ph, double faraday_phase) {
  return power * faraday_phase / (4 * constants::pi * e_ph);
}

}  // namespace nvsim
