#pragma once

#include <numbers>

// Internal unit system: angular frequencies in rad/s (h = 1, so energies and
// frequencies share units), decay rates in 1/s, magnetic field in gauss,
// everything else SI.
namespace nvsim {

namespace constants {

inline constexpr int table_version = 1;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double electron_volt = 1.602176634e-19;     // J
inline constexpr double bohr_magneton_hz_per_gauss = 1.3996e6;
inline constexpr double bohr_magneton = two_pi * bohr_magneton_hz_per_gauss;  // rad/s per G

}  // namespace constants

constexpr double from_hz(double f) { return constants::two_pi * f; }
constexpr double from_khz(double f) { return from_hz(f * 1e3); }
constexpr double from_mhz(double f) { return from_hz(f * 1e6); }
constexpr double from_ghz(double f) { return from_hz(f * 1e9); }
constexpr double to_hz(double w) { return w / constants::two_pi; }

// Energy in joules <-> angular frequency.
constexpr double joules_to_rad_per_s(double e) { return e / constants::hbar; }
constexpr double ev_to_joules(double e) { return e * constants::electron_volt; }

}  // namespace nvsim
