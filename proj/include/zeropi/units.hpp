#pragma once

#include <cmath>

#include "zeropi/types.hpp"

// Internal unit system: hbar*omega_p = 1, times in 1/omega_p, and
// capacitances in units where e^2/2 = 1 so that E_C = 1/C.
namespace zp::units {

inline constexpr double h = 6.62607015e-34;
inline constexpr double hbar = h / (2.0 * kPi);
inline constexpr double e = 1.602176634e-19;
inline constexpr double kB = 1.380649e-23;
inline constexpr double e_squared = 2.0;

struct Scale {
  double omega_p_over_2pi = 4.0e10;

  // angular frequency in omega_p units -> ordinary frequency in Hz
  double to_hz(double w) const { return w * omega_p_over_2pi; }
  double from_hz(double f) const { return f / omega_p_over_2pi; }
  double to_seconds(double t) const { return t / (2.0 * kPi * omega_p_over_2pi); }
  double from_seconds(double s) const { return s * 2.0 * kPi * omega_p_over_2pi; }
  // e*V in units of hbar*omega_p
  double ev_from_volts(double volts) const { return e * volts / (h * omega_p_over_2pi); }
  double volts_from_ev(double ev) const { return ev * h * omega_p_over_2pi / e; }
  // hbar*omega/(k_B T) for omega in omega_p units
  double energy_over_kT(double w, double kelvin) const {
    return w * h * omega_p_over_2pi / (kB * kelvin);
  }
};

inline double bose_einstein(double energy_over_kT) {
  if (!(energy_over_kT > 0.0)) throw InvalidParameters("bose_einstein: non-positive argument");
  if (std::isinf(energy_over_kT)) return 0.0;
  return 1.0 / std::expm1(energy_over_kT);
}

}  // namespace zp::units
