#pragma once

#include <string>

namespace iongrad {

inline constexpr const char* version = "1.0.0";

// CODATA 2018 values, SI.
namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double hbar = 1.054571817e-34;                   // J s
inline constexpr double elementary_charge = 1.602176634e-19;      // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;   // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;     // kg
inline constexpr double bohr_magneton = 9.2740100783e-24;         // J/T
// e^2/(4 pi eps0), J m: Coulomb pair energy at unit distance.
inline constexpr double coulomb_coefficient =
    elementary_charge * elementary_charge / (4.0 * pi * vacuum_permittivity);
}  // namespace constants

// Strong type for frequencies. Canonical internal representation is angular
// (rad/s); constructors/accessors handle the 2*pi bookkeeping exactly once.
class Frequency {
 public:
  constexpr Frequency() = default;
  static constexpr Frequency angular(double rad_per_s) { return Frequency(rad_per_s); }
  static constexpr Frequency hz(double f) { return Frequency(constants::two_pi * f); }
  static constexpr Frequency khz(double f) { return hz(f * 1e3); }
  static constexpr Frequency mhz(double f) { return hz(f * 1e6); }
  static constexpr Frequency ghz(double f) { return hz(f * 1e9); }

  constexpr double rad_per_s() const { return w_; }
  constexpr double in_hz() const { return w_ / constants::two_pi; }
  constexpr double in_khz() const { return in_hz() * 1e-3; }
  constexpr double in_mhz() const { return in_hz() * 1e-6; }
  constexpr double in_ghz() const { return in_hz() * 1e-9; }

 private:
  explicit constexpr Frequency(double w) : w_(w) {}
  double w_ = 0.0;
};

// Single ion species. Gyromagnetic ratios are angular and signed; the contact
// hyperfine constant is an angular frequency.
struct IonSpecies {
  std::string name;
  double mass = 0.0;          // kg
  double nuclear_spin = 0.5;  // I quantum number (half-integer)
  double gamma_s = 0.0;       // electron gyromagnetic ratio, (rad/s)/T
  double gamma_i = 0.0;       // nuclear gyromagnetic ratio, (rad/s)/T
  double hyperfine_a = 0.0;   // contact hyperfine constant, rad/s
};

// 171Yb+ ground state with the rounded literature parameters used throughout:
// gamma_S = 2pi*28 GHz/T, gamma_I = -2pi*7.5 MHz/T, A = 2pi*12.645 GHz, I = 1/2.
IonSpecies yb171();

// Throws Error(validation) if the species fields are out of domain.
void validate(const IonSpecies& s);

// Harmonic-trap length unit l = (e^2/(4 pi eps0 m omega_z^2))^(1/3), meters.
// Scales exactly as m^(-1/3) omega_z^(-2/3). nu_z is the axial frequency.
double ion_length_scale(const IonSpecies& s, Frequency nu_z);

}  // namespace iongrad
