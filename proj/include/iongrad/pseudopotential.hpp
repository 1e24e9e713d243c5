#pragma once

#include <Eigen/Dense>

#include "iongrad/constants.hpp"

namespace iongrad {

// Radial rf-trap parameters: drive frequency Omega_t and the dimensionless
// stability parameters (a, q) of x'' = -(Omega_t^2/4)(a - 2q cos(Omega_t t)) x.
// Heuristic lowest-stability-region bound: a + q^2/2 >= 0 and 0 <= q < 0.9.
struct RfTrapParams {
  IonSpecies species;
  Frequency drive;  // Omega_t
  double a = 0.0;
  double q = 0.0;
};

void validate(const RfTrapParams& p);

// Lowest-order secular frequency omega_r = (Omega_t/2) sqrt(a + q^2/2).
Frequency secular_frequency(const RfTrapParams& p);

// omega_c = e B / m.
Frequency cyclotron_frequency(const IonSpecies& species, double b_field);

// The two radial modes in an axial field: omega_r +- omega_c/2. `destabilized`
// flags omega_r <= omega_c/2 (the lower mode is no longer confining).
struct ShiftedModes {
  Frequency plus;
  Frequency minus;
  bool destabilized = false;
};
ShiftedModes shifted_mode_frequencies(const RfTrapParams& p, double b_field);
ShiftedModes shifted_mode_frequencies(Frequency secular, Frequency cyclotron);

// First-order dynamical matrix of the averaged radial motion in canonical
// variables (x, y, px, py), m = 1: eigenvalues +-i(omega_r +- omega_c/2).
Eigen::Matrix4d radial_dynamical_matrix(double omega_r, double omega_c);

// The two positive mode frequencies of the dynamical matrix, ascending.
Eigen::Vector2d dynamical_matrix_frequencies(const Eigen::Matrix4d& m);

}  // namespace iongrad
