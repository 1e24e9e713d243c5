#pragma once

#include <vector>

#include <Eigen/Dense>

#include "iongrad/constants.hpp"

namespace iongrad {

// Equilibrium of n ions in a harmonic axial well with mutual Coulomb repulsion,
// in units of the ion length scale: stationary point of
//   V(u) = sum_i u_i^2/2 + sum_{i<j} 1/|u_i - u_j|.
struct CrystalConfiguration {
  Eigen::VectorXd positions;  // dimensionless, strictly ascending, zero mean
  double residual = 0.0;      // max-norm of the dimensionless gradient at the solution
  int iterations = 0;         // Newton iterations used
};

// Axial normal modes: eigenvalues mu of the dimensionless Hessian (ascending,
// mu[0] = 1 is the center-of-mass mode) and the orthogonal mode matrix d whose
// column l is mode l (column 0 = uniform vector 1/sqrt(n), sign-fixed).
struct NormalModes {
  Eigen::VectorXd mu;
  Eigen::MatrixXd d;
};

// Damped Newton iteration from a uniform-spacing guess; gradient max-norm
// converged below 1e-12 (iteration budget 200). 2 <= n <= 20.
CrystalConfiguration equilibrium_positions(int n);

// Dimensionless Hessian of V at the given positions (symmetric positive definite
// at an equilibrium).
Eigen::MatrixXd potential_hessian(const Eigen::VectorXd& positions);

NormalModes normal_modes(const CrystalConfiguration& crystal);

// Mode angular frequencies omega_l = omega_z * sqrt(mu_l).
std::vector<Frequency> mode_frequencies(const NormalModes& modes, Frequency nu_z);

// Physical positions in meters: ion_length_scale(species, nu_z) * u.
Eigen::VectorXd physical_positions(const CrystalConfiguration& crystal,
                                   const IonSpecies& species, Frequency nu_z);

// Smallest adjacent spacing in meters for the n-ion equilibrium.
double min_spacing(const IonSpecies& species, Frequency nu_z, int n);

}  // namespace iongrad
