#pragma once

#include <vector>

#include <Eigen/Dense>

#include "iongrad/constants.hpp"
#include "iongrad/crystal.hpp"

namespace iongrad {

// Larmor-frequency gradient along the axis: dOmega_S/dz = gamma_S * b, (rad/s)/m.
// b is the magnetic field gradient in T/m (>= 0).
double larmor_gradient(const IonSpecies& species, double gradient);

// Gradient-induced electron-spin coupling matrix for a chain with normal modes
// (mu, d) at axial frequency nu_z:
//   J_ij = sum_l  hbar/(2 m nu_l^2) * D_il D_jl * (gamma_S b)^2,   nu_l angular.
// Result in rad/s; symmetric with zero diagonal.
Eigen::MatrixXd j_from_modes(const IonSpecies& species, const NormalModes& modes,
                             Frequency nu_z, double gradient);

struct CouplingResult {
  Eigen::MatrixXd j;  // rad/s, symmetric, zero diagonal
  CrystalConfiguration crystal;
  NormalModes modes;
};

// Solves the crystal, computes modes and the full J matrix. n >= 2, gradient > 0.
CouplingResult j_matrix(const IonSpecies& species, int n, Frequency nu_z,
                        double gradient);

// Two-qubit gate time T for a pair coupling J (rad/s): T * (J/2pi) = pi, i.e.
// T = 2 pi^2 / J. The conditional-phase construction in the dynamics module has
// its own entangling time 2 pi / J = T / pi; both conventions are exposed.
double gate_time(double j_pair);

// One row of the benchmark coupling table: inputs and derived quantities in the
// presentation units (kHz, T/m, um, ms), plus the published reference values.
struct CouplingBenchmarkRow {
  double nu_z_khz;
  int n_ions;
  double gradient;  // T/m
  double dz_um;     // min adjacent spacing
  double j_khz;     // J/2pi of the benchmark pair (nearest-neighbor; middle pair for n=4)
  double t_ms;      // gate time
  double ref_dz_um; // published values (3 significant digits)
  double ref_j_khz;
  double ref_t_ms;
};

// All 12 benchmark configurations: nu_z in {600, 200} kHz, n in {3, 4},
// b in {50, 100, 300} T/m, with computed and reference values side by side.
std::vector<CouplingBenchmarkRow> coupling_benchmark(const IonSpecies& species);

}  // namespace iongrad
