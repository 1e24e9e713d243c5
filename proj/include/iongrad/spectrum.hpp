#pragma once

#include <vector>

#include <Eigen/Dense>

#include "iongrad/constants.hpp"

namespace iongrad {

// Chain of ions in an offset field B0 with axial gradient `gradient`, observed on
// the electron-flip transitions. `active` lists the addressed ions (1-based);
// the remaining (passive) ions have their electron spin pinned to
// passive_m_s. All nuclear spins sit in the m_I = nuclear_m manifold.
struct ChainConfig {
  IonSpecies species;
  int n_ions = 2;
  double b0 = 1.0;          // T at the trap center
  double gradient = 0.0;    // T/m
  Frequency nu_z = Frequency::khz(600);
  std::vector<int> active;  // 1-based; empty = all ions active
  double passive_m_s = 0.5;
  double nuclear_m = 0.5;
};

void validate(const ChainConfig& config);

// One electron-flip line of ion `ion` (1-based): frequency (rad/s), the partner
// spin configuration that produces it (sigma[j] = +1/-1 for m_S = +-1/2 of ion
// j+1; 0 at the ion's own slot), and the number of partner configurations merged
// into this line (weight). Lines of one ion closer than 1e-3 Hz are merged.
struct SpectralLine {
  int ion = 1;
  double frequency = 0.0;  // rad/s
  int weight = 1;
  std::vector<int> sigma;  // representative conditioning
};

// Electron-flip frequency of ion i (1-based) at positions z (m) given the partner
// spins: OmegaS'(B0) + gamma_S*gradient*z_i + A*m_I - (1/2) sum_j J_ij sigma_j.
// The offset term uses the splitting-matched effective electron frequency at B0;
// the gradient term enters with the natural gamma_S (dOmega_S/dz = gamma_S b).
//
// full_spectrum: every combination of the other ions' electron spins (2^(n-1)
// per ion before merging). Lines sorted by frequency, then ion. n <= 20.
std::vector<SpectralLine> full_spectrum(const ChainConfig& config);

// Only the active ions' lines, with passive ions frozen at passive_m_s and the
// enumeration running over the other *active* ions (2^(n_active - 1) per ion
// before merging; 2 lines per ion for an active pair).
std::vector<SpectralLine> active_spectrum(const ChainConfig& config);

// Smallest adjacent-ion separation of the line groups: min_i gamma_S * gradient *
// (z_{i+1} - z_i), rad/s.
double addressing_separation(const ChainConfig& config);

}  // namespace iongrad
