#include "iongrad/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "iongrad/coupling.hpp"
#include "iongrad/crystal.hpp"
#include "iongrad/errors.hpp"
#include "iongrad/hyperfine.hpp"

namespace iongrad {

void validate(const ChainConfig& config) {
  validate(config.species);
  require(config.species.nuclear_spin == 0.5,
          "chain spectra require a nuclear-spin-1/2 species");
  require(config.n_ions >= 2, "chain needs at least 2 ions");
  if (config.n_ions > 20)
    throw_capacity("chains beyond 20 ions exceed the enumeration cap "
                   "(2^(n-1) conditions per ion)");
  require(config.b0 > 0.0, "offset field must be positive");
  require(std::isfinite(config.gradient) && config.gradient >= 0.0,
          "field gradient must be finite and non-negative");
  require(config.nu_z.rad_per_s() > 0.0, "axial frequency must be positive");
  require(std::abs(config.passive_m_s) == 0.5, "passive polarization must be +-1/2");
  require(std::abs(config.nuclear_m) == 0.5, "nuclear projection must be +-1/2");
  std::vector<int> active = config.active;
  std::sort(active.begin(), active.end());
  require(std::adjacent_find(active.begin(), active.end()) == active.end(),
          "active ion indices must be unique");
  for (int ion : active)
    require(ion >= 1 && ion <= config.n_ions, "active ion index out of range (1-based)");
}

namespace {

// Lines of one ion whose frequencies agree within 1e-3 Hz are one physical line;
// the representative conditioning is the first configuration encountered.
constexpr double merge_tolerance = constants::two_pi * 1e-3;  // rad/s

struct ChainData {
  Eigen::VectorXd z;   // positions, m
  Eigen::MatrixXd j;   // coupling matrix, rad/s
  double base_offset;  // matched effective electron frequency + A*m_I, rad/s
  double gradient_slope;  // gamma_S * gradient, (rad/s)/m
};

ChainData chain_data(const ChainConfig& config) {
  CrystalConfiguration crystal = equilibrium_positions(config.n_ions);
  ChainData d;
  d.z = physical_positions(crystal, config.species, config.nu_z);
  if (config.gradient > 0.0) {
    d.j = j_from_modes(config.species, normal_modes(crystal), config.nu_z,
                       config.gradient);
  } else {
    d.j = Eigen::MatrixXd::Zero(config.n_ions, config.n_ions);
  }
  EffectiveLarmor eff = matched_effective_larmor(config.species, config.b0);
  d.base_offset = eff.omega_s + config.species.hyperfine_a * config.nuclear_m;
  d.gradient_slope = config.species.gamma_s * config.gradient;
  return d;
}

void merge_line(std::vector<SpectralLine>& ion_lines, int ion, double frequency,
                const std::vector<int>& sigma) {
  for (SpectralLine& line : ion_lines) {
    if (std::abs(line.frequency - frequency) <= merge_tolerance) {
      line.weight += 1;
      return;
    }
  }
  SpectralLine line;
  line.ion = ion;
  line.frequency = frequency;
  line.weight = 1;
  line.sigma = sigma;
  ion_lines.push_back(line);
}

void sort_lines(std::vector<SpectralLine>& lines) {
  std::sort(lines.begin(), lines.end(), [](const SpectralLine& a, const SpectralLine& b) {
    if (a.frequency != b.frequency) return a.frequency < b.frequency;
    return a.ion < b.ion;
  });
}

// Enumerate the electron-flip lines of ion i (0-based) with the partner ions
// listed in `free_partners` running over both spin values and every other
// partner pinned to `pinned[j]`.
void enumerate_ion(const ChainConfig& config, const ChainData& d, int i,
                   const std::vector<int>& free_partners, const std::vector<int>& pinned,
                   std::vector<SpectralLine>& out) {
  const int n = config.n_ions;
  const double base = d.base_offset + d.gradient_slope * d.z[i];

  double pinned_shift = 0.0;
  for (int jx = 0; jx < n; ++jx)
    if (jx != i && pinned[jx] != 0) pinned_shift -= 0.5 * d.j(i, jx) * pinned[jx];

  std::vector<SpectralLine> ion_lines;
  const int m = static_cast<int>(free_partners.size());
  for (long mask = 0; mask < (1L << m); ++mask) {
    std::vector<int> sigma(n, 0);
    for (int jx = 0; jx < n; ++jx)
      if (jx != i) sigma[jx] = pinned[jx];
    double shift = pinned_shift;
    for (int b = 0; b < m; ++b) {
      int jx = free_partners[b];
      int s = ((mask >> b) & 1) ? -1 : +1;
      sigma[jx] = s;
      shift -= 0.5 * d.j(i, jx) * s;
    }
    merge_line(ion_lines, i + 1, base + shift, sigma);
  }
  out.insert(out.end(), ion_lines.begin(), ion_lines.end());
}

}  // namespace

std::vector<SpectralLine> full_spectrum(const ChainConfig& config) {
  validate(config);
  ChainData d = chain_data(config);
  const int n = config.n_ions;
  std::vector<SpectralLine> lines;
  std::vector<int> pinned(n, 0);
  for (int i = 0; i < n; ++i) {
    std::vector<int> partners;
    for (int jx = 0; jx < n; ++jx)
      if (jx != i) partners.push_back(jx);
    enumerate_ion(config, d, i, partners, pinned, lines);
  }
  sort_lines(lines);
  return lines;
}

std::vector<SpectralLine> active_spectrum(const ChainConfig& config) {
  validate(config);
  std::vector<int> active = config.active;
  if (active.empty())
    for (int ion = 1; ion <= config.n_ions; ++ion) active.push_back(ion);
  require(!active.empty(), "active set must be non-empty");

  ChainData d = chain_data(config);
  const int n = config.n_ions;
  std::vector<bool> is_active(n, false);
  for (int ion : active) is_active[ion - 1] = true;

  const int passive_sigma = config.passive_m_s > 0.0 ? +1 : -1;
  std::vector<int> pinned(n, 0);
  for (int jx = 0; jx < n; ++jx)
    if (!is_active[jx]) pinned[jx] = passive_sigma;

  std::vector<SpectralLine> lines;
  for (int i = 0; i < n; ++i) {
    if (!is_active[i]) continue;
    std::vector<int> partners;
    for (int jx = 0; jx < n; ++jx)
      if (jx != i && is_active[jx]) partners.push_back(jx);
    enumerate_ion(config, d, i, partners, pinned, lines);
  }
  sort_lines(lines);
  return lines;
}

double addressing_separation(const ChainConfig& config) {
  validate(config);
  CrystalConfiguration crystal = equilibrium_positions(config.n_ions);
  Eigen::VectorXd z = physical_positions(crystal, config.species, config.nu_z);
  double min_gap = z[1] - z[0];
  for (int i = 1; i + 1 < z.size(); ++i) min_gap = std::min(min_gap, z[i + 1] - z[i]);
  return config.species.gamma_s * config.gradient * min_gap;
}

}  // namespace iongrad
