#include "iongrad/pseudopotential.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "iongrad/errors.hpp"

namespace iongrad {

void validate(const RfTrapParams& p) {
  validate(p.species);
  require(p.drive.rad_per_s() > 0.0, "drive frequency must be positive");
  require(std::isfinite(p.a) && std::isfinite(p.q), "stability parameters must be finite");
  if (p.q < 0.0 || p.q >= 0.9)
    throw_regime("q outside the supported stability range [0, 0.9)");
  if (p.a + p.q * p.q / 2.0 < 0.0)
    throw_regime("a + q^2/2 < 0: no confining pseudopotential");
}

Frequency secular_frequency(const RfTrapParams& p) {
  validate(p);
  return Frequency::angular(0.5 * p.drive.rad_per_s() *
                            std::sqrt(p.a + p.q * p.q / 2.0));
}

Frequency cyclotron_frequency(const IonSpecies& species, double b_field) {
  validate(species);
  require(std::isfinite(b_field) && b_field >= 0.0,
          "field must be finite and non-negative");
  return Frequency::angular(constants::elementary_charge * b_field / species.mass);
}

ShiftedModes shifted_mode_frequencies(Frequency secular, Frequency cyclotron) {
  require(secular.rad_per_s() >= 0.0 && cyclotron.rad_per_s() >= 0.0,
          "mode inputs must be non-negative");
  const double wr = secular.rad_per_s();
  const double half_wc = 0.5 * cyclotron.rad_per_s();
  ShiftedModes m;
  m.plus = Frequency::angular(wr + half_wc);
  m.minus = Frequency::angular(wr - half_wc);
  m.destabilized = wr <= half_wc && half_wc > 0.0;
  return m;
}

ShiftedModes shifted_mode_frequencies(const RfTrapParams& p, double b_field) {
  return shifted_mode_frequencies(secular_frequency(p),
                                  cyclotron_frequency(p.species, b_field));
}

Eigen::Matrix4d radial_dynamical_matrix(double omega_r, double omega_c) {
  require(std::isfinite(omega_r) && omega_r >= 0.0, "secular frequency must be >= 0");
  require(std::isfinite(omega_c) && omega_c >= 0.0, "cyclotron frequency must be >= 0");
  const double h = 0.5 * omega_c;
  const double k = omega_r * omega_r;
  Eigen::Matrix4d m;
  // State (x, y, px, py), unit mass: radial harmonic restoring force k plus the
  // angular-momentum coupling at half the cyclotron frequency.
  m << 0.0, h, 1.0, 0.0,
      -h, 0.0, 0.0, 1.0,
      -k, 0.0, 0.0, h,
      0.0, -k, -h, 0.0;
  return m;
}

namespace {

// Diagonal similarity transform with power-of-two factors equalizing row and
// column norms (Parlett-Reinsch balancing). The canonical-variable matrix mixes
// entries of order omega^2 with entries of order 1, and Eigen's eigensolver does
// not balance internally, so without this the computed frequencies of physically
// scaled matrices (omega ~ 1e6 rad/s) lose roughly half their digits. Powers of
// two keep the transform free of rounding error.
Eigen::Matrix4d balance(Eigen::Matrix4d m) {
  bool converged = false;
  while (!converged) {
    converged = true;
    for (int i = 0; i < 4; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < 4; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double total = c + r;
      double f = 1.0;
      while (c < 0.5 * r) {
        c *= 2.0;
        r *= 0.5;
        f *= 2.0;
      }
      while (c >= 2.0 * r) {
        c *= 0.5;
        r *= 2.0;
        f *= 0.5;
      }
      if (c + r < 0.95 * total) {
        converged = false;
        m.col(i) *= f;
        m.row(i) /= f;
      }
    }
  }
  return m;
}

}  // namespace

Eigen::Vector2d dynamical_matrix_frequencies(const Eigen::Matrix4d& m) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(balance(m));
  if (es.info() != Eigen::Success)
    throw_numerical("eigendecomposition of the dynamical matrix failed");
  std::array<double, 4> w;
  for (int i = 0; i < 4; ++i) w[i] = std::abs(es.eigenvalues()[i].imag());
  std::sort(w.begin(), w.end());
  // Eigenvalues come in conjugate pairs +-i w; average each pair.
  return Eigen::Vector2d(0.5 * (w[0] + w[1]), 0.5 * (w[2] + w[3]));
}

}  // namespace iongrad
