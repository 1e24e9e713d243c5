#include "iongrad/hyperfine.hpp"

#include <algorithm>
#include <cmath>

#include "iongrad/errors.hpp"

namespace iongrad {

namespace {

void require_spin_half(const IonSpecies& s) {
  validate(s);
  if (s.nuclear_spin != 0.5) {
    throw_validation("only nuclear spin 1/2 is supported by the spin modules (got I = " +
                     std::to_string(s.nuclear_spin) + ")");
  }
}

}  // namespace

std::string basis_label(int index) {
  switch (index) {
    case basis_uu: return "|+1/2,+1/2>";
    case basis_ud: return "|+1/2,-1/2>";
    case basis_du: return "|-1/2,+1/2>";
    case basis_dd: return "|-1/2,-1/2>";
  }
  throw_validation("basis index out of range");
}

Eigen::Matrix4d electron_z() {
  return Eigen::Vector4d(0.5, 0.5, -0.5, -0.5).asDiagonal();
}

Eigen::Matrix4d nuclear_z() {
  return Eigen::Vector4d(0.5, -0.5, 0.5, -0.5).asDiagonal();
}

Eigen::Matrix4d electron_x() {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(basis_uu, basis_du) = m(basis_du, basis_uu) = 0.5;
  m(basis_ud, basis_dd) = m(basis_dd, basis_ud) = 0.5;
  return m;
}

Eigen::Matrix4d nuclear_x() {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(basis_uu, basis_ud) = m(basis_ud, basis_uu) = 0.5;
  m(basis_du, basis_dd) = m(basis_dd, basis_du) = 0.5;
  return m;
}

Eigen::Matrix4d spin_dot() {
  // Sz Iz is diagonal; SxIx + SyIy = (S+I- + S-I+)/2 couples the middle block.
  Eigen::Matrix4d m = Eigen::Vector4d(0.25, -0.25, -0.25, 0.25).asDiagonal();
  m(basis_ud, basis_du) = m(basis_du, basis_ud) = 0.5;
  return m;
}

SingleIonHamiltonian exact_hamiltonian(const IonSpecies& species, double b_field) {
  require_spin_half(species);
  require(b_field > 0.0, "magnetic field must be positive");
  SingleIonHamiltonian h;
  h.matrix = species.gamma_s * b_field * electron_z() +
             species.gamma_i * b_field * nuclear_z() +
             species.hyperfine_a * spin_dot();
  h.kind = HamiltonianKind::exact;
  h.b_field = b_field;
  h.hyperfine_a = species.hyperfine_a;
  return h;
}

SingleIonHamiltonian high_field_hamiltonian(double omega_s, double omega_i,
                                            double hyperfine_a, double b_field) {
  SingleIonHamiltonian h;
  h.matrix = omega_s * electron_z() + omega_i * nuclear_z() +
             hyperfine_a * Eigen::Matrix4d(electron_z() * nuclear_z());
  h.kind = HamiltonianKind::high_field;
  h.b_field = b_field;
  h.hyperfine_a = hyperfine_a;
  return h;
}

SingleIonHamiltonian high_field_hamiltonian(const IonSpecies& species, double b_field) {
  require_spin_half(species);
  require(b_field > 0.0, "magnetic field must be positive");
  return high_field_hamiltonian(species.gamma_s * b_field, species.gamma_i * b_field,
                                species.hyperfine_a, b_field);
}

HyperfineSpectrum diagonalize(const SingleIonHamiltonian& h) {
  HyperfineSpectrum spectrum;
  if (h.kind == HamiltonianKind::exact) {
    double a = h.hyperfine_a;
    // Diagonal entries determine OmegaS +- OmegaI directly.
    double sum = 2.0 * (h.matrix(basis_uu, basis_uu) - a / 4.0);   // OmegaS + OmegaI
    double diff = 2.0 * (h.matrix(basis_ud, basis_ud) + a / 4.0);  // OmegaS - OmegaI
    double r = std::hypot(diff, a);
    double theta = 0.5 * std::atan2(a, diff);
    spectrum.mixing_angle = theta;
    spectrum.energy[basis_uu] = sum / 2.0 + a / 4.0;
    spectrum.energy[basis_ud] = -a / 4.0 + r / 2.0;
    spectrum.energy[basis_du] = -a / 4.0 - r / 2.0;
    spectrum.energy[basis_dd] = -sum / 2.0 + a / 4.0;
    spectrum.states = Eigen::Matrix4d::Identity();
    double c = std::cos(theta), s = std::sin(theta);
    spectrum.states(basis_ud, basis_ud) = c;
    spectrum.states(basis_du, basis_ud) = s;
    spectrum.states(basis_ud, basis_du) = -s;
    spectrum.states(basis_du, basis_du) = c;
  } else {
    spectrum.energy = h.matrix.diagonal();
    spectrum.states = Eigen::Matrix4d::Identity();
    spectrum.mixing_angle = 0.0;
  }
  return spectrum;
}

double mixing_angle(const IonSpecies& species, double b_field) {
  return diagonalize(exact_hamiltonian(species, b_field)).mixing_angle;
}

double leakage_probability(const IonSpecies& species, double b_field) {
  double s = std::sin(mixing_angle(species, b_field));
  return s * s;
}

EffectiveLarmor matched_effective_larmor(const IonSpecies& species, double b_field) {
  require_spin_half(species);
  require(b_field > 0.0, "magnetic field must be positive");
  double omega_s = species.gamma_s * b_field;
  double omega_i = species.gamma_i * b_field;
  double r = std::hypot(omega_s - omega_i, species.hyperfine_a);
  EffectiveLarmor eff;
  eff.omega_s = 0.5 * ((omega_s + omega_i) + r);
  eff.omega_i = 0.5 * ((omega_s + omega_i) - r);
  return eff;
}

SingleIonHamiltonian matched_high_field_hamiltonian(const IonSpecies& species,
                                                    double b_field) {
  EffectiveLarmor eff = matched_effective_larmor(species, b_field);
  SingleIonHamiltonian h =
      high_field_hamiltonian(eff.omega_s, eff.omega_i, species.hyperfine_a, b_field);
  h.kind = HamiltonianKind::high_field_effective;
  return h;
}

double EffectiveRatioFit::gamma_s(double b_field) const {
  return c0_s + c1_s * std::exp(-1.5 * b_field / b1);
}

double EffectiveRatioFit::gamma_i(double b_field) const {
  return c0_i + c1_i * std::exp(-1.5 * b_field / b1);
}

EffectiveRatioFit yb171_effective_ratio_fit() {
  EffectiveRatioFit fit;
  fit.c0_s = Frequency::ghz(28.1).rad_per_s();
  fit.c1_s = Frequency::ghz(5.5).rad_per_s();
  fit.c0_i = Frequency::ghz(-0.085).rad_per_s();
  fit.c1_i = Frequency::ghz(-5.5).rad_per_s();
  fit.b1 = 1.0;
  fit.b_min = 1.0;
  fit.b_max = 5.0;
  return fit;
}

EffectiveRatios effective_ratios(double b0) {
  EffectiveRatioFit fit = yb171_effective_ratio_fit();
  if (b0 < fit.b_min || b0 > fit.b_max) {
    throw_regime("effective ratios are fitted for fields between 1 T and 5 T");
  }
  EffectiveRatios r;
  r.gamma_s = fit.gamma_s(b0);
  r.gamma_i = fit.gamma_i(b0);
  r.b_min = fit.b_min;
  r.b_max = fit.b_max;
  return r;
}

SingleIonHamiltonian fitted_high_field_hamiltonian(const IonSpecies& species,
                                                   double b_field) {
  require_spin_half(species);
  EffectiveRatios r = effective_ratios(b_field);
  SingleIonHamiltonian h = high_field_hamiltonian(
      r.gamma_s * b_field, r.gamma_i * b_field, species.hyperfine_a, b_field);
  h.kind = HamiltonianKind::high_field_effective;
  return h;
}

namespace {

// The four intra-manifold splittings (two nuclear flips, two electron flips)
// of a secular Hamiltonian with Larmor frequencies (omega_s, omega_i).
Eigen::Vector4d secular_splittings(double omega_s, double omega_i, double a) {
  return Eigen::Vector4d(a / 2.0 + omega_i, a / 2.0 - omega_i,
                         omega_s + a / 2.0, omega_s - a / 2.0);
}

}  // namespace

RatioRefitResult refit_effective_ratios(const IonSpecies& species,
                                        const std::vector<double>& b_grid) {
  require_spin_half(species);
  require(b_grid.size() >= 5, "refit grid needs at least 5 field points");
  for (double b : b_grid) {
    require(b > 0.5 && b < 10.0, "refit grid fields must lie within (0.5, 10) T");
  }

  // Linear least squares on the splittings: residual of each splitting equals
  // B * (gamma fit error), so the design matrix rows are (B, B e^{-1.5 B/b1})
  // against the matched effective Larmor frequencies.
  const double b1 = 1.0;
  int npts = static_cast<int>(b_grid.size());
  Eigen::MatrixXd design(npts, 2);
  Eigen::VectorXd ys(npts), yi(npts);
  for (int k = 0; k < npts; ++k) {
    double b = b_grid[k];
    design(k, 0) = b;
    design(k, 1) = b * std::exp(-1.5 * b / b1);
    EffectiveLarmor eff = matched_effective_larmor(species, b);
    ys[k] = eff.omega_s;
    yi[k] = eff.omega_i;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 2) throw_numerical("refit design matrix is singular");
  Eigen::Vector2d cs = qr.solve(ys);
  Eigen::Vector2d ci = qr.solve(yi);

  RatioRefitResult result;
  result.refit.c0_s = cs[0];
  result.refit.c1_s = cs[1];
  result.refit.c0_i = ci[0];
  result.refit.c1_i = ci[1];
  result.refit.b1 = b1;
  result.refit.b_min = *std::min_element(b_grid.begin(), b_grid.end());
  result.refit.b_max = *std::max_element(b_grid.begin(), b_grid.end());

  EffectiveRatioFit published = yb171_effective_ratio_fit();
  double a = species.hyperfine_a;
  for (double b : b_grid) {
    // Reference: level differences of the full Hamiltonian, computed through
    // the eigenvalue path rather than any secular closed form.
    HyperfineSpectrum spectrum = diagonalize(exact_hamiltonian(species, b));
    const Eigen::Vector4d& e = spectrum.energy;
    Eigen::Vector4d exact(e[basis_uu] - e[basis_ud], e[basis_dd] - e[basis_du],
                          e[basis_uu] - e[basis_du], e[basis_ud] - e[basis_dd]);
    EffectiveLarmor eff = matched_effective_larmor(species, b);
    Eigen::Vector4d from_refit = secular_splittings(
        result.refit.gamma_s(b) * b, result.refit.gamma_i(b) * b, a);
    Eigen::Vector4d from_published =
        secular_splittings(published.gamma_s(b) * b, published.gamma_i(b) * b, a);
    Eigen::Vector4d from_matched = secular_splittings(eff.omega_s, eff.omega_i, a);
    for (int t = 0; t < 4; ++t) {
      result.max_splitting_residual_refit =
          std::max(result.max_splitting_residual_refit,
                   std::abs(from_refit[t] / exact[t] - 1.0));
      result.max_splitting_residual_published =
          std::max(result.max_splitting_residual_published,
                   std::abs(from_published[t] / exact[t] - 1.0));
      result.max_splitting_residual_matched =
          std::max(result.max_splitting_residual_matched,
                   std::abs(from_matched[t] / exact[t] - 1.0));
    }
  }
  return result;
}

}  // namespace iongrad
