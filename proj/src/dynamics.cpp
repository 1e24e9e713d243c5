#include "iongrad/dynamics.hpp"

#include <cmath>
#include <complex>

#include "iongrad/errors.hpp"

namespace iongrad {

namespace {
constexpr std::complex<double> im{0.0, 1.0};
}  // namespace

SingleIonHamiltonian single_ion_hamiltonian(const IonSpecies& species, double b_field,
                                            SpinModel model) {
  switch (model) {
    case SpinModel::exact:
      return exact_hamiltonian(species, b_field);
    case SpinModel::natural:
      return high_field_hamiltonian(species, b_field);
    case SpinModel::matched:
      return matched_high_field_hamiltonian(species, b_field);
    case SpinModel::fitted:
      return fitted_high_field_hamiltonian(species, b_field);
  }
  throw_validation("unknown spin model");
}

bool Pulse::is_pi_pulse() const {
  return std::abs(rabi * duration - constants::pi) <= 1e-9;
}

Pulse with_rabi(const Pulse& p, double rabi) {
  require(p.rabi > 0.0 && rabi > 0.0, "Rabi rates must be positive");
  Pulse q = p;
  q.duration = p.rabi * p.duration / rabi;
  q.rabi = rabi;
  return q;
}

Eigen::Matrix4d drive_operator(DriveTarget target) {
  return target == DriveTarget::nuclear ? nuclear_x() : electron_x();
}

namespace {

// Eigenframe of the free Hamiltonian plus the drive operator expressed in it.
struct Frame {
  Eigen::Vector4d e;   // eigenvalues, rad/s
  Eigen::Matrix4d v;   // orthogonal eigenvector columns
  Eigen::Matrix4d x;   // drive operator in the eigenbasis
};

Frame interaction_frame(const DrivenHamiltonian& driven) {
  require(driven.h0.allFinite(), "free Hamiltonian must be finite");
  require((driven.h0 - driven.h0.transpose()).cwiseAbs().maxCoeff() <=
              1e-12 * (1.0 + driven.h0.cwiseAbs().maxCoeff()),
          "free Hamiltonian must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(driven.h0);
  if (es.info() != Eigen::Success)
    throw_numerical("eigendecomposition of the free Hamiltonian failed");
  Frame f;
  f.e = es.eigenvalues();
  f.v = es.eigenvectors();
  f.x = f.v.transpose() * drive_operator(driven.pulse.target) * f.v;
  return f;
}

void check_pulse(const Pulse& p) {
  require(std::isfinite(p.carrier) && std::isfinite(p.phase), "pulse carrier/phase must be finite");
  require(std::isfinite(p.rabi) && p.rabi >= 0.0, "Rabi rate must be finite and non-negative");
}

// psi <- exp(a) psi by scaled Taylor summation; a is anti-Hermitian with small
// norm per substep, so the series is short and stable.
void apply_exponential(const Matrix4c& a, Vector4c& psi) {
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int substeps = norm > 0.25 ? static_cast<int>(std::ceil(norm / 0.25)) : 1;
  Matrix4c as = a / static_cast<double>(substeps);
  for (int s = 0; s < substeps; ++s) {
    Vector4c term = psi;
    Vector4c acc = psi;
    for (int k = 1; k <= 40; ++k) {
      term = (as * term) / static_cast<double>(k);
      acc += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-17) break;
    }
    psi = acc;
  }
}

// Midpoint-exponential sweep with n uniform steps, in the interaction picture of
// the eigenframe: per step, psi <- exp(-i H_I(t_mid) dt) psi with
// H_I(t)_{ab} = 2 rabi cos(carrier t + phase) x_{ab} exp(i (e_a - e_b) t).
Vector4c advance(const Frame& f, const Pulse& p, double duration, long n,
                 Vector4c psi) {
  const double dt = duration / static_cast<double>(n);
  Matrix4c a;
  std::complex<double> ph[4];
  for (long s = 0; s < n; ++s) {
    const double tm = (static_cast<double>(s) + 0.5) * dt;
    const double c = 2.0 * p.rabi * std::cos(p.carrier * tm + p.phase);
    for (int k = 0; k < 4; ++k) ph[k] = std::polar(1.0, f.e[k] * tm);
    for (int r = 0; r < 4; ++r)
      for (int q = 0; q < 4; ++q)
        a(r, q) = (-im * dt * c) * f.x(r, q) * ph[r] * std::conj(ph[q]);
    apply_exponential(a, psi);
  }
  return psi;
}

// Interaction picture back to the lab frame (still in the eigenbasis).
Vector4c to_lab(const Frame& f, double t, const Vector4c& psi_interaction) {
  Vector4c out;
  for (int k = 0; k < 4; ++k)
    out[k] = std::polar(1.0, -f.e[k] * t) * psi_interaction[k];
  return out;
}

}  // namespace

Vector4c evolve(const Vector4c& psi0, const DrivenHamiltonian& driven, double duration,
                const EvolveOptions& options) {
  require(std::isfinite(duration) && duration >= 0.0, "duration must be non-negative");
  require(std::abs(psi0.norm() - 1.0) <= 1e-9, "initial state must be normalized");
  check_pulse(driven.pulse);
  require(options.tolerance > 0.0, "certification tolerance must be positive");
  require(options.min_steps >= 1 && options.max_steps >= options.min_steps,
          "step ladder bounds must satisfy 1 <= min_steps <= max_steps");

  if (duration == 0.0) return psi0;

  Frame f = interaction_frame(driven);
  Vector4c psi_eig = f.v.transpose() * psi0;

  if (options.fixed_steps > 0) {
    Vector4c psi = advance(f, driven.pulse, duration, options.fixed_steps, psi_eig);
    return f.v * to_lab(f, duration, psi);
  }

  // First rung: enough steps that the fastest integrand phase advances by at
  // most ~1.5 rad per step (the ladder then certifies by doubling).
  const double spread = f.e.maxCoeff() - f.e.minCoeff();
  const double fastest = spread + std::abs(driven.pulse.carrier);
  long n = options.min_steps;
  const double needed = duration * fastest / 1.5;
  while (static_cast<double>(n) < needed && n <= options.max_steps / 2) n *= 2;

  Vector4c prev = advance(f, driven.pulse, duration, n, psi_eig);
  while (n <= options.max_steps / 2) {
    n *= 2;
    Vector4c cur = advance(f, driven.pulse, duration, n, psi_eig);
    if ((cur - prev).cwiseAbs().maxCoeff() <= options.tolerance)
      return f.v * to_lab(f, duration, cur);
    prev = cur;
  }
  throw_numerical("time evolution did not certify to tolerance within the step budget");
}

Matrix4c propagator(const DrivenHamiltonian& driven, double duration,
                    const EvolveOptions& options) {
  Matrix4c u;
  for (int k = 0; k < 4; ++k) {
    Vector4c basis = Vector4c::Zero();
    basis[k] = 1.0;
    u.col(k) = evolve(basis, driven, duration, options);
  }
  return u;
}

Matrix4c rwa_propagator(const DrivenHamiltonian& driven, double duration) {
  require(std::isfinite(duration) && duration >= 0.0, "duration must be non-negative");
  check_pulse(driven.pulse);
  const Pulse& p = driven.pulse;
  require(p.carrier > 0.0, "rotating frame needs a positive carrier");

  Frame f = interaction_frame(driven);

  // Integer grading of the levels in carrier quanta; drive elements between
  // adjacent grades are co-rotating (kept), all others counter-rotating (dropped).
  const double e_min = f.e.minCoeff();
  long kappa[4];
  for (int k = 0; k < 4; ++k) kappa[k] = std::lround((f.e[k] - e_min) / p.carrier);

  Matrix4c h = Matrix4c::Zero();
  for (int k = 0; k < 4; ++k)
    h(k, k) = f.e[k] - static_cast<double>(kappa[k]) * p.carrier;
  for (int r = 0; r < 4; ++r) {
    for (int q = 0; q < 4; ++q) {
      if (r == q) continue;
      long dk = kappa[r] - kappa[q];
      if (dk == 1)
        h(r, q) = p.rabi * f.x(r, q) * std::polar(1.0, -p.phase);
      else if (dk == -1)
        h(r, q) = p.rabi * f.x(r, q) * std::polar(1.0, p.phase);
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
  if (es.info() != Eigen::Success)
    throw_numerical("eigendecomposition of the rotating-frame Hamiltonian failed");
  Vector4c phases;
  for (int k = 0; k < 4; ++k)
    phases[k] = std::polar(1.0, -es.eigenvalues()[k] * duration);
  Matrix4c u_rot = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  // Undo the rotating-frame transform at time t = duration, then leave the
  // eigenbasis: U_lab = V diag(e^{-i kappa w T}) U_rot V^T.
  Vector4c unwind;
  for (int k = 0; k < 4; ++k)
    unwind[k] = std::polar(1.0, -static_cast<double>(kappa[k]) * p.carrier * duration);
  return f.v * (unwind.asDiagonal() * u_rot) * f.v.transpose();
}

namespace {

Pulse conditional_pulse(const IonSpecies& species, double b_field, SpinModel model,
                        double rabi, DriveTarget target, int upper, int lower) {
  validate(species);
  require(species.nuclear_spin == 0.5, "conditional pulses require nuclear spin 1/2");
  if (b_field < 0.5)
    throw_regime("field too low for frequency-selective pulses (need B >= 0.5 T)");
  if (rabi == 0.0) rabi = species.hyperfine_a / 2000.0;
  require(rabi > 0.0, "Rabi rate must be positive");

  HyperfineSpectrum s = diagonalize(single_ion_hamiltonian(species, b_field, model));
  Pulse p;
  p.carrier = s.energy[upper] - s.energy[lower];
  p.rabi = rabi;
  p.duration = constants::pi / rabi;
  p.phase = 0.0;
  p.target = target;
  p.levels = {upper, lower};
  return p;
}

}  // namespace

Pulse cnot_si_pulse(const IonSpecies& species, double b_field, SpinModel model,
                    double rabi) {
  return conditional_pulse(species, b_field, model, rabi, DriveTarget::nuclear,
                           basis_uu, basis_ud);
}

Pulse cnot_is_pulse(const IonSpecies& species, double b_field, SpinModel model,
                    double rabi) {
  return conditional_pulse(species, b_field, model, rabi, DriveTarget::electron,
                           basis_uu, basis_du);
}

std::vector<Pulse> swap_sequence(const IonSpecies& species, double b_field,
                                 SpinModel model, SwapOrder order, double rabi) {
  std::vector<Pulse> seq;
  Pulse si = cnot_si_pulse(species, b_field, model, rabi);
  Pulse is = cnot_is_pulse(species, b_field, model, rabi);
  if (order == SwapOrder::si_is_si) {
    seq = {si, is, si};
  } else {
    seq = {is, si, is};
  }
  return seq;
}

std::vector<FidelityPoint> cnot_fidelity_curve(const IonSpecies& species,
                                               const std::vector<double>& b_fields,
                                               SpinModel model, double rabi,
                                               int initial,
                                               const EvolveOptions& options) {
  require(model != SpinModel::exact,
          "fidelity compares a secular model against the exact evolution");
  require(initial >= basis_uu && initial <= basis_dd, "initial level out of range");

  std::vector<FidelityPoint> curve;
  curve.reserve(b_fields.size());
  for (double b : b_fields) {
    try {
      Pulse pulse = cnot_si_pulse(species, b, model, rabi);
      Vector4c psi0 = Vector4c::Zero();
      psi0[initial] = 1.0;
      DrivenHamiltonian exact{exact_hamiltonian(species, b).matrix, pulse};
      DrivenHamiltonian secular{single_ion_hamiltonian(species, b, model).matrix, pulse};
      Vector4c psi_exact = evolve(psi0, exact, pulse.duration, options);
      Vector4c psi_secular = evolve(psi0, secular, pulse.duration, options);
      curve.push_back({b, std::norm(psi_secular.dot(psi_exact))});
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (fidelity point B = " +
                                std::to_string(b) + " T)");
    }
  }
  return curve;
}

Matrix4c two_qubit_conditional_phase(double j_pair, double duration) {
  require(j_pair > 0.0, "pair coupling must be positive");
  require(std::isfinite(duration) && duration >= 0.0, "duration must be non-negative");
  const double alpha = j_pair * duration / 8.0;
  Matrix4c u = Matrix4c::Zero();
  u(0, 0) = std::polar(1.0, alpha);
  u(1, 1) = std::polar(1.0, -alpha);
  u(2, 2) = std::polar(1.0, -alpha);
  u(3, 3) = std::polar(1.0, alpha);
  return u;
}

double entangling_time(double j_pair) {
  require(j_pair > 0.0, "pair coupling must be positive");
  return constants::two_pi / j_pair;
}

}  // namespace iongrad
