#include "iongrad/crystal.hpp"

#include <cmath>

#include "iongrad/errors.hpp"

namespace iongrad {

namespace {

Eigen::VectorXd potential_gradient(const Eigen::VectorXd& u) {
  int n = static_cast<int>(u.size());
  Eigen::VectorXd g = u;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = u[i] - u[j];
      g[i] -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  }
  return g;
}

}  // namespace

Eigen::MatrixXd potential_hessian(const Eigen::VectorXd& u) {
  int n = static_cast<int>(u.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double c = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
      h(i, j) = -c;
      h(i, i) += c;
    }
  }
  return h;
}

CrystalConfiguration equilibrium_positions(int n) {
  require(n >= 2 && n <= 20, "ion count must be between 2 and 20");

  // Uniform-spacing initial guess; the fitted prefactor keeps Newton in the
  // basin of the ordered equilibrium for every n up to the cap.
  double spacing = 2.018 / std::pow(n, 0.559);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = (i - 0.5 * (n - 1)) * spacing;

  constexpr int budget = 200;
  constexpr double threshold = 1e-12;
  int it = 0;
  double gnorm = potential_gradient(u).lpNorm<Eigen::Infinity>();
  for (; it < budget && gnorm >= threshold; ++it) {
    Eigen::VectorXd g = potential_gradient(u);
    Eigen::VectorXd step = potential_hessian(u).ldlt().solve(-g);
    double alpha = 1.0;
    Eigen::VectorXd next = u + step;
    double next_norm = potential_gradient(next).lpNorm<Eigen::Infinity>();
    while (alpha > 1e-4 && next_norm > gnorm) {
      alpha *= 0.5;
      next = u + alpha * step;
      next_norm = potential_gradient(next).lpNorm<Eigen::Infinity>();
    }
    u = next;
    gnorm = next_norm;
  }
  if (gnorm >= threshold) {
    throw_numerical("crystal equilibrium did not converge in " +
                    std::to_string(budget) + " iterations (residual " +
                    std::to_string(gnorm) + ")");
  }
  u.array() -= u.mean();

  CrystalConfiguration config;
  config.positions = u;
  config.residual = potential_gradient(u).lpNorm<Eigen::Infinity>();
  config.iterations = it;
  return config;
}

NormalModes normal_modes(const CrystalConfiguration& crystal) {
  Eigen::MatrixXd h = potential_hessian(crystal.positions);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw_numerical("normal-mode eigendecomposition failed");
  }
  NormalModes modes;
  modes.mu = solver.eigenvalues();
  modes.d = solver.eigenvectors();
  // Deterministic sign convention: the largest-magnitude component of each mode
  // vector is positive (makes column 0 the +1/sqrt(n) uniform vector).
  for (int l = 0; l < modes.d.cols(); ++l) {
    int imax = 0;
    modes.d.col(l).cwiseAbs().maxCoeff(&imax);
    if (modes.d(imax, l) < 0) modes.d.col(l) *= -1.0;
  }
  return modes;
}

std::vector<Frequency> mode_frequencies(const NormalModes& modes, Frequency nu_z) {
  require(nu_z.rad_per_s() > 0.0, "axial frequency must be positive");
  std::vector<Frequency> out;
  out.reserve(modes.mu.size());
  for (int l = 0; l < modes.mu.size(); ++l) {
    out.push_back(Frequency::angular(nu_z.rad_per_s() * std::sqrt(modes.mu[l])));
  }
  return out;
}

Eigen::VectorXd physical_positions(const CrystalConfiguration& crystal,
                                   const IonSpecies& species, Frequency nu_z) {
  return ion_length_scale(species, nu_z) * crystal.positions;
}

double min_spacing(const IonSpecies& species, Frequency nu_z, int n) {
  CrystalConfiguration config = equilibrium_positions(n);
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i) {
    gap = std::min(gap, config.positions[i + 1] - config.positions[i]);
  }
  return ion_length_scale(species, nu_z) * gap;
}

}  // namespace iongrad
