#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "iongrad/constants.hpp"
#include "iongrad/crystal.hpp"
#include "iongrad/errors.hpp"

using namespace iongrad;

namespace {

// Independent evaluation of the dimensionless chain potential.
double chain_potential(const Eigen::VectorXd& u) {
  double v = 0.0;
  for (int i = 0; i < u.size(); ++i) v += 0.5 * u[i] * u[i];
  for (int i = 0; i < u.size(); ++i)
    for (int j = i + 1; j < u.size(); ++j) v += 1.0 / std::abs(u[i] - u[j]);
  return v;
}

}  // namespace

TEST_CASE("two-ion equilibrium is the closed form (1/2)^(2/3)") {
  CrystalConfiguration c = equilibrium_positions(2);
  double d = std::pow(0.5, 2.0 / 3.0);
  CHECK(c.positions[0] == doctest::Approx(-d).epsilon(1e-12));
  CHECK(c.positions[1] == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("frozen equilibrium positions for 3..5 ions") {
  CrystalConfiguration c3 = equilibrium_positions(3);
  CHECK(c3.positions[0] == doctest::Approx(-1.077217345016).epsilon(1e-11));
  CHECK(std::abs(c3.positions[1]) < 1e-12);
  CHECK(c3.positions[2] == doctest::Approx(1.077217345016).epsilon(1e-11));

  CrystalConfiguration c4 = equilibrium_positions(4);
  CHECK(c4.positions[1] == doctest::Approx(-0.454379280686).epsilon(1e-11));
  CHECK(c4.positions[3] == doctest::Approx(1.436801991924).epsilon(1e-11));

  CrystalConfiguration c5 = equilibrium_positions(5);
  CHECK(std::abs(c5.positions[2]) < 1e-12);
  CHECK(c5.positions[3] == doctest::Approx(0.822100756568).epsilon(1e-11));
  CHECK(c5.positions[4] == doctest::Approx(1.742903211874).epsilon(1e-11));
}

TEST_CASE("equilibrium invariants: residual, ordering, symmetry, zero mean") {
  for (int n = 2; n <= 8; ++n) {
    CAPTURE(n);
    CrystalConfiguration c = equilibrium_positions(n);
    CHECK(c.residual < 1e-10);
    CHECK(c.iterations >= 1);
    double mean = c.positions.mean();
    CHECK(std::abs(mean) < 1e-12);
    for (int i = 1; i < n; ++i) CHECK(c.positions[i] > c.positions[i - 1]);
    // mirror symmetry of the well
    for (int i = 0; i < n; ++i)
      CHECK(c.positions[i] == doctest::Approx(-c.positions[n - 1 - i]).epsilon(1e-10));
  }
}

TEST_CASE("equilibrium is a local minimum of the chain potential") {
  CrystalConfiguration c = equilibrium_positions(5);
  double v0 = chain_potential(c.positions);
  std::mt19937 rng(20260819);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd delta(5);
    for (int i = 0; i < 5; ++i) delta[i] = gauss(rng);
    delta *= 1e-3 / delta.norm();
    Eigen::VectorXd shifted = c.positions + delta;
    // keep ordering so the potential stays finite
    bool ordered = true;
    for (int i = 1; i < 5; ++i) ordered = ordered && shifted[i] > shifted[i - 1];
    if (!ordered) continue;
    CHECK(chain_potential(shifted) > v0);
  }
}

TEST_CASE("frozen mode eigenvalues; lowest mode is uniform with mu = 1") {
  CrystalConfiguration c2 = equilibrium_positions(2);
  NormalModes m2 = normal_modes(c2);
  CHECK(m2.mu[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m2.mu[1] == doctest::Approx(3.0).epsilon(1e-12));

  CrystalConfiguration c3 = equilibrium_positions(3);
  NormalModes m3 = normal_modes(c3);
  CHECK(m3.mu[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m3.mu[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m3.mu[2] == doctest::Approx(29.0 / 5.0).epsilon(1e-10));

  CrystalConfiguration c4 = equilibrium_positions(4);
  NormalModes m4 = normal_modes(c4);
  CHECK(m4.mu[2] == doctest::Approx(5.809937300562).epsilon(1e-10));
  CHECK(m4.mu[3] == doctest::Approx(9.308350249775).epsilon(1e-10));

  CrystalConfiguration c5 = equilibrium_positions(5);
  NormalModes m5 = normal_modes(c5);
  CHECK(m5.mu[2] == doctest::Approx(5.817696146417).epsilon(1e-10));
  CHECK(m5.mu[3] == doctest::Approx(9.332153338765).epsilon(1e-10));
  CHECK(m5.mu[4] == doctest::Approx(13.474837218459).epsilon(1e-10));

  // uniform center-of-mass mode, sign-fixed positive
  for (int i = 0; i < 5; ++i)
    CHECK(m5.d(i, 0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-10));
}

TEST_CASE("mode matrix is orthogonal and diagonalizes the Hessian") {
  for (int n : {2, 3, 5, 8}) {
    CAPTURE(n);
    CrystalConfiguration c = equilibrium_positions(n);
    NormalModes m = normal_modes(c);

    Eigen::MatrixXd gram = m.d.transpose() * m.d;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::MatrixXd h = potential_hessian(c.positions);
    Eigen::MatrixXd reconstructed = m.d * m.mu.asDiagonal() * m.d.transpose();
    CHECK((reconstructed - h).cwiseAbs().maxCoeff() < 1e-9);

    // Hessian positive definite at the equilibrium
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    CHECK(es.eigenvalues().minCoeff() > 0.9);

    // ascending eigenvalues
    for (int l = 1; l < n; ++l) CHECK(m.mu[l] > m.mu[l - 1]);
  }
}

TEST_CASE("mode frequencies scale as sqrt(mu) times the trap frequency") {
  CrystalConfiguration c = equilibrium_positions(3);
  NormalModes m = normal_modes(c);
  Frequency nu = Frequency::khz(600);
  std::vector<Frequency> f = mode_frequencies(m, nu);
  REQUIRE(f.size() == 3);
  for (int l = 0; l < 3; ++l)
    CHECK(f[l].rad_per_s() ==
          doctest::Approx(nu.rad_per_s() * std::sqrt(m.mu[l])).epsilon(1e-12));
}

TEST_CASE("physical positions and minimum spacing; frozen spacing values") {
  IonSpecies s = yb171();

  // 3 ions at 600 kHz: outer spacing 1.0772173 * l
  double dz = min_spacing(s, Frequency::khz(600), 3);
  CHECK(dz * 1e6 == doctest::Approx(4.1502645253).epsilon(1e-9));

  double dz4 = min_spacing(s, Frequency::khz(600), 4);
  CHECK(dz4 * 1e6 == doctest::Approx(3.5012325384).epsilon(1e-9));

  double dz200 = min_spacing(s, Frequency::khz(200), 3);
  CHECK(dz200 * 1e6 == doctest::Approx(8.6328981004).epsilon(1e-9));

  // spacing * nu_z^(2/3) is frequency independent
  double k1 = min_spacing(s, Frequency::khz(600), 3) * std::pow(600e3, 2.0 / 3.0);
  double k2 = min_spacing(s, Frequency::khz(137), 3) * std::pow(137e3, 2.0 / 3.0);
  CHECK(k1 == doctest::Approx(k2).epsilon(1e-9));

  CrystalConfiguration c = equilibrium_positions(3);
  Eigen::VectorXd z = physical_positions(c, s, Frequency::khz(600));
  double scale = ion_length_scale(s, Frequency::khz(600));
  for (int i = 0; i < 3; ++i)
    CHECK(z[i] == doctest::Approx(scale * c.positions[i]).epsilon(1e-12));
}

TEST_CASE("size limits produce typed errors") {
  CHECK_THROWS_AS(equilibrium_positions(1), Error);
  CHECK_THROWS_AS(equilibrium_positions(0), Error);
  CHECK_THROWS_AS(equilibrium_positions(-3), Error);
  CHECK_THROWS_AS(equilibrium_positions(21), Error);
  CHECK_NOTHROW(equilibrium_positions(20));
}
