#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iongrad/constants.hpp"
#include "iongrad/errors.hpp"
#include "iongrad/halbach.hpp"
#include "oracles.hpp"

using namespace iongrad;

namespace {

HalbachGeometry reference_magnet() {
  HalbachGeometry g;
  g.remanence_br = 1.23;
  g.r_inner = 0.025;
  g.r_outer = 0.25;
  return g;
}

}  // namespace

TEST_CASE("ideal cylinder: frozen value, Br linearity, ratio dependence") {
  HalbachGeometry g = reference_magnet();
  double b = ideal_cylinder_field(g);
  CHECK(b == doctest::Approx(2.8321796644).epsilon(1e-10));
  CHECK(b == doctest::Approx(g.remanence_br * std::log(10.0)).epsilon(1e-14));

  // linear in remanence
  HalbachGeometry g2 = g;
  g2.remanence_br *= 3.0;
  CHECK(ideal_cylinder_field(g2) == doctest::Approx(3.0 * b).epsilon(1e-14));

  // depends only on the radius ratio
  HalbachGeometry scaled = g;
  scaled.r_inner *= 7.0;
  scaled.r_outer *= 7.0;
  CHECK(ideal_cylinder_field(scaled) == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("segment factor: frozen values and convergence to the ideal limit") {
  CHECK(segment_factor(16) == doctest::Approx(0.974495358404).epsilon(1e-11));
  CHECK(segment_factor(4) == doctest::Approx(2.0 / constants::pi).epsilon(1e-12));

  // monotone in the segment count and -> 1
  double prev = segment_factor(4);
  for (int n : {8, 16, 32, 64, 128}) {
    double cur = segment_factor(n);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK(std::abs(segment_factor(3000) - 1.0) < 1e-6);

  HalbachGeometry g = reference_magnet();
  g.n_segments = 16;
  CHECK(segmented_cylinder_field(g) ==
        doctest::Approx(2.8321796644 * 0.974495358404).epsilon(1e-9));

  CHECK_THROWS_AS(segment_factor(3), Error);
  CHECK_THROWS_AS(segment_factor(0), Error);
}

TEST_CASE("finite length: frozen value and the closed form's quadrature oracle") {
  // frozen reduction and field at z0 = ro = 0.25 m
  double f = finite_length_reduction(0.25, 0.025, 0.25);
  CHECK(f == doctest::Approx(0.041770525203898).epsilon(1e-11));

  HalbachGeometry g = reference_magnet();
  g.half_length = 0.25;
  CHECK(finite_length_field(g) == doctest::Approx(2.780801918381882).epsilon(1e-11));

  // reconstruction from the analytic z-derivative (independent quadrature)
  for (double z0 : {0.05, 0.25, 1.0, 5.0}) {
    CAPTURE(z0);
    double closed = finite_length_reduction(z0, 0.025, 0.25);
    double quad = oracles::finite_length_reduction_quadrature(z0, 0.025, 0.25);
    CHECK(std::abs(closed - quad) < 1e-9);
  }
}

TEST_CASE("finite length limits: ideal for long magnets, zero for vanishing ones") {
  HalbachGeometry g = reference_magnet();
  double ideal = ideal_cylinder_field(g);

  g.half_length = 1e4 * g.r_outer;
  CHECK(std::abs(finite_length_field(g) / ideal - 1.0) < 1e-6);

  g.half_length = 1e-12;
  CHECK(std::abs(finite_length_field(g)) < 1e-9);

  // field grows monotonically with magnet length
  double prev = 0.0;
  for (double z0 : {0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0}) {
    g.half_length = z0;
    double b = finite_length_field(g);
    CHECK(b > prev);
    prev = b;
  }
  CHECK(prev < ideal);
}

TEST_CASE("finite length is additive over nested radial shells") {
  // splitting [ri, ro] at any rm must not change the total
  double z0 = 0.18;
  double ri = 0.025, rm = 0.09, ro = 0.25;
  double whole = std::log(ro / ri) - finite_length_reduction(z0, ri, ro);
  double inner = std::log(rm / ri) - finite_length_reduction(z0, ri, rm);
  double outer = std::log(ro / rm) - finite_length_reduction(z0, rm, ro);
  CHECK(whole == doctest::Approx(inner + outer).epsilon(1e-12));
}

TEST_CASE("sphere: exactly 4/3 of the cylinder") {
  HalbachGeometry g = reference_magnet();
  double cyl = ideal_cylinder_field(g);
  g.shape = HalbachShape::sphere;
  double sph = sphere_field(g);
  CHECK(sph / cyl == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(sph == doctest::Approx(3.7762395525).epsilon(1e-9));
}

TEST_CASE("remanence derating") {
  CHECK(derated_remanence(1.4, 0.0) == 1.4);
  CHECK(derated_remanence(1.4, 80.0) == doctest::Approx(1.4 * 0.92).epsilon(1e-14));
  CHECK(derated_remanence(1.4, -20.0) == doctest::Approx(1.4 * 1.02).epsilon(1e-14));
  CHECK(derated_remanence(1.0, 100.0, -2e-3) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK_THROWS_AS(derated_remanence(-1.0, 10.0), Error);
  CHECK_THROWS_AS(derated_remanence(1.0, std::nan("")), Error);
}

TEST_CASE("geometry validation and formula applicability") {
  HalbachGeometry g = reference_magnet();
  g.r_inner = 0.0;
  CHECK_THROWS_AS(validate(g), Error);

  g = reference_magnet();
  g.r_outer = 0.01;  // smaller than r_inner
  CHECK_THROWS_AS(validate(g), Error);

  g = reference_magnet();
  g.remanence_br = -0.5;
  CHECK_THROWS_AS(validate(g), Error);

  g = reference_magnet();
  g.n_segments = 3;
  CHECK_THROWS_AS(validate(g), Error);

  g = reference_magnet();
  g.half_length = 0.0;
  CHECK_THROWS_AS(validate(g), Error);

  // formula/geometry mismatches
  g = reference_magnet();
  g.n_segments = 8;
  CHECK_THROWS_AS(ideal_cylinder_field(g), Error);
  CHECK_THROWS_AS(finite_length_field(g), Error);

  g = reference_magnet();
  g.half_length = 0.1;
  CHECK_THROWS_AS(ideal_cylinder_field(g), Error);
  CHECK_THROWS_AS(segmented_cylinder_field(g), Error);

  g = reference_magnet();
  g.shape = HalbachShape::sphere;
  g.n_segments = 8;
  CHECK_THROWS_AS(sphere_field(g), Error);

  g = reference_magnet();
  CHECK_THROWS_AS(sphere_field(g), Error);  // cylinder shape
  CHECK_THROWS_AS(segmented_cylinder_field(g), Error);  // no segment count
  CHECK_THROWS_AS(finite_length_reduction(-1.0, 0.025, 0.25), Error);
}
