#include "iongrad/halbach.hpp"

#include <cmath>

#include "iongrad/constants.hpp"
#include "iongrad/errors.hpp"

namespace iongrad {

void validate(const HalbachGeometry& g) {
  require(std::isfinite(g.remanence_br) && g.remanence_br >= 0.0,
          "remanence must be finite and non-negative");
  require(std::isfinite(g.r_inner) && std::isfinite(g.r_outer),
          "radii must be finite");
  require(g.r_inner > 0.0, "inner radius must be positive");
  require(g.r_outer >= g.r_inner, "outer radius must be at least the inner radius");
  if (g.n_segments) require(*g.n_segments >= 4, "segmented magnets need at least 4 wedges");
  if (g.half_length)
    require(std::isfinite(*g.half_length) && *g.half_length > 0.0,
            "half-length must be positive");
}

double ideal_cylinder_field(const HalbachGeometry& g) {
  validate(g);
  require(g.shape == HalbachShape::cylinder, "cylinder formula needs a cylinder shape");
  require(!g.n_segments && !g.half_length,
          "ideal formula applies to the continuous, infinitely long cylinder");
  return g.remanence_br * std::log(g.r_outer / g.r_inner);
}

double segment_factor(int n_segments) {
  require(n_segments >= 4, "segmented magnets need at least 4 wedges");
  double x = constants::two_pi / static_cast<double>(n_segments);
  return std::sin(x) / x;
}

double segmented_cylinder_field(const HalbachGeometry& g) {
  validate(g);
  require(g.shape == HalbachShape::cylinder, "cylinder formula needs a cylinder shape");
  require(g.n_segments.has_value(), "segmented formula needs a segment count");
  require(!g.half_length, "segmented formula applies to the infinitely long cylinder");
  return g.remanence_br * std::log(g.r_outer / g.r_inner) * segment_factor(*g.n_segments);
}

double finite_length_reduction(double z0, double r_inner, double r_outer) {
  require(std::isfinite(z0) && z0 > 0.0, "half-length must be positive");
  require(r_inner > 0.0 && r_outer >= r_inner, "radii must satisfy 0 < r_inner <= r_outer");
  const double so = std::sqrt(z0 * z0 + r_outer * r_outer);
  const double si = std::sqrt(z0 * z0 + r_inner * r_inner);
  return z0 / (2.0 * so) - z0 / (2.0 * si) + std::log((z0 + so) / (z0 + si));
}

double finite_length_field(const HalbachGeometry& g) {
  validate(g);
  require(g.shape == HalbachShape::cylinder, "cylinder formula needs a cylinder shape");
  require(g.half_length.has_value(), "finite-length formula needs a half-length");
  require(!g.n_segments, "finite-length formula applies to the continuous cylinder");
  const double ideal = std::log(g.r_outer / g.r_inner);
  return g.remanence_br *
         (ideal - finite_length_reduction(*g.half_length, g.r_inner, g.r_outer));
}

double sphere_field(const HalbachGeometry& g) {
  validate(g);
  require(g.shape == HalbachShape::sphere, "sphere formula needs a sphere shape");
  require(!g.n_segments && !g.half_length, "sphere formula is ideal and unsegmented");
  return (4.0 / 3.0) * g.remanence_br * std::log(g.r_outer / g.r_inner);
}

double derated_remanence(double br, double delta_t_kelvin, double coefficient_per_kelvin) {
  require(std::isfinite(br) && br >= 0.0, "remanence must be finite and non-negative");
  require(std::isfinite(delta_t_kelvin), "temperature change must be finite");
  require(std::isfinite(coefficient_per_kelvin), "coefficient must be finite");
  return br * (1.0 + coefficient_per_kelvin * delta_t_kelvin);
}

}  // namespace iongrad
