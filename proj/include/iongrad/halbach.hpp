#pragma once

#include <optional>

namespace iongrad {

// Halbach dipole magnet built from material with remanence br, inner bore radius
// r_inner and outer radius r_outer (meters). Optional segmentation into n
// uniformly magnetized wedges (n >= 4) and an optional finite half-length z0.
// shape = sphere describes the spherical (ideal, non-segmented) variant.
enum class HalbachShape { cylinder, sphere };

struct HalbachGeometry {
  double remanence_br = 0.0;  // T
  double r_inner = 0.0;       // m
  double r_outer = 0.0;       // m
  std::optional<int> n_segments;   // empty = ideal continuous magnetization
  std::optional<double> half_length;  // z0, m; empty = infinitely long
  HalbachShape shape = HalbachShape::cylinder;
};

void validate(const HalbachGeometry& g);

// Infinite ideal cylinder: B = Br * ln(r_outer / r_inner). Requires an ideal
// (non-segmented, infinite) cylinder geometry.
double ideal_cylinder_field(const HalbachGeometry& g);

// Field reduction factor of an n-segment cylinder: sin(2 pi/n) / (2 pi/n).
double segment_factor(int n_segments);

// Segmented infinite cylinder: ideal value times the segment factor.
double segmented_cylinder_field(const HalbachGeometry& g);

// Cylinder of half-length z0: B = Br * (ln(r_o/r_i) - f(z0)) with
//   f(z0) = z0/(2 sqrt(z0^2 + r_o^2)) - z0/(2 sqrt(z0^2 + r_i^2))
//         + ln( (z0 + sqrt(z0^2 + r_o^2)) / (z0 + sqrt(z0^2 + r_i^2)) ),
// which vanishes as z0 -> inf (ideal limit) and tends to ln(r_o/r_i) as z0 -> 0
// (vanishing magnet).
double finite_length_field(const HalbachGeometry& g);
double finite_length_reduction(double z0, double r_inner, double r_outer);

// Ideal sphere: exactly 4/3 of the ideal cylinder with the same radii.
double sphere_field(const HalbachGeometry& g);

// Linear remanence derating: br * (1 + coefficient * delta_t) with the NdFeB
// temperature coefficient -0.1 %/K by default.
double derated_remanence(double br, double delta_t_kelvin,
                         double coefficient_per_kelvin = -1e-3);

}  // namespace iongrad
