#include "iongrad/constants.hpp"

#include <cmath>

#include "iongrad/errors.hpp"

namespace iongrad {

IonSpecies yb171() {
  IonSpecies s;
  s.name = "yb171";
  s.mass = 170.936 * constants::atomic_mass_unit;
  s.nuclear_spin = 0.5;
  s.gamma_s = Frequency::ghz(28.0).rad_per_s();
  s.gamma_i = Frequency::mhz(-7.5).rad_per_s();
  s.hyperfine_a = Frequency::ghz(12.645).rad_per_s();
  return s;
}

void validate(const IonSpecies& s) {
  require(s.mass > 0.0, "species mass must be positive");
  require(s.hyperfine_a != 0.0, "species hyperfine constant must be nonzero");
  double twice = 2.0 * s.nuclear_spin;
  bool half_integer = std::abs(twice - std::round(twice)) < 1e-12 &&
                      std::lround(std::round(twice)) % 2 == 1;
  require(half_integer && s.nuclear_spin > 0.0 && s.nuclear_spin <= 3.5,
          "species nuclear spin must be one of 1/2, 3/2, 5/2, 7/2");
}

double ion_length_scale(const IonSpecies& s, Frequency nu_z) {
  validate(s);
  require(nu_z.rad_per_s() > 0.0, "axial frequency must be positive");
  double w = nu_z.rad_per_s();
  return std::cbrt(constants::coulomb_coefficient / (s.mass * w * w));
}

}  // namespace iongrad
