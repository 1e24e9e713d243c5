#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "iongrad/constants.hpp"
#include "iongrad/coupling.hpp"
#include "iongrad/crystal.hpp"
#include "iongrad/errors.hpp"
#include "iongrad/spectrum.hpp"

using namespace iongrad;

namespace {

ChainConfig standard_config(int n) {
  ChainConfig c;
  c.species = yb171();
  c.n_ions = n;
  c.b0 = 1.0;
  c.gradient = 500.0;
  c.nu_z = Frequency::khz(600);
  return c;
}

std::map<int, std::vector<SpectralLine>> by_ion(const std::vector<SpectralLine>& lines) {
  std::map<int, std::vector<SpectralLine>> groups;
  for (const SpectralLine& line : lines) groups[line.ion].push_back(line);
  return groups;
}

double weighted_center(const std::vector<SpectralLine>& lines) {
  double num = 0.0;
  int den = 0;
  for (const SpectralLine& line : lines) {
    num += line.frequency * line.weight;
    den += line.weight;
  }
  return num / den;
}

}  // namespace

TEST_CASE("three-ion full line list: counts, weights, frozen center frequency") {
  ChainConfig c = standard_config(3);
  std::vector<SpectralLine> lines = full_spectrum(c);

  // middle ion's two symmetric conditions merge: 4 + 3 + 4 lines
  CHECK(lines.size() == 11);
  auto groups = by_ion(lines);
  REQUIRE(groups.size() == 3);
  CHECK(groups[1].size() == 4);
  CHECK(groups[2].size() == 3);
  CHECK(groups[3].size() == 4);

  // each ion's conditions sum to 2^(n-1)
  for (auto& [ion, g] : groups) {
    CAPTURE(ion);
    int total = 0;
    for (const SpectralLine& line : g) total += line.weight;
    CHECK(total == 4);
  }

  // the middle ion's merged line has weight 2 and sits exactly on the
  // zero-gradient electron-flip frequency (its couplings cancel pairwise)
  const SpectralLine* merged = nullptr;
  for (const SpectralLine& line : groups[2])
    if (line.weight == 2) merged = &line;
  REQUIRE(merged != nullptr);
  CHECK(merged->frequency / (constants::two_pi * 1e9) ==
        doctest::Approx(35.683613172593).epsilon(1e-11));

  // lines are sorted by frequency
  for (size_t k = 1; k < lines.size(); ++k)
    CHECK(lines[k].frequency >= lines[k - 1].frequency);

  // conditioning vectors: 0 at the ion itself, +-1 elsewhere
  for (const SpectralLine& line : lines) {
    REQUIRE(line.sigma.size() == 3);
    CHECK(line.sigma[line.ion - 1] == 0);
    for (int j = 0; j < 3; ++j)
      if (j != line.ion - 1) CHECK(std::abs(line.sigma[j]) == 1);
  }
}

TEST_CASE("line splittings reproduce the coupling matrix") {
  ChainConfig c = standard_config(3);
  std::vector<SpectralLine> lines = full_spectrum(c);
  auto groups = by_ion(lines);
  Eigen::MatrixXd j = j_matrix(c.species, 3, c.nu_z, c.gradient).j;

  // ion 1 extremes: both partners flipped moves the line by J12 + J13
  std::vector<SpectralLine>& g1 = groups[1];
  double span = g1.back().frequency - g1.front().frequency;
  CHECK(span == doctest::Approx(j(0, 1) + j(0, 2)).epsilon(1e-9));

  // partner-flip displacement: adjacent span of ion 2 equals J12 (= J23)
  std::vector<SpectralLine>& g2 = groups[2];
  CHECK(g2[1].frequency - g2[0].frequency == doctest::Approx(j(0, 1)).epsilon(1e-9));
  CHECK(g2[2].frequency - g2[1].frequency == doctest::Approx(j(1, 2)).epsilon(1e-9));

  // mirror symmetry of each ion's shifts about the weighted center
  for (auto& [ion, g] : groups) {
    CAPTURE(ion);
    double center = weighted_center(g);
    size_t m = g.size();
    for (size_t k = 0; k < m; ++k) {
      double lo = g[k].frequency - center;
      double hi = g[m - 1 - k].frequency - center;
      CHECK(lo == doctest::Approx(-hi).epsilon(1e-9).scale(std::abs(center)));
    }
  }
}

TEST_CASE("group separations equal the gradient shift between neighbors") {
  for (int n : {3, 4}) {
    CAPTURE(n);
    ChainConfig c = standard_config(n);
    std::vector<SpectralLine> lines = full_spectrum(c);
    auto groups = by_ion(lines);

    Eigen::VectorXd z =
        physical_positions(equilibrium_positions(n), c.species, c.nu_z);
    double slope = c.species.gamma_s * c.gradient;

    for (int i = 1; i < n; ++i) {
      double measured = weighted_center(groups[i + 1]) - weighted_center(groups[i]);
      double expected = slope * (z[i] - z[i - 1]);
      CHECK(std::abs(measured / expected - 1.0) < 1e-9);
    }
  }

  // frozen smallest separation for 3 ions at 500 T/m, 600 kHz
  ChainConfig c = standard_config(3);
  CHECK(addressing_separation(c) / (constants::two_pi * 1e6) ==
        doctest::Approx(58.1037033542).epsilon(1e-9));
}

TEST_CASE("active pair: two conditional lines per ion, contained in the full list") {
  ChainConfig c = standard_config(3);
  c.active = {2, 3};
  std::vector<SpectralLine> active = active_spectrum(c);
  CHECK(active.size() == 4);
  auto groups = by_ion(active);
  REQUIRE(groups.size() == 2);
  CHECK(groups[2].size() == 2);
  CHECK(groups[3].size() == 2);

  // passive slot pinned, partner slot enumerated
  for (const SpectralLine& line : active) {
    CHECK(line.sigma[0] == +1);  // passive ion 1 at m_S = +1/2
    CHECK(line.sigma[line.ion - 1] == 0);
    CHECK(line.weight == 1);
  }

  // the conditional splitting of each active ion equals its coupling to the
  // other active ion
  Eigen::MatrixXd j = j_matrix(c.species, 3, c.nu_z, c.gradient).j;
  CHECK(groups[2][1].frequency - groups[2][0].frequency ==
        doctest::Approx(j(1, 2)).epsilon(1e-9));
  CHECK(groups[3][1].frequency - groups[3][0].frequency ==
        doctest::Approx(j(1, 2)).epsilon(1e-9));

  // every active line appears in the full list (same ion, same frequency)
  std::vector<SpectralLine> full = full_spectrum(c);
  for (const SpectralLine& line : active) {
    bool found = false;
    for (const SpectralLine& f : full)
      if (f.ion == line.ion &&
          std::abs(f.frequency - line.frequency) <= constants::two_pi * 1e-3)
        found = true;
    CHECK(found);
  }
}

TEST_CASE("four-ion chain: full conditions collapse from 8 to 2 per active ion") {
  ChainConfig c = standard_config(4);
  std::vector<SpectralLine> full = full_spectrum(c);
  // all couplings of every ion are distinct here, so nothing merges
  CHECK(full.size() == 32);
  auto fg = by_ion(full);
  for (auto& [ion, g] : fg) {
    CAPTURE(ion);
    CHECK(g.size() == 8);
  }

  c.active = {2, 3};
  std::vector<SpectralLine> active = active_spectrum(c);
  auto ag = by_ion(active);
  CHECK(ag[2].size() == 2);
  CHECK(ag[3].size() == 2);
  for (const SpectralLine& line : active) {
    CHECK(line.sigma[0] == +1);
    CHECK(line.sigma[3] == +1);
  }
}

TEST_CASE("flipping the passive polarization shifts lines by the passive coupling") {
  ChainConfig c = standard_config(3);
  c.active = {2, 3};
  std::vector<SpectralLine> up = active_spectrum(c);
  c.passive_m_s = -0.5;
  std::vector<SpectralLine> down = active_spectrum(c);
  REQUIRE(up.size() == down.size());

  Eigen::MatrixXd j = j_matrix(c.species, 3, c.nu_z, c.gradient).j;
  auto ug = by_ion(up);
  auto dg = by_ion(down);
  for (int ion : {2, 3}) {
    CAPTURE(ion);
    double coupling_to_passive = j(ion - 1, 0);
    for (size_t k = 0; k < ug[ion].size(); ++k) {
      double shift = dg[ion][k].frequency - ug[ion][k].frequency;
      CHECK(shift == doctest::Approx(coupling_to_passive).epsilon(1e-9));
    }
  }
}

TEST_CASE("empty active set means every ion is active") {
  ChainConfig c = standard_config(3);
  std::vector<SpectralLine> all_active = active_spectrum(c);  // active empty
  std::vector<SpectralLine> full = full_spectrum(c);
  REQUIRE(all_active.size() == full.size());
  for (size_t k = 0; k < full.size(); ++k) {
    CHECK(all_active[k].ion == full[k].ion);
    CHECK(all_active[k].frequency ==
          doctest::Approx(full[k].frequency).epsilon(1e-12));
    CHECK(all_active[k].weight == full[k].weight);
  }
}

TEST_CASE("zero gradient: no couplings, every line at the bare flip frequency") {
  ChainConfig c = standard_config(3);
  c.gradient = 0.0;
  std::vector<SpectralLine> lines = full_spectrum(c);
  CHECK(lines.size() == 3);  // one merged line per ion
  for (const SpectralLine& line : lines) {
    CHECK(line.weight == 4);
    CHECK(line.frequency / (constants::two_pi * 1e9) ==
          doctest::Approx(35.683613172593).epsilon(1e-11));
  }
  CHECK(addressing_separation(c) == 0.0);

  // lower nuclear manifold: bare frequency drops by A
  c.nuclear_m = -0.5;
  std::vector<SpectralLine> lower = full_spectrum(c);
  CHECK(lower[0].frequency / (constants::two_pi * 1e9) ==
        doctest::Approx(23.0386131726).epsilon(1e-10));
}

TEST_CASE("chain validation and capacity errors") {
  ChainConfig c = standard_config(3);

  c.n_ions = 1;
  CHECK_THROWS_AS(validate(c), Error);

  c = standard_config(3);
  c.n_ions = 21;
  try {
    validate(c);
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capacity);
  }

  c = standard_config(3);
  c.b0 = 0.0;
  CHECK_THROWS_AS(full_spectrum(c), Error);

  c = standard_config(3);
  c.gradient = -1.0;
  CHECK_THROWS_AS(full_spectrum(c), Error);

  c = standard_config(3);
  c.passive_m_s = 0.3;
  CHECK_THROWS_AS(validate(c), Error);

  c = standard_config(3);
  c.nuclear_m = 0.0;
  CHECK_THROWS_AS(validate(c), Error);

  c = standard_config(3);
  c.active = {2, 2};
  CHECK_THROWS_AS(active_spectrum(c), Error);

  c = standard_config(3);
  c.active = {0};
  CHECK_THROWS_AS(active_spectrum(c), Error);

  c = standard_config(3);
  c.active = {4};
  CHECK_THROWS_AS(active_spectrum(c), Error);

  c = standard_config(3);
  c.species.nuclear_spin = 1.5;
  CHECK_THROWS_AS(full_spectrum(c), Error);
}
