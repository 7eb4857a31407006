#pragma once

#include <string>
#include <vector>

#include "nclift/inequality.hpp"
#include "nclift/scenario.hpp"

namespace nclift {

/// n-cycle compatibility graph: measurements "0".."n-1", edges {i, i+1 mod n},
/// uniform outcome sets "0","1",... Requires n >= 3.
Scenario cycle_scenario(std::size_t n, std::size_t outcomes_per_measurement);

/// Complement of the n-cycle, dichotomic measurements. Requires n >= 5. For
/// n = 7 the vertices are numbered so that {0,1,2,3} induce a 4-cycle (the
/// usual presentation of the anti-heptagon); other n use the complement of the
/// cycle 0-1-...-(n-1).
Scenario complement_cycle_scenario(std::size_t n);

/// The eight-term CHSH inequality with bound 3 on the dichotomic 4-cycle,
/// canonicalized to zero-bound form.
Inequality chsh_inequality();

/// The five-term KCBS inequality with bound 2 on the dichotomic 5-cycle.
Inequality kcbs_inequality();

/// The dichotomic 4-cycle with one extra measurement "4" compatible with
/// {0,1,2}: the smallest scenario carrying a facet that one measurement does
/// not effectively contribute to.
Scenario chsh_spectator_scenario();

/// Same, extended by a measurement "5" compatible with {0,1,2,3}.
Scenario chsh_spectator_extended_scenario();

/// The ten-term zero-bound facet of chsh_spectator_scenario() whose
/// measurement "4" is traced out (in essence CHSH).
Inequality fig2_inequality_29();

struct NamedFixture {
  std::string name;
  Scenario scenario;
  std::vector<Inequality> inequalities;
};

/// Fixtures used by the reproduce pipelines and tests.
std::vector<NamedFixture> named_fixtures();

}  // namespace nclift
