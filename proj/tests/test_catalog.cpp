#include <doctest.h>

#include "nclift/catalog.hpp"
#include "nclift/inequality.hpp"
#include "oracles.hpp"

using namespace nclift;

TEST_CASE("cycle scenarios") {
  const auto square = cycle_scenario(4, 2);
  CHECK(square.size() == 4);
  CHECK(square.compatible("0", "1"));
  CHECK(square.compatible("3", "0"));
  CHECK(!square.compatible("0", "2"));
  CHECK(square.outcomes_of("2") == std::vector<std::string>{"0", "1"});

  const auto penta3 = cycle_scenario(5, 3);
  CHECK(penta3.outcomes_of("4") == std::vector<std::string>{"0", "1", "2"});
  CHECK(penta3.maximal_contexts().size() == 5);

  for (std::size_t n = 4; n <= 7; ++n) {
    const auto s = cycle_scenario(n, 2);
    CHECK(s.maximal_contexts().size() == n);
    for (const auto& c : s.maximal_contexts()) CHECK(c.members.size() == 2);
  }

  const auto triangle = cycle_scenario(3, 2);
  CHECK(triangle.maximal_contexts().size() == 1);
  CHECK(triangle.maximal_contexts()[0].members == std::vector<std::string>{"0", "1", "2"});

  CHECK_THROWS_AS(cycle_scenario(2, 2), std::invalid_argument);
}

TEST_CASE("cycle complements") {
  const auto anti7 = complement_cycle_scenario(7);
  std::vector<std::vector<std::string>> contexts;
  for (const auto& c : anti7.maximal_contexts()) contexts.push_back(c.members);
  CHECK(contexts == std::vector<std::vector<std::string>>{{"0", "1", "4"},
                                                          {"0", "1", "5"},
                                                          {"0", "3", "5"},
                                                          {"1", "2", "4"},
                                                          {"2", "3", "6"},
                                                          {"2", "4", "6"},
                                                          {"3", "5", "6"}});
  CHECK(restrict_to(anti7, {"0", "1", "2", "3"}) == cycle_scenario(4, 2));
  CHECK(contexts == test::naive_maximal_cliques(anti7));

  // The pentagon is self-complementary: five two-member contexts.
  const auto anti5 = complement_cycle_scenario(5);
  CHECK(anti5.maximal_contexts().size() == 5);
  for (const auto& c : anti5.maximal_contexts()) CHECK(c.members.size() == 2);

  CHECK_THROWS_AS(complement_cycle_scenario(4), std::invalid_argument);
}

TEST_CASE("catalog inequalities are facet-defining and fully contributing") {
  const auto chsh = chsh_inequality();
  CHECK(is_facet(chsh).verdict == FaceVerdict::facet);
  CHECK(contributing_measurements(chsh) == std::vector<std::string>{"0", "1", "2", "3"});
  REQUIRE(chsh.source_form().has_value());
  CHECK(chsh.source_form()->bound == 3);
  CHECK(chsh.source_form()->terms.size() == 8);

  const auto kcbs = kcbs_inequality();
  CHECK(is_facet(kcbs).verdict == FaceVerdict::facet);
  CHECK(contributing_measurements(kcbs) ==
        std::vector<std::string>{"0", "1", "2", "3", "4"});
  CHECK(kcbs.source_form()->bound == 2);
  CHECK(kcbs.source_form()->terms.size() == 5);

  const auto e29 = fig2_inequality_29();
  CHECK(is_facet(e29).verdict == FaceVerdict::facet);
  CHECK(contributing_measurements(e29) == std::vector<std::string>{"0", "1", "2", "3"});
  CHECK(equivalent(effective_form(e29).effective, chsh_inequality()));
}

TEST_CASE("spectator scenarios") {
  const auto fig2a = chsh_spectator_scenario();
  std::vector<std::vector<std::string>> contexts;
  for (const auto& c : fig2a.maximal_contexts()) contexts.push_back(c.members);
  CHECK(contexts == std::vector<std::vector<std::string>>{
                        {"0", "1", "4"}, {"0", "3"}, {"1", "2", "4"}, {"2", "3"}});

  const auto fig2b = chsh_spectator_extended_scenario();
  contexts.clear();
  for (const auto& c : fig2b.maximal_contexts()) contexts.push_back(c.members);
  CHECK(contexts == std::vector<std::vector<std::string>>{{"0", "1", "4"},
                                                          {"0", "1", "5"},
                                                          {"0", "3", "5"},
                                                          {"1", "2", "4"},
                                                          {"1", "2", "5"},
                                                          {"2", "3", "5"}});
}

TEST_CASE("fixtures are internally consistent") {
  for (const auto& fixture : named_fixtures()) {
    for (const auto& ineq : fixture.inequalities) {
      CHECK(ineq.scenario() == fixture.scenario);
      CHECK(is_valid(ineq));
    }
  }
}
