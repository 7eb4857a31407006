#include <doctest.h>

#include <random>

#include "nclift/catalog.hpp"
#include "nclift/errors.hpp"
#include "nclift/lifting.hpp"
#include "test_support.hpp"

using namespace nclift;

TEST_CASE("traced-out lift of the square inequality onto the five-measurement scenario") {
  const auto chsh = chsh_inequality();
  const auto ext = extend_with_measurement(chsh.scenario(), "4", {"0", "1"}, {"0", "1", "2"});
  const auto lifts = lift_measurement(chsh, ext);
  REQUIRE(lifts.size() == 1);
  const auto& lifted = lifts.front();
  CHECK(lifted.record.kind == LiftRecord::Kind::measurement_case_one);
  CHECK(is_facet(lifted.inequality).verdict == FaceVerdict::facet);

  // The {0,1} coefficients split over both outcomes of the new measurement.
  const auto& lidx = *lifted.inequality.index();
  const auto base_value = chsh.coefficient(chsh.index()->position({"0", "1"}, {"0", "0"}));
  CHECK(lifted.inequality.coefficient(lidx.position({"0", "1", "4"}, {"0", "0", "0"})) ==
        base_value);
  CHECK(lifted.inequality.coefficient(lidx.position({"0", "1", "4"}, {"0", "0", "1"})) ==
        base_value);
  // Unchanged contexts keep their coefficients.
  CHECK(lifted.inequality.coefficient(lidx.position({"2", "3"}, {"0", "0"})) ==
        chsh.coefficient(chsh.index()->position({"2", "3"}, {"0", "0"})));

  // It is the ten-term facet up to representation.
  CHECK(equivalent(lifted.inequality, fig2_inequality_29()));

  // Marginalization identity on no-disturbance correlations.
  std::mt19937 rng(6601);
  for (int i = 0; i < 5; ++i) {
    const auto q = test::random_nd_correlation(lifted.inequality.index(), rng);
    CHECK(evaluate(lifted.inequality, q) == evaluate(chsh, marginalize(q, ext)));
  }

  // Provenance records the step.
  REQUIRE(lifted.inequality.provenance().size() == 1);
  CHECK(lifted.inequality.provenance()[0].kind == "measurement-I");
  CHECK(lifted.inequality.provenance()[0].measurement == "4");
}

TEST_CASE("case preconditions are enforced") {
  const auto chsh = chsh_inequality();
  const auto eff = effective_form(chsh);

  // New measurement compatible with everything contributing: case I rejected.
  const auto compat_ext =
      extend_with_measurement(chsh.scenario(), "4", {"0", "1"}, {"0", "1", "2", "3"});
  CHECK_THROWS_AS(lift_measurement_case_one(eff, compat_ext), std::invalid_argument);

  // New measurement incompatible with a contributing one: case II rejected.
  const auto incompat_ext = extend_with_measurement(chsh.scenario(), "4", {"0", "1"}, {"0"});
  CHECK_THROWS_AS(lift_measurement_case_two(eff, incompat_ext, "0"), std::invalid_argument);

  // Unknown post-selection outcome.
  CHECK_THROWS_AS(lift_measurement_case_two(eff, compat_ext, "7"), std::invalid_argument);

  // Base mismatch.
  CHECK_THROWS_AS(lift_measurement(kcbs_inequality(), compat_ext), std::invalid_argument);
}

TEST_CASE("post-selected lifts of the ten-term facet") {
  const auto e29 = fig2_inequality_29();
  const auto ext = extend_with_measurement(e29.scenario(), "5", {"0", "1"}, {"0", "1", "2", "3"});
  const auto lifts = lift_measurement(e29, ext);
  REQUIRE(lifts.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(lifts[k].record.kind == LiftRecord::Kind::measurement_case_two);
    CHECK(lifts[k].record.chosen_outcome == std::to_string(k));
    CHECK(is_facet(lifts[k].inequality).verdict == FaceVerdict::facet);
    // Old contexts are zeroed; only events post-selecting the outcome remain.
    const auto& lidx = *lifts[k].inequality.index();
    const std::size_t old_ci = lidx.context_index({"0", "1", "4"});
    for (std::size_t e = 0; e < lidx.block_size(old_ci); ++e) {
      CHECK(lifts[k].inequality.coefficient(lidx.block_offset(old_ci) + e) == 0);
    }
  }

  // Requesting one outcome returns only that lift.
  const auto only = lift_measurement(e29, ext, std::string("1"));
  REQUIRE(only.size() == 1);
  CHECK(only[0].inequality.coefficients() == lifts[1].inequality.coefficients());
}

TEST_CASE("post-selected lifting spreads the table over spectator outcomes") {
  // Here the new measurement is also compatible with the non-contributing
  // spectator "4", so the contexts {0,1,4,5} and {1,2,4,5} meet the
  // contributing set in the partial contexts {0,1} and {1,2}: the table value
  // repeats across the spectator's outcomes.
  const auto e29 = fig2_inequality_29();
  const auto ext =
      extend_with_measurement(e29.scenario(), "5", {"0", "1"}, {"0", "1", "2", "3", "4"});
  const auto lifts = lift_measurement(e29, ext);
  REQUIRE(lifts.size() == 2);
  for (const auto& lift : lifts) {
    CHECK(lift.record.kind == LiftRecord::Kind::measurement_case_two);
    CHECK(is_facet(lift.inequality).verdict == FaceVerdict::facet);
    const auto back = unlift_measurement(lift);
    CHECK(equivalent(back, e29));
  }
  const auto& lidx = *lifts[0].inequality.index();
  const auto table = effective_form(e29).effective;
  const auto& tidx = *table.index();
  for (const char* spectator : {"0", "1"}) {
    CHECK(lifts[0].inequality.coefficient(
              lidx.position({"0", "1", "4", "5"}, {"0", "1", spectator, "0"})) ==
          table.coefficient(tidx.position({"0", "1"}, {"0", "1"})));
  }
  // Post-selecting the other outcome zeroes the event.
  CHECK(lifts[0].inequality.coefficient(
            lidx.position({"0", "1", "4", "5"}, {"0", "1", "0", "1"})) == 0);
}

TEST_CASE("a nowhere-contributing inequality dispatches to one lift per outcome") {
  // The zero inequality contributes through nothing, so any new measurement is
  // vacuously compatible with the contributing set: one post-selected lift
  // per outcome, each the zero inequality over the extension.
  const auto s = cycle_scenario(4, 2);
  const auto index = make_event_index(s);
  const Inequality zero(index, std::vector<Rational>(index->size()));
  const auto ext = extend_with_measurement(s, "4", {"0", "1", "2"}, {"0", "1", "2", "3"});
  const auto lifts = lift_measurement(zero, ext);
  REQUIRE(lifts.size() == 3);
  for (const auto& lift : lifts) {
    CHECK(lift.record.kind == LiftRecord::Kind::measurement_case_two);
    CHECK(std::all_of(lift.inequality.coefficients().begin(),
                      lift.inequality.coefficients().end(),
                      [](const Rational& c) { return c == 0; }));
  }
}

TEST_CASE("unlift inverts both measurement constructions") {
  const auto chsh = chsh_inequality();
  const auto traced_ext =
      extend_with_measurement(chsh.scenario(), "4", {"0", "1"}, {"0", "1", "2"});
  const auto traced = lift_measurement(chsh, traced_ext).front();
  const auto recovered = unlift_measurement(traced);
  CHECK(recovered.scenario() == chsh.scenario());
  CHECK(equivalent(recovered, chsh));
  CHECK(is_facet(recovered).verdict == FaceVerdict::facet);

  const auto e29 = fig2_inequality_29();
  const auto ps_ext =
      extend_with_measurement(e29.scenario(), "5", {"0", "1"}, {"0", "1", "2", "3"});
  for (const auto& lift : lift_measurement(e29, ps_ext)) {
    const auto back = unlift_measurement(lift);
    CHECK(equivalent(back, e29));
    CHECK(is_facet(back).verdict == FaceVerdict::facet);
  }

  // Corrupt one outcome slice of the traced lift: unlift must refuse.
  auto corrupted = traced.inequality.coefficients();
  const auto& lidx = *traced.inequality.index();
  corrupted[lidx.position({"0", "1", "4"}, {"0", "0", "1"})] += 1;
  const LiftedInequality bad{Inequality(traced.inequality.index(), corrupted), traced.record};
  CHECK_THROWS_AS(unlift_measurement(bad), std::invalid_argument);

  // Outcome lifts are not invertible here.
  const auto kcbs = kcbs_inequality();
  const auto oext = extend_with_outcome(kcbs.scenario(), "0", "2");
  const auto olift = lift_outcome(kcbs, oext, "1");
  CHECK_THROWS_AS(unlift_measurement(olift), std::invalid_argument);
}

TEST_CASE("outcome lift of the pentagon inequality") {
  const auto kcbs = kcbs_inequality();
  const auto ext = extend_with_outcome(kcbs.scenario(), "0", "2");
  const auto lifted = lift_outcome(kcbs, ext, "1");
  CHECK(is_facet(lifted.inequality).verdict == FaceVerdict::facet);
  CHECK(lifted.record.kind == LiftRecord::Kind::outcome);
  CHECK(lifted.record.chosen_outcome == std::string("1"));
  CHECK(lifted.record.clubbed_outcome == std::string("2"));

  // New components copy the clubbed outcome's coefficients.
  const auto& lidx = *lifted.inequality.index();
  const auto& bidx = *kcbs.index();
  CHECK(lifted.inequality.coefficient(lidx.position({"0", "4"}, {"2", "0"})) ==
        kcbs.coefficient(bidx.position({"0", "4"}, {"1", "0"})));
  CHECK(lifted.inequality.coefficient(lidx.position({"0", "1"}, {"2", "1"})) ==
        kcbs.coefficient(bidx.position({"0", "1"}, {"1", "1"})));

  // Coarse-graining identity on arbitrary correlations.
  std::mt19937 rng(6602);
  for (int i = 0; i < 5; ++i) {
    const auto q = test::random_correlation(lifted.inequality.index(), rng);
    CHECK(evaluate(lifted.inequality, q) == evaluate(kcbs, coarse_grain(q, ext, "1")));
  }

  CHECK_THROWS_AS(lift_outcome(kcbs, ext, "2"), std::invalid_argument);
  CHECK_THROWS_AS(lift_outcome(kcbs, ext, "9"), std::invalid_argument);
}

TEST_CASE("exclusion rule rejects re-clubbing a post-selected outcome") {
  // Base: one dichotomic measurement with its nonnegativity facet.
  const Scenario base({{"M", {"0", "1"}}}, {});
  const auto bidx = make_event_index(base);
  std::vector<Rational> coeffs(bidx->size());
  coeffs[bidx->position({"M"}, {"1"})] = 1;
  const Inequality seed(bidx, coeffs);
  REQUIRE(is_facet(seed).verdict == FaceVerdict::facet);

  // Adjoin A compatible with M and post-select on outcome 0.
  const auto mext = extend_with_measurement(base, "A", {"0", "1"}, {"M"});
  const auto ps = lift_measurement(seed, mext, std::string("0")).front();
  REQUIRE(is_facet(ps.inequality).verdict == FaceVerdict::facet);

  // Add a new outcome to A. Clubbing with the post-selected outcome is
  // rejected; the other outcome passes and reduces to the padded form.
  const auto oext = extend_with_outcome(ps.inequality.scenario(), "A", "2");
  CHECK_THROWS_AS(lift_outcome(ps.inequality, oext, "0"), ExclusionRejected);

  const auto choices = lift_outcome_choices(ps.inequality, oext);
  REQUIRE(choices.size() == 1);
  CHECK(choices[0].record.chosen_outcome == std::string("1"));
  CHECK(is_facet(choices[0].inequality).verdict == FaceVerdict::facet);

  // The rejected construction decomposes into two post-selected facets.
  const auto tidx = choices[0].inequality.index();
  std::vector<Rational> b_star(tidx->size());
  std::vector<Rational> b_club(tidx->size());
  b_star[tidx->position({"A", "M"}, {"0", "1"})] = 1;
  b_club[tidx->position({"A", "M"}, {"2", "1"})] = 1;
  CHECK(is_facet(Inequality(tidx, b_star)).verdict == FaceVerdict::facet);
  CHECK(is_facet(Inequality(tidx, b_club)).verdict == FaceVerdict::facet);
  std::vector<Rational> sum(tidx->size());
  for (std::size_t e = 0; e < sum.size(); ++e) sum[e] = b_star[e] + b_club[e];
  const Inequality combined(tidx, sum);
  CHECK(is_valid(combined));
  CHECK(is_facet(combined).verdict != FaceVerdict::facet);

  // The allowed clubbing equals the padded source inequality.
  CHECK(choices[0].inequality.coefficients() == b_star);
}

TEST_CASE("sequential lifting with explicit choices") {
  const auto kcbs = kcbs_inequality();
  std::vector<LiftStep> steps;
  for (int i = 0; i < 5; ++i) {
    LiftStep step;
    step.op = LiftStep::Op::add_outcome;
    step.name = std::to_string(i);
    step.new_outcome = "2";
    step.choice = "1";
    steps.push_back(std::move(step));
  }
  const auto lifted = sequential_lift(kcbs, steps);
  CHECK(lifted.inequality.scenario() == cycle_scenario(5, 3));
  CHECK(lifted.inequality.provenance().size() == 5);
  CHECK(is_facet(lifted.inequality).verdict == FaceVerdict::facet);

  // A fan-out step without a choice is an error in single-path mode and
  // branches in explore-all mode.
  const Scenario base({{"M", {"0", "1"}}}, {});
  const auto bidx = make_event_index(base);
  std::vector<Rational> coeffs(bidx->size());
  coeffs[bidx->position({"M"}, {"1"})] = 1;
  const Inequality seed(bidx, coeffs);
  LiftStep fan;
  fan.op = LiftStep::Op::add_measurement;
  fan.name = "A";
  fan.outcomes = {"0", "1", "2"};
  fan.neighbors = {"M"};
  CHECK_THROWS_AS(sequential_lift(seed, {fan}), LiftStepError);
  const auto branches = sequential_lift_all(seed, {fan});
  CHECK(branches.size() == 3);
  for (const auto& b : branches) {
    CHECK(is_facet(b.inequality).verdict == FaceVerdict::facet);
  }

  // Step errors carry the failing position.
  LiftStep bad;
  bad.op = LiftStep::Op::add_measurement;
  bad.name = "0";  // already present
  bad.outcomes = {"0"};
  try {
    sequential_lift(kcbs, {steps[0], bad});
    FAIL("expected LiftStepError");
  } catch (const LiftStepError& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("mixed sequential pipeline: measurement lifts then outcome lifts") {
  // Three traced-out lifts up to the anti-heptagon, then two outcome lifts
  // with different clubbing choices. Facetness survives the whole chain.
  const std::vector<LiftStep> steps = {
      {LiftStep::Op::add_measurement, "4", {"0", "1"}, {"0", "1", "2"}, "", std::nullopt},
      {LiftStep::Op::add_measurement, "5", {"0", "1"}, {"0", "1", "3"}, "", std::nullopt},
      {LiftStep::Op::add_measurement, "6", {"0", "1"}, {"2", "3", "4", "5"}, "", std::nullopt},
      {LiftStep::Op::add_outcome, "6", {}, {}, "2", std::string("1")},
      {LiftStep::Op::add_outcome, "0", {}, {}, "2", std::string("0")},
  };
  const auto lifted = sequential_lift(chsh_inequality(), steps);
  const auto& s = lifted.inequality.scenario();
  CHECK(s.outcomes_of("0") == std::vector<std::string>{"0", "1", "2"});
  CHECK(s.outcomes_of("6") == std::vector<std::string>{"0", "1", "2"});
  CHECK(ambient_dimension(s) == 80);
  CHECK(assignment_count(s) == 288);
  REQUIRE(lifted.inequality.provenance().size() == 5);
  CHECK(lifted.inequality.provenance()[3].kind == "outcome");
  const auto report = is_facet(lifted.inequality);
  CHECK(report.verdict == FaceVerdict::facet);
  CHECK(report.polytope_dimension == 44);
}

TEST_CASE("extension order can change the lifted facet") {
  // One dichotomic measurement M; extras A and B are each compatible with M
  // but incompatible with each other. Lifting the segment facet by adding A
  // then B post-selects on A; the other order post-selects on B.
  const Scenario base({{"M", {"0", "1"}}}, {});
  const auto bidx = make_event_index(base);
  std::vector<Rational> coeffs(bidx->size());
  coeffs[bidx->position({"M"}, {"1"})] = 1;
  const Inequality seed(bidx, coeffs);

  auto run = [&](const std::string& first, const std::string& second) {
    LiftStep s1;
    s1.op = LiftStep::Op::add_measurement;
    s1.name = first;
    s1.outcomes = {"0", "1"};
    s1.neighbors = {"M"};
    s1.choice = "0";
    LiftStep s2;
    s2.op = LiftStep::Op::add_measurement;
    s2.name = second;
    s2.outcomes = {"0", "1"};
    s2.neighbors = {"M"};
    return sequential_lift(seed, {s1, s2});
  };
  const auto ab = run("A", "B");
  const auto ba = run("B", "A");
  CHECK(is_facet(ab.inequality).verdict == FaceVerdict::facet);
  CHECK(is_facet(ba.inequality).verdict == FaceVerdict::facet);

  // The two scenarios agree up to measurement declaration order, so compare
  // the functionals over label assignments: they are not proportional.
  std::vector<std::pair<Rational, Rational>> values;
  for (const char* m : {"0", "1"}) {
    for (const char* a : {"0", "1"}) {
      for (const char* b : {"0", "1"}) {
        const std::map<std::string, std::string> lam{{"M", m}, {"A", a}, {"B", b}};
        values.emplace_back(
            evaluate(ab.inequality, vertex_of(ab.inequality.index(), lam).vector),
            evaluate(ba.inequality, vertex_of(ba.inequality.index(), lam).vector));
      }
    }
  }
  bool proportional = true;
  Rational scale = 0;
  for (const auto& [x, y] : values) {
    if ((x == 0) != (y == 0)) proportional = false;
    if (x != 0 && y != 0 && scale == 0) scale = x / y;
  }
  if (proportional && scale != 0) {
    for (const auto& [x, y] : values) {
      if (x != scale * y) proportional = false;
    }
  }
  CHECK(!proportional);
}
