#include "nclift/commands.hpp"

#include <algorithm>
#include <filesystem>

#include "nclift/catalog.hpp"
#include "nclift/errors.hpp"

namespace nclift::cli {

namespace {

Json input_entry(const std::string& path) {
  Json j;
  j["file"] = path;
  j["fnv1a64"] = file_digest(path);
  return j;
}

Json facet_report_json(const FacetReport& report) {
  Json j;
  j["valid"] = report.valid;
  j["saturating_count"] = report.saturating_count;
  j["saturating_affine_rank"] = report.saturating_affine_rank;
  j["polytope_dimension"] = report.polytope_dimension;
  j["vertex_count"] = report.vertex_count;
  j["verdict"] = to_string(report.verdict);
  return j;
}

Json assignment_json(const Vertex& v) {
  Json j;
  for (const auto& [m, o] : v.assignment_labels()) j[m] = o;
  return j;
}

struct AssertionLog {
  Json entries = Json::array();
  bool all_passed = true;

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    Json e;
    e["name"] = name;
    e["pass"] = pass;
    if (!detail.empty()) e["detail"] = detail;
    entries.push_back(std::move(e));
    all_passed = all_passed && pass;
  }
};

InequalityTerm make_term(std::vector<std::pair<std::string, std::string>> events, long coeff = 1) {
  InequalityTerm t;
  for (auto& [m, o] : events) {
    t.context.push_back(std::move(m));
    t.outcome.push_back(std::move(o));
  }
  t.coeff = coeff;
  return t;
}

Json check_inequality(const Inequality& ineq, const Options& options) {
  Json results;
  const auto report = is_facet(ineq, options.cap_vertices);
  results = facet_report_json(report);
  if (options.list_saturating && report.valid) {
    Json sats = Json::array();
    for (const auto& v : saturating_vertices(ineq, options.cap_vertices)) {
      sats.push_back(assignment_json(v));
    }
    results["saturating_assignments"] = std::move(sats);
  }
  return results;
}

Json saturating_basis_certificate(const Inequality& ineq, const FacetReport& report,
                                  std::size_t cap) {
  Json cert;
  cert["polytope_dimension"] = report.polytope_dimension;
  cert["saturating_affine_rank"] = report.saturating_affine_rank;
  cert["verdict"] = to_string(report.verdict);
  Json basis = Json::array();
  if (report.valid) {
    AffineRankAccumulator acc;
    for (const auto& v : saturating_vertices(ineq, cap)) {
      if (acc.add_point(v.vector.values())) basis.push_back(assignment_json(v));
    }
  }
  cert["saturating_basis"] = std::move(basis);
  cert["inequality"] = inequality_to_json(ineq);
  return cert;
}

}  // namespace

Json info(const std::string& scenario_file, const Options& options) {
  const auto scenario = load_scenario(scenario_file);
  Json report;
  report["command"] = "info";
  report["inputs"] = Json::array({input_entry(scenario_file)});

  Json results;
  Json measurements = Json::array();
  for (const auto& m : scenario.measurements()) {
    Json e;
    e["name"] = m.name;
    e["outcomes"] = m.outcomes;
    measurements.push_back(std::move(e));
  }
  results["measurements"] = std::move(measurements);
  Json contexts = Json::array();
  for (const auto& c : scenario.maximal_contexts()) contexts.push_back(c.members);
  results["maximal_contexts"] = std::move(contexts);
  results["context_count"] = scenario.maximal_contexts().size();
  results["ambient_dimension"] = ambient_dimension(scenario);
  results["vertex_count"] = assignment_count(scenario, options.cap_vertices);
  results["nc_dimension"] = nc_dimension(scenario, options.cap_vertices);
  const auto cycle = find_induced_cycle(scenario);
  results["induced_cycle"] = cycle ? Json(*cycle) : Json(nullptr);
  report["results"] = std::move(results);
  return report;
}

Json check(const std::string& inequality_file, const Options& options) {
  const auto ineq = load_inequality(inequality_file);
  Json report;
  report["command"] = "check";
  report["inputs"] = Json::array({input_entry(inequality_file)});
  report["results"] = check_inequality(ineq, options);
  if (options.certificate_path) {
    const auto facet = is_facet(ineq, options.cap_vertices);
    save_json(*options.certificate_path,
              saturating_basis_certificate(ineq, facet, options.cap_vertices));
    report["certificate"] = *options.certificate_path;
  }
  return report;
}

Json lift(const std::string& plan_file, const Options& options) {
  const auto plan = load_lift_plan(plan_file);
  const auto start = load_inequality(plan.start_inequality);
  const auto branches = sequential_lift_all(start, plan.steps, options.cap_vertices);

  Json report;
  report["command"] = "lift";
  report["inputs"] =
      Json::array({input_entry(plan_file), input_entry(plan.start_inequality.string())});
  Json outputs = Json::array();
  const auto stem = std::filesystem::path(plan_file).stem().string();
  std::filesystem::create_directories(options.out_dir);
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const auto& branch = branches[k];
    const auto out_path =
        (std::filesystem::path(options.out_dir) / (stem + "_out_" + std::to_string(k) + ".json"))
            .string();
    save_json(out_path, inequality_to_json(branch.inequality));
    Json entry;
    entry["file"] = out_path;
    entry["provenance"] = provenance_to_json(branch.inequality.provenance());
    if (options.verify) {
      Options verify_options = options;
      verify_options.certificate_path.reset();
      verify_options.list_saturating = false;
      const auto reloaded = load_inequality(out_path);
      entry["verify"] = check_inequality(reloaded, verify_options);
    }
    outputs.push_back(std::move(entry));
  }
  report["outputs"] = std::move(outputs);
  return report;
}

Json noncontextual(const std::string& correlation_file, const Options& options) {
  const auto q = load_correlation(correlation_file);
  const auto membership = decide_membership(q, options.cap_vertices);

  Json report;
  report["command"] = "noncontextual";
  report["inputs"] = Json::array({input_entry(correlation_file)});
  Json results;
  results["noncontextual"] = membership.noncontextual;
  if (membership.noncontextual) {
    Json weights = Json::array();
    for (const auto& [ordinal, weight] : membership.weights) {
      // Reconstruct the assignment from its ordinal for display.
      const auto& s = q.index()->scenario();
      std::vector<std::size_t> digits(s.size(), 0);
      std::size_t rem = ordinal;
      for (std::size_t m = s.size(); m-- > 0;) {
        const std::size_t radix = s.measurement(m).outcomes.size();
        digits[m] = rem % radix;
        rem /= radix;
      }
      Json entry;
      entry["assignment"] = assignment_json(vertex_of(q.index(), digits));
      entry["weight"] = rational_to_string(weight);
      weights.push_back(std::move(entry));
    }
    results["weights"] = std::move(weights);
  } else {
    const Inequality separator(q.index(), membership.separating->values());
    results["separating_inequality"] = inequality_to_json(separator);
    results["value_at_correlation"] = rational_to_string(evaluate(separator, q));
  }
  report["results"] = results;
  if (options.certificate_path) {
    save_json(*options.certificate_path, results);
    report["certificate"] = *options.certificate_path;
  }
  return report;
}

namespace {

void reproduce_chsh_antiheptagon(AssertionLog& log, std::size_t cap) {
  const std::vector<LiftStep> steps = {
      {LiftStep::Op::add_measurement, "4", {"0", "1"}, {"0", "1", "2"}, "", std::nullopt},
      {LiftStep::Op::add_measurement, "5", {"0", "1"}, {"0", "1", "3"}, "", std::nullopt},
      {LiftStep::Op::add_measurement, "6", {"0", "1"}, {"2", "3", "4", "5"}, "", std::nullopt},
  };
  Inequality current = chsh_inequality();
  log.check("chsh facet on the 4-cycle", is_facet(current, cap).verdict == FaceVerdict::facet);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& step = steps[i];
    auto ext = extend_with_measurement(current.scenario(), step.name, step.outcomes,
                                       step.neighbors);
    auto results = lift_measurement(current, ext, std::nullopt, cap);
    log.check("step " + std::to_string(i + 1) + " uses the traced-out construction",
              results.size() == 1 &&
                  results.front().record.kind == LiftRecord::Kind::measurement_case_one);
    current = std::move(results.front().inequality);
    log.check("step " + std::to_string(i + 1) + " lift is a facet",
              is_facet(current, cap).verdict == FaceVerdict::facet);
  }
  const auto& final_scenario = current.scenario();
  log.check("final scenario is the anti-heptagon",
            final_scenario == complement_cycle_scenario(7));
  const std::vector<std::vector<std::string>> expected = {
      {"0", "1", "4"}, {"0", "1", "5"}, {"0", "3", "5"}, {"1", "2", "4"},
      {"2", "3", "6"}, {"2", "4", "6"}, {"3", "5", "6"},
  };
  std::vector<std::vector<std::string>> got;
  for (const auto& c : final_scenario.maximal_contexts()) got.push_back(c.members);
  log.check("anti-heptagon maximal contexts match", got == expected);
  log.check("ambient dimension 56", ambient_dimension(final_scenario) == 56);
  log.check("128 vertices", assignment_count(final_scenario, cap) == 128);
}

void reproduce_kcbs_trichotomic(AssertionLog& log, std::size_t cap) {
  Inequality current = kcbs_inequality();
  log.check("kcbs facet on the 5-cycle", is_facet(current, cap).verdict == FaceVerdict::facet);
  Inequality alternative = current;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto name = std::to_string(i);
    auto ext = extend_with_outcome(current.scenario(), name, "2");
    current = lift_outcome(current, ext, "1", cap).inequality;
    log.check("club-with-1 step " + std::to_string(i + 1) + " is a facet",
              is_facet(current, cap).verdict == FaceVerdict::facet);
    if (i == 0) {
      const auto index = current.index();
      const auto eq39 = inequality_from_terms(
          index,
          {
              make_term({{"0", "0"}, {"1", "1"}}),
              make_term({{"1", "0"}, {"2", "1"}}),
              make_term({{"2", "0"}, {"3", "1"}}),
              make_term({{"3", "0"}, {"4", "1"}}),
              make_term({{"4", "0"}, {"0", "1"}}),
              make_term({{"4", "0"}, {"0", "2"}}),
          },
          Relation::leq, Rational(2));
      log.check("step 1 equals the six-term bound-2 inequality exactly",
                current.coefficients() == eq39.coefficients());
    }
    auto alt_ext = extend_with_outcome(alternative.scenario(), name, "2");
    alternative = lift_outcome(alternative, alt_ext, "0", cap).inequality;
  }
  log.check("final scenario is the trichotomic 5-cycle",
            current.scenario() == cycle_scenario(5, 3));
  log.check("243 vertices at the end", assignment_count(current.scenario(), cap) == 243);
  const auto index = current.index();
  const auto eq40 = inequality_from_terms(
      index,
      {
          make_term({{"0", "0"}, {"1", "1"}}), make_term({{"0", "0"}, {"1", "2"}}),
          make_term({{"1", "0"}, {"2", "1"}}), make_term({{"1", "0"}, {"2", "2"}}),
          make_term({{"2", "0"}, {"3", "1"}}), make_term({{"2", "0"}, {"3", "2"}}),
          make_term({{"3", "0"}, {"4", "1"}}), make_term({{"3", "0"}, {"4", "2"}}),
          make_term({{"4", "0"}, {"0", "1"}}), make_term({{"4", "0"}, {"0", "2"}}),
      },
      Relation::leq, Rational(2));
  log.check("step 5 equals the ten-term bound-2 inequality exactly",
            current.coefficients() == eq40.coefficients());
  log.check("club-with-0 sequence is a facet",
            is_facet(alternative, cap).verdict == FaceVerdict::facet);
  log.check("club-with-0 sequence is inequivalent", !equivalent(alternative, current, cap));
}

void reproduce_fig2_case_two(AssertionLog& log, std::size_t cap) {
  const auto e29 = fig2_inequality_29();
  log.check("ten-term inequality is a facet", is_facet(e29, cap).verdict == FaceVerdict::facet);
  log.check("measurement 4 does not contribute",
            contributing_measurements(e29, cap) ==
                std::vector<std::string>({"0", "1", "2", "3"}));

  auto ext = extend_with_measurement(e29.scenario(), "5", {"0", "1"}, {"0", "1", "2", "3"});
  log.check("extension matches the six-measurement scenario",
            ext.extended == chsh_spectator_extended_scenario());
  auto lifts = lift_measurement(e29, ext, std::nullopt, cap);
  log.check("post-selected lifting applies, one lift per outcome",
            lifts.size() == 2 &&
                lifts[0].record.kind == LiftRecord::Kind::measurement_case_two &&
                lifts[1].record.kind == LiftRecord::Kind::measurement_case_two);

  const auto extended_index = lifts[0].inequality.index();
  for (std::size_t k = 0; k < lifts.size(); ++k) {
    const auto a_k = std::to_string(k);
    log.check("post-selected lift at outcome " + a_k + " is a facet",
              is_facet(lifts[k].inequality, cap).verdict == FaceVerdict::facet);
    const auto printed = inequality_from_terms(
        extended_index,
        {
            make_term({{"0", "1"}, {"1", "0"}, {"5", a_k}}),
            make_term({{"0", "0"}, {"1", "1"}, {"5", a_k}}),
            make_term({{"1", "1"}, {"2", "0"}, {"5", a_k}}),
            make_term({{"1", "0"}, {"2", "1"}, {"5", a_k}}),
            make_term({{"2", "1"}, {"3", "0"}, {"5", a_k}}),
            make_term({{"2", "0"}, {"3", "1"}, {"5", a_k}}),
            make_term({{"3", "0"}, {"0", "1"}, {"5", a_k}}, -1),
            make_term({{"3", "1"}, {"0", "0"}, {"5", a_k}}, -1),
        },
        Relation::geq, Rational(0));
    log.check("lift at outcome " + a_k + " matches the printed form exactly",
              lifts[k].inequality.coefficients() == printed.coefficients());
  }

  // The traced-out construction applied against the case dichotomy: valid but
  // not a facet, and equal to the sum of the two post-selected lifts on every
  // vertex.
  const auto eff = effective_form(e29, cap);
  const Inequality traced(extended_index,
                          trace_out_coefficients(eff, ext, *extended_index));
  log.check("traced-out construction is valid", is_valid(traced, cap));
  const auto traced_report = is_facet(traced, cap);
  log.check("traced-out construction is not a facet",
            traced_report.verdict == FaceVerdict::proper_face_lower_dim);
  bool sums = true;
  for (const auto& v : enumerate_vertices(extended_index, cap)) {
    if (evaluate(traced, v.vector) !=
        evaluate(lifts[0].inequality, v.vector) + evaluate(lifts[1].inequality, v.vector)) {
      sums = false;
      break;
    }
  }
  log.check("traced-out value equals the sum of both post-selected lifts on every vertex", sums);
}

void reproduce_fig1_gallery(AssertionLog& log, std::size_t cap) {
  // Incompatible pair and pairwise-incompatible triple.
  const Scenario pair_incompat({{"A", {"0", "1"}}, {"B", {"0", "1"}}}, {});
  log.check("incompatible pair polytope is 2-dimensional", nc_dimension(pair_incompat, cap) == 2);
  auto triple_ext = extend_with_measurement(pair_incompat, "C", {"0", "1"}, {});
  log.check("incompatible triple polytope is 3-dimensional",
            nc_dimension(triple_ext.extended, cap) == 3);

  const auto pair_index = make_event_index(pair_incompat);
  std::vector<Rational> square_coeffs(pair_index->size());
  square_coeffs[pair_index->position({"A"}, {"0"})] = 1;  // p(0|A) >= 0
  const Inequality square_facet(pair_index, square_coeffs);
  log.check("square nonnegativity inequality is a facet",
            is_facet(square_facet, cap).verdict == FaceVerdict::facet);

  auto lifted = lift_measurement(square_facet, triple_ext, std::nullopt, cap);
  log.check("square facet lifts by tracing out",
            lifted.size() == 1 &&
                lifted.front().record.kind == LiftRecord::Kind::measurement_case_one);
  const auto report = is_facet(lifted.front().inequality, cap);
  log.check("lifted square facet is a facet", report.verdict == FaceVerdict::facet);
  const auto sats = saturating_vertices(lifted.front().inequality, cap);
  const bool extensions_only =
      sats.size() == 4 && std::all_of(sats.begin(), sats.end(), [](const Vertex& v) {
        return v.outcome_of("A") == "1";
      });
  log.check("lifted facet is saturated by exactly the four extensions of the A=1 vertices",
            extensions_only && report.vertex_count == 8);

  // Single measurement and compatible pair.
  const Scenario single({{"A", {"0", "1"}}}, {});
  log.check("single-measurement polytope is 1-dimensional", nc_dimension(single, cap) == 1);
  auto compat_ext = extend_with_measurement(single, "B", {"0", "1"}, {"A"});
  log.check("compatible pair polytope is 3-dimensional",
            nc_dimension(compat_ext.extended, cap) == 3);

  const auto single_index = make_event_index(single);
  std::vector<Rational> segment_coeffs(single_index->size());
  segment_coeffs[single_index->position({"A"}, {"1"})] = 1;  // p(1|A) >= 0
  const Inequality segment_facet(single_index, segment_coeffs);
  log.check("segment nonnegativity inequality is a facet",
            is_facet(segment_facet, cap).verdict == FaceVerdict::facet);
  for (const auto& b_k : {"0", "1"}) {
    auto lifts = lift_measurement(segment_facet, compat_ext, std::string(b_k), cap);
    const auto& lift = lifts.front();
    log.check(std::string("post-selected lift at B=") + b_k + " is a facet",
              lift.record.kind == LiftRecord::Kind::measurement_case_two &&
                  is_facet(lift.inequality, cap).verdict == FaceVerdict::facet);
    log.check(std::string("post-selected lift at B=") + b_k +
                  " is saturated by 3 of 4 tetrahedron vertices",
              saturating_vertices(lift.inequality, cap).size() == 3);
  }

  // Affine dependency of the incompatible pair.
  auto v = [&](const char* a, const char* b) {
    return vertex_of(pair_index, std::map<std::string, std::string>{{"A", a}, {"B", b}}).vector;
  };
  const auto dependency = v("0", "0") - v("0", "1") + v("1", "1") - v("1", "0");
  log.check("v00 - v01 + v11 - v10 vanishes exactly",
            dependency == CorrelationVector::zero(pair_index));
}

}  // namespace

Json reproduce(const std::string& name, const Options& options) {
  AssertionLog log;
  if (name == "chsh-antiheptagon") {
    reproduce_chsh_antiheptagon(log, options.cap_vertices);
  } else if (name == "kcbs-c5-3out") {
    reproduce_kcbs_trichotomic(log, options.cap_vertices);
  } else if (name == "fig2-caseII") {
    reproduce_fig2_case_two(log, options.cap_vertices);
  } else if (name == "fig1-gallery") {
    reproduce_fig1_gallery(log, options.cap_vertices);
  } else {
    throw std::invalid_argument(
        "unknown reproduction '" + name +
        "' (expected chsh-antiheptagon, kcbs-c5-3out, fig2-caseII or fig1-gallery)");
  }
  Json report;
  report["command"] = "reproduce";
  report["name"] = name;
  report["assertions"] = log.entries;
  report["passed"] = log.all_passed;
  return report;
}

int exit_code(const Json& report) {
  if (report.contains("passed") && !report["passed"].get<bool>()) return 1;
  return 0;
}

}  // namespace nclift::cli
