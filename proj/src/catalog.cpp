#include "nclift/catalog.hpp"

#include <stdexcept>

namespace nclift {

namespace {

std::vector<Scenario::Measurement> uniform_measurements(std::size_t n, std::size_t outcomes) {
  std::vector<Scenario::Measurement> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Scenario::Measurement m;
    m.name = std::to_string(i);
    for (std::size_t o = 0; o < outcomes; ++o) m.outcomes.push_back(std::to_string(o));
    out.push_back(std::move(m));
  }
  return out;
}

InequalityTerm term(std::vector<std::pair<std::string, std::string>> events, long coeff = 1) {
  InequalityTerm t;
  for (auto& [m, o] : events) {
    t.context.push_back(std::move(m));
    t.outcome.push_back(std::move(o));
  }
  t.coeff = coeff;
  return t;
}

}  // namespace

Scenario cycle_scenario(std::size_t n, std::size_t outcomes_per_measurement) {
  if (n < 3) throw std::invalid_argument("cycle scenario requires n >= 3");
  if (outcomes_per_measurement < 1) throw std::invalid_argument("at least one outcome required");
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(std::to_string(i), std::to_string((i + 1) % n));
  }
  return Scenario(uniform_measurements(n, outcomes_per_measurement), edges);
}

Scenario complement_cycle_scenario(std::size_t n) {
  if (n < 5) throw std::invalid_argument("cycle complement is degenerate for n < 5");
  // Vertex order of the underlying cycle; for n = 7 the numbering below makes
  // {0,1,2,3} an induced 4-cycle of the complement.
  std::vector<std::size_t> cycle(n);
  for (std::size_t i = 0; i < n; ++i) cycle[i] = i;
  if (n == 7) cycle = {0, 2, 5, 4, 3, 1, 6};
  std::vector<std::vector<bool>> on_cycle(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = cycle[i];
    const std::size_t b = cycle[(i + 1) % n];
    on_cycle[a][b] = on_cycle[b][a] = true;
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!on_cycle[i][j]) edges.emplace_back(std::to_string(i), std::to_string(j));
    }
  }
  return Scenario(uniform_measurements(n, 2), edges);
}

Inequality chsh_inequality() {
  auto index = make_event_index(cycle_scenario(4, 2));
  const std::vector<InequalityTerm> terms = {
      term({{"0", "0"}, {"1", "0"}}), term({{"0", "1"}, {"1", "1"}}),
      term({{"1", "0"}, {"2", "0"}}), term({{"1", "1"}, {"2", "1"}}),
      term({{"2", "0"}, {"3", "0"}}), term({{"2", "1"}, {"3", "1"}}),
      term({{"3", "0"}, {"0", "1"}}), term({{"3", "1"}, {"0", "0"}}),
  };
  return inequality_from_terms(index, terms, Relation::leq, Rational(3));
}

Inequality kcbs_inequality() {
  auto index = make_event_index(cycle_scenario(5, 2));
  const std::vector<InequalityTerm> terms = {
      term({{"0", "0"}, {"1", "1"}}), term({{"1", "0"}, {"2", "1"}}),
      term({{"2", "0"}, {"3", "1"}}), term({{"3", "0"}, {"4", "1"}}),
      term({{"4", "0"}, {"0", "1"}}),
  };
  return inequality_from_terms(index, terms, Relation::leq, Rational(2));
}

Scenario chsh_spectator_scenario() {
  auto measurements = uniform_measurements(5, 2);
  const std::vector<std::pair<std::string, std::string>> edges = {
      {"0", "1"}, {"1", "2"}, {"2", "3"}, {"3", "0"}, {"4", "0"}, {"4", "1"}, {"4", "2"},
  };
  return Scenario(std::move(measurements), edges);
}

Scenario chsh_spectator_extended_scenario() {
  auto measurements = uniform_measurements(6, 2);
  const std::vector<std::pair<std::string, std::string>> edges = {
      {"0", "1"}, {"1", "2"}, {"2", "3"}, {"3", "0"}, {"4", "0"}, {"4", "1"}, {"4", "2"},
      {"5", "0"}, {"5", "1"}, {"5", "2"}, {"5", "3"},
  };
  return Scenario(std::move(measurements), edges);
}

Inequality fig2_inequality_29() {
  auto index = make_event_index(chsh_spectator_scenario());
  const std::vector<InequalityTerm> terms = {
      term({{"0", "0"}, {"1", "1"}, {"4", "0"}}),
      term({{"0", "0"}, {"1", "1"}, {"4", "1"}}),
      term({{"0", "1"}, {"1", "0"}, {"4", "0"}}),
      term({{"0", "1"}, {"1", "0"}, {"4", "1"}}),
      term({{"1", "0"}, {"2", "1"}}),
      term({{"1", "1"}, {"2", "0"}}),
      term({{"2", "0"}, {"3", "1"}}),
      term({{"2", "1"}, {"3", "0"}}),
      term({{"3", "0"}, {"0", "1"}}, -1),
      term({{"3", "1"}, {"0", "0"}}, -1),
  };
  return inequality_from_terms(index, terms, Relation::geq, Rational(0));
}

std::vector<NamedFixture> named_fixtures() {
  std::vector<NamedFixture> out;
  out.push_back({"cycle4-chsh", cycle_scenario(4, 2), {chsh_inequality()}});
  out.push_back({"cycle5-kcbs", cycle_scenario(5, 2), {kcbs_inequality()}});
  out.push_back({"chsh-spectator", chsh_spectator_scenario(), {fig2_inequality_29()}});
  out.push_back({"anti-heptagon", complement_cycle_scenario(7), {}});
  return out;
}

}  // namespace nclift
