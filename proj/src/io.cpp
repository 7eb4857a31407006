#include "nclift/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "nclift/errors.hpp"

namespace nclift {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, const std::string& what) {
  throw ParseError(path.string() + ": " + what);
}

const nlohmann::json& require_key(const nlohmann::json& j, const std::string& key,
                                  const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ParseError(where + ": expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Rational rational_field(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (!j.is_string()) throw ParseError(where + ": rationals must be \"num/den\" strings");
  try {
    return rational_from_string(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

// Scenario given inline or as a path relative to the referencing file.
Scenario scenario_field(const nlohmann::json& j, const std::filesystem::path& base_dir,
                        const std::string& where) {
  if (j.is_string()) {
    return load_scenario(base_dir / j.get<std::string>());
  }
  if (j.is_object()) return scenario_from_json(j);
  throw ParseError(where + ": 'scenario' must be an object or a path string");
}

}  // namespace

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["measurements"] = Json::array();
  for (const auto& m : s.measurements()) {
    Json entry;
    entry["name"] = m.name;
    entry["outcomes"] = m.outcomes;
    j["measurements"].push_back(std::move(entry));
  }
  j["compatible"] = Json::array();
  for (const auto& [a, b] : s.compatible_pairs()) {
    j["compatible"].push_back(Json::array({a, b}));
  }
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  std::vector<Scenario::Measurement> measurements;
  for (const auto& m : require_key(j, "measurements", "scenario")) {
    Scenario::Measurement out;
    out.name = require_key(m, "name", "scenario measurement").get<std::string>();
    out.outcomes = string_list(require_key(m, "outcomes", "scenario measurement"),
                               "measurement outcomes");
    measurements.push_back(std::move(out));
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  if (j.contains("compatible")) {
    for (const auto& p : j["compatible"]) {
      const auto pair = string_list(p, "compatible pair");
      if (pair.size() != 2) throw ParseError("compatible pair must have exactly two names");
      pairs.emplace_back(pair[0], pair[1]);
    }
  }
  try {
    return Scenario(std::move(measurements), pairs);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(load_json(path));
}

Json correlation_to_json(const CorrelationVector& q) {
  const auto& index = *q.index();
  Json j;
  j["scenario"] = scenario_to_json(index.scenario());
  j["values"] = Json::array();
  for (std::size_t ci = 0; ci < index.context_count(); ++ci) {
    const auto& members = index.context(ci).members;
    for (std::size_t e = 0; e < index.block_size(ci); ++e) {
      const auto pos = index.block_offset(ci) + e;
      if (q[pos] == 0) continue;
      auto [dci, digits] = index.decode(pos);
      Json entry;
      entry["context"] = members;
      std::vector<std::string> labels(members.size());
      for (std::size_t k = 0; k < members.size(); ++k) {
        labels[k] =
            index.scenario().measurement(index.member_ids(ci)[k]).outcomes[digits[k]];
      }
      entry["outcome"] = labels;
      entry["p"] = rational_to_string(q[pos]);
      j["values"].push_back(std::move(entry));
    }
  }
  return j;
}

CorrelationVector correlation_from_json(const nlohmann::json& j,
                                        const std::filesystem::path& base_dir) {
  auto scenario = scenario_field(require_key(j, "scenario", "correlation"), base_dir,
                                 "correlation");
  auto index = make_event_index(std::move(scenario));
  CorrelationVector q = CorrelationVector::zero(index);
  if (j.contains("values")) {
    for (const auto& entry : j["values"]) {
      const auto context = string_list(require_key(entry, "context", "correlation value"),
                                       "correlation context");
      const auto outcome = string_list(require_key(entry, "outcome", "correlation value"),
                                       "correlation outcome");
      const auto p = rational_field(require_key(entry, "p", "correlation value"),
                                    "correlation value");
      auto sorted_context = context;
      auto sorted_outcome = outcome;
      std::vector<std::size_t> order(context.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return context[a] < context[b]; });
      for (std::size_t i = 0; i < order.size(); ++i) {
        sorted_context[i] = context[order[i]];
        sorted_outcome[i] = outcome[order[i]];
      }
      try {
        q[index->position(sorted_context, sorted_outcome)] = p;
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("correlation value: ") + e.what());
      }
    }
  }
  return q;
}

CorrelationVector load_correlation(const std::filesystem::path& path) {
  return correlation_from_json(load_json(path), path.parent_path());
}

Json inequality_to_json(const Inequality& ineq) {
  const auto& index = *ineq.index();
  Json j;
  j["scenario"] = scenario_to_json(index.scenario());
  j["relation"] = "geq";
  j["bound"] = "0";
  j["terms"] = Json::array();
  for (std::size_t ci = 0; ci < index.context_count(); ++ci) {
    const auto& members = index.context(ci).members;
    for (std::size_t e = 0; e < index.block_size(ci); ++e) {
      const auto pos = index.block_offset(ci) + e;
      if (ineq.coefficient(pos) == 0) continue;
      auto [dci, digits] = index.decode(pos);
      Json entry;
      entry["context"] = members;
      std::vector<std::string> labels(members.size());
      for (std::size_t k = 0; k < members.size(); ++k) {
        labels[k] =
            index.scenario().measurement(index.member_ids(ci)[k]).outcomes[digits[k]];
      }
      entry["outcome"] = labels;
      entry["coeff"] = rational_to_string(ineq.coefficient(pos));
      j["terms"].push_back(std::move(entry));
    }
  }
  return j;
}

Inequality inequality_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  auto scenario = scenario_field(require_key(j, "scenario", "inequality"), base_dir,
                                 "inequality");
  auto index = make_event_index(std::move(scenario));
  const auto relation_text = require_key(j, "relation", "inequality").get<std::string>();
  Relation relation;
  if (relation_text == "geq") {
    relation = Relation::geq;
  } else if (relation_text == "leq") {
    relation = Relation::leq;
  } else {
    throw ParseError("inequality: relation must be \"leq\" or \"geq\"");
  }
  const Rational bound = rational_field(require_key(j, "bound", "inequality"), "inequality bound");
  std::vector<InequalityTerm> terms;
  for (const auto& entry : require_key(j, "terms", "inequality")) {
    InequalityTerm t;
    t.context = string_list(require_key(entry, "context", "inequality term"), "term context");
    t.outcome = string_list(require_key(entry, "outcome", "inequality term"), "term outcome");
    t.coeff = rational_field(require_key(entry, "coeff", "inequality term"), "term coefficient");
    terms.push_back(std::move(t));
  }
  try {
    return inequality_from_terms(index, terms, relation, bound);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("inequality: ") + e.what());
  }
}

Inequality load_inequality(const std::filesystem::path& path) {
  return inequality_from_json(load_json(path), path.parent_path());
}

LiftPlan load_lift_plan(const std::filesystem::path& path) {
  const auto j = load_json(path);
  LiftPlan plan;
  plan.start_inequality =
      path.parent_path() / require_key(j, "start_inequality", "lift plan").get<std::string>();
  for (const auto& entry : require_key(j, "steps", "lift plan")) {
    const auto op = require_key(entry, "op", "lift step").get<std::string>();
    LiftStep step;
    if (op == "add_measurement") {
      step.op = LiftStep::Op::add_measurement;
      step.name = require_key(entry, "name", "add_measurement step").get<std::string>();
      step.outcomes = string_list(require_key(entry, "outcomes", "add_measurement step"),
                                  "step outcomes");
      step.neighbors = string_list(require_key(entry, "neighbors", "add_measurement step"),
                                   "step neighbors");
      if (entry.contains("choose_outcome")) {
        step.choice = entry["choose_outcome"].get<std::string>();
      }
    } else if (op == "add_outcome") {
      step.op = LiftStep::Op::add_outcome;
      step.name = require_key(entry, "measurement", "add_outcome step").get<std::string>();
      step.new_outcome = require_key(entry, "new", "add_outcome step").get<std::string>();
      if (entry.contains("club_with")) {
        step.choice = entry["club_with"].get<std::string>();
      }
    } else {
      parse_fail(path, "unknown lift step op '" + op + "'");
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

void save_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail(path, "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(path, e.what());
  }
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail(path, "cannot open file");
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << h;
  return hex.str();
}

Json provenance_to_json(const std::vector<ProvenanceEntry>& chain) {
  Json out = Json::array();
  for (const auto& entry : chain) {
    Json e;
    e["kind"] = entry.kind;
    e["measurement"] = entry.measurement;
    if (entry.chosen_outcome) e["chosen_outcome"] = *entry.chosen_outcome;
    if (entry.clubbed_outcome) e["clubbed_outcome"] = *entry.clubbed_outcome;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace nclift
