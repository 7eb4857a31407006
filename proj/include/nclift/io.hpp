#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nclift/inequality.hpp"
#include "nclift/lifting.hpp"
#include "nclift/polytope.hpp"
#include "nclift/scenario.hpp"

namespace nclift {

using Json = nlohmann::ordered_json;

// -- scenario files ----------------------------------------------------------
// {"measurements":[{"name":"0","outcomes":["0","1"]},...],
//  "compatible":[["0","1"],["1","2"],...]}

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

// -- correlation files -------------------------------------------------------
// {"scenario":<inline object or path string>,
//  "values":[{"context":["0","1"],"outcome":["0","1"],"p":"1/2"},...]}
// Omitted entries default to 0; emission follows canonical event order.

Json correlation_to_json(const CorrelationVector& q);
CorrelationVector correlation_from_json(const nlohmann::json& j,
                                        const std::filesystem::path& base_dir);
CorrelationVector load_correlation(const std::filesystem::path& path);

// -- inequality files --------------------------------------------------------
// {"scenario":<inline or path>,"relation":"leq"|"geq","bound":"3",
//  "terms":[{"context":["0","1"],"outcome":["0","0"],"coeff":"1"}]}
// The loader canonicalizes to zero-bound form and keeps the written form for
// display. Emission always writes the canonical form (relation "geq",
// bound "0", nonzero terms in canonical event order).

Json inequality_to_json(const Inequality& ineq);
Inequality inequality_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
Inequality load_inequality(const std::filesystem::path& path);

// -- lift plan files ---------------------------------------------------------
// {"start_inequality":"path",
//  "steps":[{"op":"add_measurement","name":"4","outcomes":["0","1"],
//            "neighbors":["0","1","2"]},
//           {"op":"add_outcome","measurement":"0","new":"2","club_with":"1"}]}
// add_measurement accepts an optional "choose_outcome"; add_outcome may omit
// "club_with" to fan out over every admissible clubbing.

struct LiftPlan {
  std::filesystem::path start_inequality;
  std::vector<LiftStep> steps;
};

LiftPlan load_lift_plan(const std::filesystem::path& path);

// -- helpers -----------------------------------------------------------------

void save_json(const std::filesystem::path& path, const Json& j);
/// Loads as plain (unordered) json: loaders do not depend on key order, and a
/// uniform type avoids conversion temporaries at the call sites.
nlohmann::json load_json(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of the file bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

Json provenance_to_json(const std::vector<ProvenanceEntry>& chain);

}  // namespace nclift
