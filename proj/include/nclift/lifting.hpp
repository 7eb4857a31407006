#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nclift/inequality.hpp"
#include "nclift/polytope.hpp"
#include "nclift/scenario.hpp"

namespace nclift {

/// Provenance of one lifted inequality: which extension, which construction,
/// and the outcome choices involved. Holds everything needed to invert.
struct LiftRecord {
  enum class Kind { measurement_case_one, measurement_case_two, outcome };

  Kind kind;
  std::variant<MeasurementExtension, OutcomeExtension> extension;
  std::optional<std::string> chosen_outcome;   // a_k (case-two and outcome lifts)
  std::optional<std::string> clubbed_outcome;  // a_0 (outcome lifts)
  Inequality source;
};

const char* to_string(LiftRecord::Kind kind);

struct LiftedInequality {
  Inequality inequality;  // over the extended scenario, zero-bound form
  LiftRecord record;
};

/// Raw coefficient builders for the two measurement constructions. They do not
/// enforce the case preconditions, so tests can apply a construction against
/// the case dichotomy on purpose.
std::vector<Rational> trace_out_coefficients(const EffectiveForm& eff,
                                             const MeasurementExtension& ext,
                                             const EventIndex& extended_index);
std::vector<Rational> post_select_coefficients(const EffectiveForm& eff,
                                               const MeasurementExtension& ext,
                                               const EventIndex& extended_index,
                                               const std::string& a_k);

/// Case I: the new measurement is traced out. Requires it to be incompatible
/// with at least one contributing measurement.
LiftedInequality lift_measurement_case_one(const EffectiveForm& eff,
                                           const MeasurementExtension& ext);

/// Case II: post-selection on outcome a_k of the new measurement. Requires the
/// new measurement to be compatible with every contributing measurement.
LiftedInequality lift_measurement_case_two(const EffectiveForm& eff,
                                           const MeasurementExtension& ext,
                                           const std::string& a_k);

/// Automatic case selection from the contributing set and the neighborhood:
/// case I yields one result (any requested a_k is ignored); case II yields one
/// result per outcome of the new measurement, or just the requested one.
std::vector<LiftedInequality> lift_measurement(const Inequality& ineq,
                                               const MeasurementExtension& ext,
                                               std::optional<std::string> a_k = std::nullopt,
                                               std::size_t cap = default_vertex_cap);

/// Outcome lifting: club the new outcome with the pre-existing a_k. Throws
/// ExclusionRejected when the source post-selects on a_k (its contributing
/// measurements are all compatible with the extended measurement and every
/// non-saturating vertex assigns a_k to it).
LiftedInequality lift_outcome(const Inequality& ineq, const OutcomeExtension& ext,
                              const std::string& a_k, std::size_t cap = default_vertex_cap);

/// All clubbings that pass the exclusion check, in outcome order.
std::vector<LiftedInequality> lift_outcome_choices(const Inequality& ineq,
                                                   const OutcomeExtension& ext,
                                                   std::size_t cap = default_vertex_cap);

/// Inverse of measurement lifting; the result is equivalent (as a functional
/// on vertices) to the lift's source inequality.
Inequality unlift_measurement(const LiftedInequality& lifted);

/// One step of a sequential lift plan.
struct LiftStep {
  enum class Op { add_measurement, add_outcome };

  Op op;
  std::string name;                    // new measurement / extended measurement
  std::vector<std::string> outcomes;   // add_measurement only
  std::vector<std::string> neighbors;  // add_measurement only
  std::string new_outcome;             // add_outcome only
  std::optional<std::string> choice;   // a_k (case-two pin / clubbing outcome)
};

/// Folds the steps over the inequality along a single choice path. Steps that
/// would fan out (case II or clubbing without an explicit choice) raise a
/// LiftStepError carrying the step position.
LiftedInequality sequential_lift(const Inequality& start, const std::vector<LiftStep>& steps,
                                 std::size_t cap = default_vertex_cap);

/// Explores every choice branch; results are ordered by outcome choice at each
/// branching step.
std::vector<LiftedInequality> sequential_lift_all(const Inequality& start,
                                                  const std::vector<LiftStep>& steps,
                                                  std::size_t cap = default_vertex_cap);

}  // namespace nclift
