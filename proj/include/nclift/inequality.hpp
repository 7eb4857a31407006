#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nclift/polytope.hpp"
#include "nclift/rational.hpp"
#include "nclift/scenario.hpp"

namespace nclift {

enum class Relation { geq, leq };

/// One term of an inequality as written in files: a coefficient attached to a
/// joint outcome of a context. The context may be any clique; terms over
/// non-maximal cliques are expanded into the lexicographically smallest
/// maximal context containing them.
struct InequalityTerm {
  std::vector<std::string> context;  // sorted member names
  std::vector<std::string> outcome;  // aligned with context
  Rational coeff;
};

/// The pre-canonicalization form an inequality was written in, for display.
struct SourceForm {
  Relation relation = Relation::geq;
  Rational bound;
  std::vector<InequalityTerm> terms;
};

/// One step of lifting provenance (display metadata).
struct ProvenanceEntry {
  std::string kind;         // "measurement-I", "measurement-II" or "outcome"
  std::string measurement;  // added measurement, or the outcome-extended one
  std::optional<std::string> chosen_outcome;   // a_k for measurement-II / outcome
  std::optional<std::string> clubbed_outcome;  // a_0 for outcome lifts
};

/// Noncontextuality inequality in canonical zero-bound form: the predicate is
/// b . p >= 0 over the scenario's event index.
class Inequality {
 public:
  Inequality(EventIndexPtr index, std::vector<Rational> coefficients,
             std::optional<SourceForm> source = std::nullopt,
             std::vector<ProvenanceEntry> provenance = {});

  const EventIndexPtr& index() const { return index_; }
  const Scenario& scenario() const { return index_->scenario(); }
  const std::vector<Rational>& coefficients() const { return coefficients_; }
  const Rational& coefficient(std::size_t pos) const { return coefficients_[pos]; }
  const std::optional<SourceForm>& source_form() const { return source_; }
  const std::vector<ProvenanceEntry>& provenance() const { return provenance_; }

 private:
  EventIndexPtr index_;
  std::vector<Rational> coefficients_;
  std::optional<SourceForm> source_;
  std::vector<ProvenanceEntry> provenance_;
};

enum class FaceVerdict { facet, proper_face_lower_dim, improper_whole_polytope, invalid };

const char* to_string(FaceVerdict v);

struct FacetReport {
  bool valid = false;
  std::size_t saturating_count = 0;
  std::size_t saturating_affine_rank = 0;
  std::size_t polytope_dimension = 0;
  std::size_t vertex_count = 0;
  FaceVerdict verdict = FaceVerdict::invalid;
};

/// Rewrites c.p >= beta (or <= beta) to the zero-bound form by spreading the
/// bound over the per-context normalization: for <=, b(s|C) = beta/n - c(s|C);
/// for >=, b(s|C) = c(s|C) - beta/n, with n the number of maximal contexts.
Inequality normalize_zero_bound(const EventIndexPtr& index, const std::vector<Rational>& coeffs,
                                Relation relation, const Rational& bound,
                                std::optional<SourceForm> source = std::nullopt);

/// Builds the raw coefficient vector of a term list (partial contexts expanded).
std::vector<Rational> coefficients_from_terms(const EventIndex& index,
                                              const std::vector<InequalityTerm>& terms);

/// Term list -> canonical inequality; the written form is kept for display.
Inequality inequality_from_terms(const EventIndexPtr& index,
                                 const std::vector<InequalityTerm>& terms, Relation relation,
                                 const Rational& bound);

Rational evaluate(const Inequality& ineq, const CorrelationVector& q);

/// Value on the deterministic correlation of a full outcome assignment; walks
/// the surviving coefficient of each context instead of a dense dot product.
Rational evaluate_assignment(const Inequality& ineq, std::span<const std::size_t> assignment);

bool is_valid(const Inequality& ineq, std::size_t cap = default_vertex_cap);

/// Vertices with b . v = 0, in canonical vertex order; requires validity.
std::vector<Vertex> saturating_vertices(const Inequality& ineq,
                                        std::size_t cap = default_vertex_cap);

FacetReport is_facet(const Inequality& ineq, std::size_t cap = default_vertex_cap);

/// Measurements whose outcome can change the value on some vertex, by name.
std::vector<std::string> contributing_measurements(const Inequality& ineq,
                                                   std::size_t cap = default_vertex_cap);

/// An inequality brought to outcome-symmetric form for every non-contributing
/// measurement, together with the single-valued effective coefficient table
/// over the induced sub-scenario of contributing measurements.
struct EffectiveForm {
  Inequality symmetrized;                 // over the original scenario
  std::vector<std::string> contributing;  // sorted by name
  Inequality effective;                   // the b(s|U) table over restrict(S, contributing)
};

EffectiveForm effective_form(const Inequality& ineq, std::size_t cap = default_vertex_cap);

/// Equality up to positive scaling as functionals on all vertices.
bool equivalent(const Inequality& a, const Inequality& b, std::size_t cap = default_vertex_cap);

}  // namespace nclift
