#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nclift/rational.hpp"
#include "nclift/scenario.hpp"

namespace nclift {

/// Canonical indexing of the correlation vector space of a scenario: one
/// component per (maximal context, joint outcome) pair, contexts in canonical
/// order, joint outcomes in mixed-radix order over the sorted context members
/// (last member fastest). The total length is the ambient dimension.
class EventIndex {
 public:
  explicit EventIndex(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  std::size_t size() const { return total_; }
  std::size_t context_count() const { return scenario_.maximal_contexts().size(); }
  const Context& context(std::size_t ci) const { return scenario_.maximal_contexts()[ci]; }
  std::size_t context_index(const std::vector<std::string>& members) const;  // throws

  std::size_t block_offset(std::size_t ci) const { return offsets_[ci]; }
  std::size_t block_size(std::size_t ci) const { return sizes_[ci]; }
  /// Measurement declaration indices of the context members (sorted-name order).
  const std::vector<std::size_t>& member_ids(std::size_t ci) const { return member_ids_[ci]; }
  const std::vector<std::size_t>& member_strides(std::size_t ci) const { return strides_[ci]; }

  std::size_t position(std::size_t ci, std::span<const std::size_t> outcome_ids) const;
  std::size_t position(const std::vector<std::string>& context_members,
                       const std::vector<std::string>& outcome_labels) const;
  /// Position of the event selected in context ci by a full outcome assignment
  /// (one outcome id per measurement, declaration order).
  std::size_t position_for_assignment(std::size_t ci,
                                      std::span<const std::size_t> assignment) const;
  /// Inverse of position: (context index, outcome ids over sorted members).
  std::pair<std::size_t, std::vector<std::size_t>> decode(std::size_t position) const;

  friend bool operator==(const EventIndex& a, const EventIndex& b) {
    return a.scenario_ == b.scenario_;
  }

 private:
  Scenario scenario_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<std::size_t>> member_ids_;
  std::vector<std::vector<std::size_t>> strides_;
  std::map<std::vector<std::string>, std::size_t> context_lookup_;
  std::size_t total_ = 0;
};

using EventIndexPtr = std::shared_ptr<const EventIndex>;

EventIndexPtr make_event_index(Scenario scenario);

/// Exact-rational vector over an EventIndex. Also used for raw coefficient
/// vectors; correlation-specific predicates are checked on demand.
class CorrelationVector {
 public:
  CorrelationVector(EventIndexPtr index, std::vector<Rational> values);
  static CorrelationVector zero(EventIndexPtr index);

  const EventIndexPtr& index() const { return index_; }
  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  Rational& operator[](std::size_t i) { return values_[i]; }
  const std::vector<Rational>& values() const { return values_; }

  bool is_normalized() const;   // every context block sums to exactly 1
  bool is_nonnegative() const;
  bool is_correlation() const { return is_normalized() && is_nonnegative(); }

  friend bool operator==(const CorrelationVector& a, const CorrelationVector& b);

 private:
  EventIndexPtr index_;
  std::vector<Rational> values_;
};

bool same_index(const EventIndexPtr& a, const EventIndexPtr& b);
void require_same_index(const CorrelationVector& a, const CorrelationVector& b);

Rational dot(const CorrelationVector& a, const CorrelationVector& b);
CorrelationVector operator+(const CorrelationVector& a, const CorrelationVector& b);
CorrelationVector operator-(const CorrelationVector& a, const CorrelationVector& b);
CorrelationVector operator*(const Rational& c, const CorrelationVector& v);

/// Deterministic 0/1 correlation of a global outcome assignment.
struct Vertex {
  std::vector<std::size_t> assignment;  // outcome id per measurement, declaration order
  CorrelationVector vector;

  std::string outcome_of(const std::string& measurement) const;
  std::map<std::string, std::string> assignment_labels() const;
};

inline constexpr std::size_t default_vertex_cap = 100000;

std::size_t ambient_dimension(const Scenario& s);

/// Number of global assignments; throws CapExceeded above the cap.
std::size_t assignment_count(const Scenario& s, std::size_t cap = default_vertex_cap);

Vertex vertex_of(const EventIndexPtr& index, std::span<const std::size_t> assignment);
Vertex vertex_of(const EventIndexPtr& index, const std::map<std::string, std::string>& assignment);

/// All vertices, in mixed-radix lexicographic order of assignments (last
/// declared measurement fastest).
std::vector<Vertex> enumerate_vertices(const EventIndexPtr& index,
                                       std::size_t cap = default_vertex_cap);

/// Incremental exact affine-rank computation over points fed one at a time.
/// The first point becomes the base; subsequent points are row-reduced
/// differences (first nonzero column pivot, insertion order).
class AffineRankAccumulator {
 public:
  /// Returns true when the point increased the rank.
  bool add_point(const std::vector<Rational>& point);
  std::size_t rank() const { return has_base_ ? pivot_rows_.size() + 1 : 0; }

 private:
  bool has_base_ = false;
  std::vector<Rational> base_;
  struct PivotRow {
    std::size_t column;
    std::vector<Rational> row;  // normalized so row[column] == 1
  };
  std::vector<PivotRow> pivot_rows_;
};

/// Maximum number of affinely independent points among the inputs, which all
/// must share an index. Zero for empty input.
std::size_t affine_rank(const std::vector<CorrelationVector>& vectors);

/// Affine dimension of the noncontextual polytope: affine rank of the vertex
/// set minus one.
std::size_t nc_dimension(const Scenario& s, std::size_t cap = default_vertex_cap);

/// Exact marginal agreement over every pair of overlapping maximal contexts.
/// Requires a normalized nonnegative vector.
bool check_no_disturbance(const CorrelationVector& q);

/// Result of the exact membership test against the noncontextual polytope:
/// either convex weights over vertices reproducing q, or a separating
/// zero-bound coefficient vector (nonnegative on every vertex, negative at q).
struct Membership {
  bool noncontextual = false;
  std::vector<std::pair<std::size_t, Rational>> weights;  // (assignment ordinal, weight)
  std::optional<CorrelationVector> separating;
};

Membership decide_membership(const CorrelationVector& q, std::size_t cap = default_vertex_cap);

/// Marginalization over the added measurement of a no-disturbance correlation
/// on the extended scenario; throws DisturbanceError on disturbing input.
CorrelationVector marginalize(const CorrelationVector& q, const MeasurementExtension& ext);

/// Coarse-graining that clubs the new outcome with a_k for the extended
/// measurement: the a_k components absorb the a_0 ones, the rest are copied.
CorrelationVector coarse_grain(const CorrelationVector& q, const OutcomeExtension& ext,
                               const std::string& a_k);

}  // namespace nclift
