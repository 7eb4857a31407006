#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nclift {

/// A set of pairwise-compatible measurements, members sorted lexicographically.
struct Context {
  std::vector<std::string> members;

  bool contains(const std::string& name) const;
  auto operator<=>(const Context&) const = default;
};

/// A measurement scenario: named measurements with outcome label sets and a
/// symmetric, irreflexively stored compatibility relation (treated reflexive).
/// The canonical list of maximal contexts is fixed at construction: each
/// context sorted internally, the list sorted lexicographically. Immutable.
class Scenario {
 public:
  struct Measurement {
    std::string name;
    std::vector<std::string> outcomes;
    friend bool operator==(const Measurement&, const Measurement&) = default;
  };

  static constexpr std::size_t max_measurements = 32;

  Scenario();
  Scenario(std::vector<Measurement> measurements,
           const std::vector<std::pair<std::string, std::string>>& compatible);

  std::size_t size() const { return measurements_.size(); }
  const std::vector<Measurement>& measurements() const { return measurements_; }
  const Measurement& measurement(std::size_t i) const { return measurements_[i]; }

  bool has_measurement(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;  // throws std::invalid_argument
  const std::vector<std::string>& outcomes_of(const std::string& name) const;
  std::size_t outcome_id(std::size_t measurement, const std::string& label) const;

  bool compatible(std::size_t a, std::size_t b) const;  // reflexive
  bool compatible(const std::string& a, const std::string& b) const;
  std::uint64_t neighbor_mask(std::size_t m) const { return adjacency_[m]; }

  /// Stored pairs in canonical form: each pair sorted, list sorted.
  std::vector<std::pair<std::string, std::string>> compatible_pairs() const;

  const std::vector<Context>& maximal_contexts() const { return contexts_; }

  friend bool operator==(const Scenario& a, const Scenario& b);

 private:
  std::vector<Measurement> measurements_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::uint64_t> adjacency_;  // bit j set iff j compatible, no self bits
  std::vector<Context> contexts_;
};

/// Extension of a scenario by one measurement, with the three-way partition of
/// the extended scenario's maximal contexts: contexts_old (not containing the
/// new measurement), contexts_mc (new measurement joined to a maximal context
/// of the base) and contexts_pc (joined to a partial context of the base).
struct MeasurementExtension {
  Scenario base;
  Scenario extended;
  std::string measurement;                // the added measurement A
  std::vector<std::string> outcomes;      // its outcome set
  std::vector<std::string> neighbors;     // J, sorted
  std::vector<Context> contexts_old;
  std::vector<Context> contexts_mc;
  std::vector<Context> contexts_pc;
};

/// Extension of a scenario by one new outcome for an existing measurement.
/// The maximal contexts of the extended scenario equal the base's.
struct OutcomeExtension {
  Scenario base;
  Scenario extended;
  std::string measurement;   // A
  std::string new_outcome;   // a_0, appended after the pre-existing outcomes
};

MeasurementExtension extend_with_measurement(const Scenario& s, const std::string& name,
                                             std::vector<std::string> outcomes,
                                             const std::vector<std::string>& neighbors);

OutcomeExtension extend_with_outcome(const Scenario& s, const std::string& measurement,
                                     const std::string& new_outcome);

/// Shortest induced (chordless) cycle of length >= 4, if any. Ties are broken
/// by the lexicographically smallest sorted member list; the returned order
/// starts at the smallest member and proceeds toward its smaller neighbor.
std::optional<std::vector<std::string>> find_induced_cycle(const Scenario& s);

/// Induced sub-scenario on the given measurements (declaration order kept).
Scenario restrict_to(const Scenario& s, const std::vector<std::string>& keep);

}  // namespace nclift
