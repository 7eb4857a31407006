#include "nclift/lifting.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "nclift/errors.hpp"

namespace nclift {

const char* to_string(LiftRecord::Kind kind) {
  switch (kind) {
    case LiftRecord::Kind::measurement_case_one: return "measurement-I";
    case LiftRecord::Kind::measurement_case_two: return "measurement-II";
    case LiftRecord::Kind::outcome: return "outcome";
  }
  return "?";
}

namespace {

std::set<std::vector<std::string>> member_set(const std::vector<Context>& contexts) {
  std::set<std::vector<std::string>> out;
  for (const auto& c : contexts) out.insert(c.members);
  return out;
}

// Positions of each name of `sub` within the sorted member list `super`.
std::vector<std::size_t> slots_of(const std::vector<std::string>& sub,
                                  const std::vector<std::string>& super) {
  std::vector<std::size_t> slots;
  slots.reserve(sub.size());
  for (const auto& name : sub) {
    const auto it = std::lower_bound(super.begin(), super.end(), name);
    slots.push_back(static_cast<std::size_t>(it - super.begin()));
  }
  return slots;
}

std::vector<std::size_t> decode_block_event(const EventIndex& index, std::size_t ci,
                                            std::size_t e) {
  const auto& strides = index.member_strides(ci);
  std::vector<std::size_t> digits(strides.size());
  for (std::size_t k = 0; k < strides.size(); ++k) {
    digits[k] = e / strides[k];
    e %= strides[k];
  }
  return digits;
}

bool contributing_subset_of_neighbors(const std::vector<std::string>& contributing,
                                      const MeasurementExtension& ext) {
  std::set<std::string> neighbor_set(ext.neighbors.begin(), ext.neighbors.end());
  return std::all_of(contributing.begin(), contributing.end(),
                     [&](const std::string& m) { return neighbor_set.count(m) != 0; });
}

}  // namespace

std::vector<Rational> trace_out_coefficients(const EffectiveForm& eff,
                                             const MeasurementExtension& ext,
                                             const EventIndex& extended_index) {
  const auto& base_index = *eff.symmetrized.index();
  const auto old_set = member_set(ext.contexts_old);
  const auto mc_set = member_set(ext.contexts_mc);

  std::vector<Rational> out(extended_index.size());
  for (std::size_t ci = 0; ci < extended_index.context_count(); ++ci) {
    const auto& members = extended_index.context(ci).members;
    const std::size_t off = extended_index.block_offset(ci);
    if (old_set.count(members)) {
      // Unchanged context: identical block layout on both sides.
      const std::size_t bci = base_index.context_index(members);
      const std::size_t boff = base_index.block_offset(bci);
      for (std::size_t e = 0; e < extended_index.block_size(ci); ++e) {
        out[off + e] = eff.symmetrized.coefficient(boff + e);
      }
    } else if (mc_set.count(members)) {
      // Extended maximal context: same coefficient whatever the new outcome.
      std::vector<std::string> rest;
      for (const auto& m : members) {
        if (m != ext.measurement) rest.push_back(m);
      }
      const std::size_t bci = base_index.context_index(rest);
      const auto rest_slots = slots_of(rest, members);
      for (std::size_t e = 0; e < extended_index.block_size(ci); ++e) {
        const auto digits = decode_block_event(extended_index, ci, e);
        std::vector<std::size_t> bdigits(rest.size());
        for (std::size_t k = 0; k < rest.size(); ++k) bdigits[k] = digits[rest_slots[k]];
        out[off + e] = eff.symmetrized.coefficient(base_index.position(bci, bdigits));
      }
    }
    // contexts_pc blocks stay zero.
  }
  return out;
}

std::vector<Rational> post_select_coefficients(const EffectiveForm& eff,
                                               const MeasurementExtension& ext,
                                               const EventIndex& extended_index,
                                               const std::string& a_k) {
  const auto& eff_index = *eff.effective.index();
  const std::size_t a_id = ext.extended.index_of(ext.measurement);
  const std::size_t k_id = ext.extended.outcome_id(a_id, a_k);

  // Contexts of the extended scenario containing the new measurement, keyed by
  // the remaining members U, in lexicographic order of U.
  std::vector<std::pair<std::vector<std::string>, std::size_t>> with_a;
  for (std::size_t ci = 0; ci < extended_index.context_count(); ++ci) {
    const auto& members = extended_index.context(ci).members;
    if (!extended_index.context(ci).contains(ext.measurement)) continue;
    std::vector<std::string> u;
    for (const auto& m : members) {
      if (m != ext.measurement) u.push_back(m);
    }
    with_a.emplace_back(std::move(u), ci);
  }
  std::sort(with_a.begin(), with_a.end());

  // Assign every effective context W to the lexicographically smallest U that
  // contains it; the coefficient over (a_k, U) sums the assigned tables.
  std::vector<std::vector<std::size_t>> assigned(with_a.size());
  for (std::size_t w = 0; w < eff_index.context_count(); ++w) {
    const auto& wm = eff_index.context(w).members;
    bool placed = false;
    for (std::size_t u = 0; u < with_a.size() && !placed; ++u) {
      if (std::includes(with_a[u].first.begin(), with_a[u].first.end(), wm.begin(), wm.end())) {
        assigned[u].push_back(w);
        placed = true;
      }
    }
    if (!placed) {
      throw std::logic_error("effective context not contained in any context of the extension");
    }
  }

  std::vector<Rational> out(extended_index.size());
  for (std::size_t u = 0; u < with_a.size(); ++u) {
    if (assigned[u].empty()) continue;
    const std::size_t ci = with_a[u].second;
    const auto& members = extended_index.context(ci).members;
    const std::size_t off = extended_index.block_offset(ci);
    const std::size_t a_slot = slots_of({ext.measurement}, members)[0];
    // Slot maps from each assigned effective context into this context.
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> maps;  // (W, slots in members)
    for (std::size_t w : assigned[u]) {
      maps.emplace_back(w, slots_of(eff_index.context(w).members, members));
    }
    for (std::size_t e = 0; e < extended_index.block_size(ci); ++e) {
      const auto digits = decode_block_event(extended_index, ci, e);
      if (digits[a_slot] != k_id) continue;
      Rational sum = 0;
      for (const auto& [w, slots] : maps) {
        std::vector<std::size_t> wdigits(slots.size());
        for (std::size_t k = 0; k < slots.size(); ++k) wdigits[k] = digits[slots[k]];
        sum += eff.effective.coefficient(eff_index.position(w, wdigits));
      }
      out[off + e] = sum;
    }
  }
  return out;
}

LiftedInequality lift_measurement_case_one(const EffectiveForm& eff,
                                           const MeasurementExtension& ext) {
  if (!(eff.symmetrized.scenario() == ext.base)) {
    throw std::invalid_argument("inequality is not over the extension's base scenario");
  }
  if (contributing_subset_of_neighbors(eff.contributing, ext)) {
    throw std::invalid_argument(
        "case I does not apply: '" + ext.measurement +
        "' is compatible with every contributing measurement (use case II)");
  }
  auto extended_index = make_event_index(ext.extended);
  auto coeffs = trace_out_coefficients(eff, ext, *extended_index);
  auto provenance = eff.symmetrized.provenance();
  provenance.push_back({"measurement-I", ext.measurement, std::nullopt, std::nullopt});
  Inequality lifted(std::move(extended_index), std::move(coeffs), std::nullopt,
                    std::move(provenance));
  return LiftedInequality{
      std::move(lifted),
      LiftRecord{LiftRecord::Kind::measurement_case_one, ext, std::nullopt, std::nullopt,
                 eff.symmetrized}};
}

LiftedInequality lift_measurement_case_two(const EffectiveForm& eff,
                                           const MeasurementExtension& ext,
                                           const std::string& a_k) {
  if (!(eff.symmetrized.scenario() == ext.base)) {
    throw std::invalid_argument("inequality is not over the extension's base scenario");
  }
  if (!contributing_subset_of_neighbors(eff.contributing, ext)) {
    throw std::invalid_argument("case II does not apply: '" + ext.measurement +
                                "' is incompatible with a contributing measurement (use case I)");
  }
  auto extended_index = make_event_index(ext.extended);
  auto coeffs = post_select_coefficients(eff, ext, *extended_index, a_k);  // validates a_k
  auto provenance = eff.symmetrized.provenance();
  provenance.push_back({"measurement-II", ext.measurement, a_k, std::nullopt});
  Inequality lifted(std::move(extended_index), std::move(coeffs), std::nullopt,
                    std::move(provenance));
  return LiftedInequality{
      std::move(lifted),
      LiftRecord{LiftRecord::Kind::measurement_case_two, ext, a_k, std::nullopt,
                 eff.symmetrized}};
}

std::vector<LiftedInequality> lift_measurement(const Inequality& ineq,
                                               const MeasurementExtension& ext,
                                               std::optional<std::string> a_k, std::size_t cap) {
  if (!(ineq.scenario() == ext.base)) {
    throw std::invalid_argument("inequality is not over the extension's base scenario");
  }
  const auto eff = effective_form(ineq, cap);
  std::vector<LiftedInequality> out;
  if (!contributing_subset_of_neighbors(eff.contributing, ext)) {
    out.push_back(lift_measurement_case_one(eff, ext));  // any requested a_k is ignored
    return out;
  }
  if (a_k) {
    out.push_back(lift_measurement_case_two(eff, ext, *a_k));
    return out;
  }
  for (const auto& outcome : ext.outcomes) {
    out.push_back(lift_measurement_case_two(eff, ext, outcome));
  }
  return out;
}

namespace {

std::vector<std::size_t> assignment_at(const Scenario& s, std::size_t ordinal) {
  std::vector<std::size_t> digits(s.size(), 0);
  for (std::size_t m = s.size(); m-- > 0;) {
    const std::size_t radix = s.measurement(m).outcomes.size();
    digits[m] = ordinal % radix;
    ordinal /= radix;
  }
  return digits;
}

// Remark-style exclusion test: A compatible with every contributing
// measurement and every non-saturating vertex assigns a_k to A.
bool outcome_lift_excluded(const Inequality& ineq, const OutcomeExtension& ext,
                           const std::string& a_k, std::size_t cap) {
  const auto& base = ext.base;
  const std::size_t a_id = base.index_of(ext.measurement);
  for (const auto& m : contributing_measurements(ineq, cap)) {
    if (!base.compatible(base.index_of(m), a_id)) return false;
  }
  const std::size_t k_id = base.outcome_id(a_id, a_k);
  const std::size_t count = assignment_count(base, cap);
  for (std::size_t ordinal = 0; ordinal < count; ++ordinal) {
    const auto assignment = assignment_at(base, ordinal);
    if (assignment[a_id] == k_id) continue;
    if (evaluate_assignment(ineq, assignment) != 0) return false;
  }
  return true;
}

}  // namespace

LiftedInequality lift_outcome(const Inequality& ineq, const OutcomeExtension& ext,
                              const std::string& a_k, std::size_t cap) {
  if (!(ineq.scenario() == ext.base)) {
    throw std::invalid_argument("inequality is not over the extension's base scenario");
  }
  const std::size_t a_id = ext.base.index_of(ext.measurement);
  const std::size_t k_id = ext.base.outcome_id(a_id, a_k);  // throws on unknown a_k
  if (a_k == ext.new_outcome) {
    throw std::invalid_argument("cannot club the new outcome with itself");
  }
  if (outcome_lift_excluded(ineq, ext, a_k, cap)) {
    throw ExclusionRejected(
        "clubbing '" + ext.new_outcome + "' with '" + a_k + "' rejected: the inequality " +
        "post-selects on outcome '" + a_k + "' of '" + ext.measurement +
        "' (every non-saturating vertex assigns it), so the construction would decompose " +
        "into two post-selected facets");
  }

  const auto& base_index = *ineq.index();
  auto extended_index = make_event_index(ext.extended);
  const std::size_t new_id = ext.base.measurement(a_id).outcomes.size();

  std::vector<Rational> out(extended_index->size());
  for (std::size_t ci = 0; ci < extended_index->context_count(); ++ci) {
    const auto& members = extended_index->context(ci).members;
    const std::size_t off = extended_index->block_offset(ci);
    const std::size_t bci = base_index.context_index(members);
    const auto it = std::find(members.begin(), members.end(), ext.measurement);
    const bool has_a = it != members.end();
    const auto a_slot = static_cast<std::size_t>(it - members.begin());
    for (std::size_t e = 0; e < extended_index->block_size(ci); ++e) {
      auto digits = decode_block_event(*extended_index, ci, e);
      if (has_a && digits[a_slot] == new_id) digits[a_slot] = k_id;  // club a_0 with a_k
      out[off + e] = ineq.coefficient(base_index.position(bci, digits));
    }
  }
  auto provenance = ineq.provenance();
  provenance.push_back({"outcome", ext.measurement, a_k, ext.new_outcome});
  Inequality lifted(std::move(extended_index), std::move(out), std::nullopt,
                    std::move(provenance));
  return LiftedInequality{std::move(lifted),
                          LiftRecord{LiftRecord::Kind::outcome, ext, a_k, ext.new_outcome, ineq}};
}

std::vector<LiftedInequality> lift_outcome_choices(const Inequality& ineq,
                                                   const OutcomeExtension& ext, std::size_t cap) {
  std::vector<LiftedInequality> out;
  for (const auto& outcome : ineq.scenario().outcomes_of(ext.measurement)) {
    try {
      out.push_back(lift_outcome(ineq, ext, outcome, cap));
    } catch (const ExclusionRejected&) {
      // Excluded clubbing: not a lifting.
    }
  }
  return out;
}

Inequality unlift_measurement(const LiftedInequality& lifted) {
  if (lifted.record.kind == LiftRecord::Kind::outcome) {
    throw std::invalid_argument("outcome lifts are not invertible by unlift_measurement");
  }
  const auto& ext = std::get<MeasurementExtension>(lifted.record.extension);
  const auto& lifted_index = *lifted.inequality.index();
  auto base_index = make_event_index(ext.base);
  std::vector<Rational> out(base_index->size());

  if (lifted.record.kind == LiftRecord::Kind::measurement_case_one) {
    const auto old_set = member_set(ext.contexts_old);
    for (std::size_t bci = 0; bci < base_index->context_count(); ++bci) {
      const auto& members = base_index->context(bci).members;
      const std::size_t boff = base_index->block_offset(bci);
      if (old_set.count(members)) {
        const std::size_t ci = lifted_index.context_index(members);
        const std::size_t off = lifted_index.block_offset(ci);
        for (std::size_t e = 0; e < base_index->block_size(bci); ++e) {
          out[boff + e] = lifted.inequality.coefficient(off + e);
        }
        continue;
      }
      // Read any outcome slice of the extended context; all must agree.
      std::vector<std::string> extended_members = members;
      extended_members.push_back(ext.measurement);
      std::sort(extended_members.begin(), extended_members.end());
      const std::size_t ci = lifted_index.context_index(extended_members);
      const auto member_slots = slots_of(members, extended_members);
      const std::size_t a_slot = slots_of({ext.measurement}, extended_members)[0];
      const std::size_t a_radix = ext.extended.outcomes_of(ext.measurement).size();
      for (std::size_t e = 0; e < base_index->block_size(bci); ++e) {
        const auto bdigits = decode_block_event(*base_index, bci, e);
        std::vector<std::size_t> digits(extended_members.size(), 0);
        for (std::size_t k = 0; k < members.size(); ++k) digits[member_slots[k]] = bdigits[k];
        digits[a_slot] = 0;
        const Rational value = lifted.inequality.coefficient(lifted_index.position(ci, digits));
        for (std::size_t a = 1; a < a_radix; ++a) {
          digits[a_slot] = a;
          if (lifted.inequality.coefficient(lifted_index.position(ci, digits)) != value) {
            throw std::invalid_argument(
                "malformed traced-out coefficients: outcome slices of '" + ext.measurement +
                "' disagree");
          }
        }
        out[boff + e] = value;
      }
    }
    return Inequality(std::move(base_index), std::move(out));
  }

  // Case two: write each (a_k, U) slice onto the lexicographically smallest
  // maximal base context extending U, spread over the completion outcomes.
  const std::string a_k = *lifted.record.chosen_outcome;
  const std::size_t a_id = ext.extended.index_of(ext.measurement);
  const std::size_t k_id = ext.extended.outcome_id(a_id, a_k);
  for (std::size_t ci = 0; ci < lifted_index.context_count(); ++ci) {
    const auto& members = lifted_index.context(ci).members;
    if (!lifted_index.context(ci).contains(ext.measurement)) continue;
    std::vector<std::string> u;
    for (const auto& m : members) {
      if (m != ext.measurement) u.push_back(m);
    }
    // Lexicographically smallest base maximal context containing U; the base
    // context list is already in lexicographic order.
    std::size_t host = base_index->context_count();
    for (std::size_t c = 0; c < base_index->context_count(); ++c) {
      const auto& candidate = base_index->context(c).members;
      if (std::includes(candidate.begin(), candidate.end(), u.begin(), u.end())) {
        host = c;
        break;
      }
    }
    if (host == base_index->context_count()) {
      throw std::invalid_argument("no base maximal context extends a lifted context");
    }
    const auto& host_members = base_index->context(host).members;
    const auto u_host_slots = slots_of(u, host_members);
    const auto u_ext_slots = slots_of(u, members);
    const std::size_t a_slot = slots_of({ext.measurement}, members)[0];
    const std::size_t hoff = base_index->block_offset(host);
    for (std::size_t e = 0; e < base_index->block_size(host); ++e) {
      const auto hdigits = decode_block_event(*base_index, host, e);
      std::vector<std::size_t> digits(members.size(), 0);
      for (std::size_t k = 0; k < u.size(); ++k) digits[u_ext_slots[k]] = hdigits[u_host_slots[k]];
      digits[a_slot] = k_id;
      out[hoff + e] += lifted.inequality.coefficient(lifted_index.position(ci, digits));
    }
  }
  return Inequality(std::move(base_index), std::move(out));
}

LiftedInequality sequential_lift(const Inequality& start, const std::vector<LiftStep>& steps,
                                 std::size_t cap) {
  if (steps.empty()) throw std::invalid_argument("sequential lift requires at least one step");
  std::optional<LiftedInequality> current;
  const Inequality* source = &start;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& step = steps[i];
    try {
      if (step.op == LiftStep::Op::add_measurement) {
        auto ext = extend_with_measurement(source->scenario(), step.name, step.outcomes,
                                           step.neighbors);
        auto results = lift_measurement(*source, ext, step.choice, cap);
        if (results.size() != 1) {
          throw std::invalid_argument("case II applies to '" + step.name +
                                      "': an outcome choice is required");
        }
        current = std::move(results.front());
      } else {
        auto ext = extend_with_outcome(source->scenario(), step.name, step.new_outcome);
        if (!step.choice) {
          throw std::invalid_argument("outcome step for '" + step.name +
                                      "' requires a clubbing choice");
        }
        current = lift_outcome(*source, ext, *step.choice, cap);
      }
    } catch (const LiftStepError&) {
      throw;
    } catch (const std::exception& e) {
      throw LiftStepError(i, e.what());
    }
    source = &current->inequality;
  }
  return std::move(*current);
}

namespace {

void explore_branches(const Inequality& start, std::optional<LiftedInequality> last,
                      const std::vector<LiftStep>& steps, std::size_t next, std::size_t cap,
                      std::vector<LiftedInequality>& out) {
  const Inequality& current = last ? last->inequality : start;
  if (next == steps.size()) {
    out.push_back(std::move(*last));
    return;
  }
  const auto& step = steps[next];
  std::vector<LiftedInequality> results;
  try {
    if (step.op == LiftStep::Op::add_measurement) {
      auto ext = extend_with_measurement(current.scenario(), step.name, step.outcomes,
                                         step.neighbors);
      results = lift_measurement(current, ext, step.choice, cap);
    } else {
      auto ext = extend_with_outcome(current.scenario(), step.name, step.new_outcome);
      if (step.choice) {
        results.push_back(lift_outcome(current, ext, *step.choice, cap));
      } else {
        results = lift_outcome_choices(current, ext, cap);
        if (results.empty()) {
          throw std::invalid_argument("every clubbing choice for '" + step.name +
                                      "' is excluded");
        }
      }
    }
  } catch (const LiftStepError&) {
    throw;
  } catch (const std::exception& e) {
    throw LiftStepError(next, e.what());
  }
  for (auto& r : results) {
    explore_branches(start, std::move(r), steps, next + 1, cap, out);
  }
}

}  // namespace

std::vector<LiftedInequality> sequential_lift_all(const Inequality& start,
                                                  const std::vector<LiftStep>& steps,
                                                  std::size_t cap) {
  if (steps.empty()) throw std::invalid_argument("sequential lift requires at least one step");
  std::vector<LiftedInequality> out;
  explore_branches(start, std::nullopt, steps, 0, cap, out);
  return out;
}

}  // namespace nclift
