#include "nclift/inequality.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "nclift/errors.hpp"
#include "nclift/parallel.hpp"

namespace nclift {

Inequality::Inequality(EventIndexPtr index, std::vector<Rational> coefficients,
                       std::optional<SourceForm> source, std::vector<ProvenanceEntry> provenance)
    : index_(std::move(index)),
      coefficients_(std::move(coefficients)),
      source_(std::move(source)),
      provenance_(std::move(provenance)) {
  if (coefficients_.size() != index_->size()) {
    throw std::invalid_argument("coefficient vector length does not match event index");
  }
}

const char* to_string(FaceVerdict v) {
  switch (v) {
    case FaceVerdict::facet: return "facet";
    case FaceVerdict::proper_face_lower_dim: return "proper-face-lower-dim";
    case FaceVerdict::improper_whole_polytope: return "improper-whole-polytope";
    case FaceVerdict::invalid: return "invalid";
  }
  return "?";
}

Inequality normalize_zero_bound(const EventIndexPtr& index, const std::vector<Rational>& coeffs,
                                Relation relation, const Rational& bound,
                                std::optional<SourceForm> source) {
  if (coeffs.size() != index->size()) {
    throw std::invalid_argument("coefficient vector length does not match event index");
  }
  const std::size_t n = index->context_count();
  std::vector<Rational> out(coeffs.size());
  if (n == 0) {
    return Inequality(index, std::move(out), std::move(source));
  }
  const Rational share = bound / Rational(static_cast<long>(n));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out[i] = (relation == Relation::leq) ? share - coeffs[i] : coeffs[i] - share;
  }
  return Inequality(index, std::move(out), std::move(source));
}

std::vector<Rational> coefficients_from_terms(const EventIndex& index,
                                              const std::vector<InequalityTerm>& terms) {
  const auto& s = index.scenario();
  std::vector<Rational> coeffs(index.size());
  for (const auto& term : terms) {
    if (term.context.size() != term.outcome.size()) {
      throw std::invalid_argument("term outcome tuple length does not match its context");
    }
    auto members = term.context;
    auto labels = term.outcome;
    // Sort members (labels alongside) so files may list contexts in any order.
    std::vector<std::size_t> order(members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return members[a] < members[b]; });
    std::vector<std::string> sorted_members(members.size()), sorted_labels(members.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      sorted_members[i] = members[order[i]];
      sorted_labels[i] = labels[order[i]];
    }

    // Direct event when the clique is maximal; otherwise expand over the
    // lexicographically smallest maximal context containing it.
    bool direct = true;
    std::size_t ci = 0;
    try {
      ci = index.context_index(sorted_members);
    } catch (const std::invalid_argument&) {
      direct = false;
    }
    if (direct) {
      coeffs[index.position(sorted_members, sorted_labels)] += term.coeff;
      continue;
    }
    ci = index.context_count();
    for (std::size_t c = 0; c < index.context_count(); ++c) {
      const auto& host = index.context(c).members;
      if (std::includes(host.begin(), host.end(), sorted_members.begin(), sorted_members.end())) {
        ci = c;
        break;  // contexts are in lexicographic order already
      }
    }
    if (ci == index.context_count()) {
      std::string joined;
      for (const auto& m : sorted_members) joined += (joined.empty() ? "" : ",") + m;
      throw std::invalid_argument("term context {" + joined + "} is not a clique of the scenario");
    }
    const auto& host = index.context(ci).members;
    std::vector<std::size_t> fixed_slot;
    std::vector<std::size_t> fixed_digit;
    std::vector<std::size_t> free_slot;
    for (std::size_t k = 0; k < host.size(); ++k) {
      const auto it = std::find(sorted_members.begin(), sorted_members.end(), host[k]);
      if (it == sorted_members.end()) {
        free_slot.push_back(k);
      } else {
        fixed_slot.push_back(k);
        fixed_digit.push_back(
            s.outcome_id(index.member_ids(ci)[k],
                         sorted_labels[static_cast<std::size_t>(it - sorted_members.begin())]));
      }
    }
    std::size_t combos = 1;
    for (std::size_t k : free_slot) combos *= s.measurement(index.member_ids(ci)[k]).outcomes.size();
    for (std::size_t t = 0; t < combos; ++t) {
      std::vector<std::size_t> digits(host.size(), 0);
      for (std::size_t k = 0; k < fixed_slot.size(); ++k) digits[fixed_slot[k]] = fixed_digit[k];
      std::size_t rem = t;
      for (std::size_t k = free_slot.size(); k-- > 0;) {
        const std::size_t radix =
            s.measurement(index.member_ids(ci)[free_slot[k]]).outcomes.size();
        digits[free_slot[k]] = rem % radix;
        rem /= radix;
      }
      coeffs[index.position(ci, digits)] += term.coeff;
    }
  }
  return coeffs;
}

Inequality inequality_from_terms(const EventIndexPtr& index,
                                 const std::vector<InequalityTerm>& terms, Relation relation,
                                 const Rational& bound) {
  auto coeffs = coefficients_from_terms(*index, terms);
  SourceForm form{relation, bound, terms};
  return normalize_zero_bound(index, coeffs, relation, bound, std::move(form));
}

Rational evaluate(const Inequality& ineq, const CorrelationVector& q) {
  if (!same_index(ineq.index(), q.index())) {
    throw std::invalid_argument("inequality and vector indexed by different scenarios");
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (ineq.coefficient(i) != 0 && q[i] != 0) sum += ineq.coefficient(i) * q[i];
  }
  return sum;
}

Rational evaluate_assignment(const Inequality& ineq, std::span<const std::size_t> assignment) {
  const auto& index = *ineq.index();
  Rational sum = 0;
  for (std::size_t ci = 0; ci < index.context_count(); ++ci) {
    sum += ineq.coefficient(index.position_for_assignment(ci, assignment));
  }
  return sum;
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

// Values of the inequality on every vertex, in canonical assignment order.
std::vector<Rational> vertex_values(const Inequality& ineq, std::size_t cap) {
  const auto& s = ineq.scenario();
  const std::size_t count = assignment_count(s, cap);
  std::vector<Rational> vals(count);
  parallel_for(count, [&](std::size_t ordinal) {
    vals[ordinal] = evaluate_assignment(ineq, assignment_at(s, ordinal));
  });
  return vals;
}

}  // namespace

bool is_valid(const Inequality& ineq, std::size_t cap) {
  const auto vals = vertex_values(ineq, cap);
  return std::all_of(vals.begin(), vals.end(), [](const Rational& v) { return v >= 0; });
}

std::vector<Vertex> saturating_vertices(const Inequality& ineq, std::size_t cap) {
  const auto& s = ineq.scenario();
  const auto vals = vertex_values(ineq, cap);
  if (std::any_of(vals.begin(), vals.end(), [](const Rational& v) { return v < 0; })) {
    throw std::invalid_argument("saturating set requested for an invalid inequality");
  }
  std::vector<Vertex> out;
  for (std::size_t ordinal = 0; ordinal < vals.size(); ++ordinal) {
    if (vals[ordinal] == 0) out.push_back(vertex_of(ineq.index(), assignment_at(s, ordinal)));
  }
  return out;
}

FacetReport is_facet(const Inequality& ineq, std::size_t cap) {
  const auto& s = ineq.scenario();
  const auto vals = vertex_values(ineq, cap);

  FacetReport report;
  report.vertex_count = vals.size();
  report.valid = std::all_of(vals.begin(), vals.end(), [](const Rational& v) { return v >= 0; });

  AffineRankAccumulator all_rank;
  AffineRankAccumulator sat_rank;
  for (std::size_t ordinal = 0; ordinal < vals.size(); ++ordinal) {
    const auto point = vertex_of(ineq.index(), assignment_at(s, ordinal)).vector.values();
    all_rank.add_point(point);
    if (vals[ordinal] == 0) {
      ++report.saturating_count;
      sat_rank.add_point(point);
    }
  }
  report.polytope_dimension = all_rank.rank() == 0 ? 0 : all_rank.rank() - 1;
  report.saturating_affine_rank = sat_rank.rank();

  if (!report.valid) {
    report.verdict = FaceVerdict::invalid;
  } else if (report.saturating_count == report.vertex_count) {
    report.verdict = FaceVerdict::improper_whole_polytope;
  } else if (report.saturating_affine_rank == report.polytope_dimension) {
    report.verdict = FaceVerdict::facet;
  } else {
    report.verdict = FaceVerdict::proper_face_lower_dim;
  }
  return report;
}

namespace {

std::vector<bool> contributing_mask(const Inequality& ineq, const std::vector<Rational>& vals) {
  const auto& s = ineq.scenario();
  std::vector<bool> contributes(s.size(), false);
  // Strides of each measurement in assignment-ordinal space.
  std::vector<std::size_t> stride(s.size(), 1);
  for (std::size_t m = s.size(); m-- > 1;) {
    stride[m - 1] = stride[m] * s.measurement(m).outcomes.size();
  }
  for (std::size_t m = 0; m < s.size(); ++m) {
    const std::size_t radix = s.measurement(m).outcomes.size();
    if (radix == 1) continue;
    bool found = false;
    for (std::size_t ordinal = 0; ordinal < vals.size() && !found; ++ordinal) {
      if ((ordinal / stride[m]) % radix != 0) continue;
      for (std::size_t j = 1; j < radix; ++j) {
        if (vals[ordinal + j * stride[m]] != vals[ordinal]) {
          found = true;
          break;
        }
      }
    }
    contributes[m] = found;
  }
  return contributes;
}

}  // namespace

std::vector<std::string> contributing_measurements(const Inequality& ineq, std::size_t cap) {
  const auto vals = vertex_values(ineq, cap);
  const auto mask = contributing_mask(ineq, vals);
  const auto& s = ineq.scenario();
  std::vector<std::string> names;
  for (std::size_t m = 0; m < s.size(); ++m) {
    if (mask[m]) names.push_back(s.measurement(m).name);
  }
  std::sort(names.begin(), names.end());
  return names;
}

EffectiveForm effective_form(const Inequality& ineq, std::size_t cap) {
  const auto& index = *ineq.index();
  const auto& s = index.scenario();
  const auto vals = vertex_values(ineq, cap);
  const auto mask = contributing_mask(ineq, vals);

  // Symmetrization pass: average each non-contributing measurement's outcome
  // slices within every context containing it. The value on every vertex is
  // unchanged because the measurement is non-contributing, and the passes for
  // different measurements commute.
  std::vector<Rational> sym = ineq.coefficients();
  for (std::size_t m = 0; m < s.size(); ++m) {
    if (mask[m]) continue;
    const std::size_t radix = s.measurement(m).outcomes.size();
    if (radix == 1) continue;
    for (std::size_t ci = 0; ci < index.context_count(); ++ci) {
      const auto& ids = index.member_ids(ci);
      const auto it = std::find(ids.begin(), ids.end(), m);
      if (it == ids.end()) continue;
      const std::size_t slot = static_cast<std::size_t>(it - ids.begin());
      const std::size_t stride = index.member_strides(ci)[slot];
      const std::size_t off = index.block_offset(ci);
      for (std::size_t e = 0; e < index.block_size(ci); ++e) {
        const std::size_t digit = (e / stride) % radix;
        if (digit != 0) continue;
        Rational avg = 0;
        for (std::size_t j = 0; j < radix; ++j) avg += sym[off + e + j * stride];
        avg /= Rational(static_cast<long>(radix));
        for (std::size_t j = 0; j < radix; ++j) sym[off + e + j * stride] = avg;
      }
    }
  }

  std::vector<std::string> contributing;
  for (std::size_t m = 0; m < s.size(); ++m) {
    if (mask[m]) contributing.push_back(s.measurement(m).name);
  }
  Scenario s_eff = restrict_to(s, contributing);
  auto index_eff = make_event_index(std::move(s_eff));
  std::sort(contributing.begin(), contributing.end());

  // Build the effective table: each context C of S contributes its symmetric
  // slice, as a function of the contributing part of C, spread over the
  // lexicographically smallest effective context containing that part.
  std::vector<Rational> table(index_eff->size());
  Rational orphan_constant = 0;  // accumulates slices with no host context
  for (std::size_t ci = 0; ci < index.context_count(); ++ci) {
    const auto& members = index.context(ci).members;
    const auto& ids = index.member_ids(ci);
    std::vector<std::size_t> part_slots;  // slots of contributing members in C
    std::vector<std::string> part;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (mask[ids[k]]) {
        part_slots.push_back(k);
        part.push_back(members[k]);
      }
    }
    // Host: lexicographically smallest effective context containing `part`.
    std::size_t host = index_eff->context_count();
    for (std::size_t c = 0; c < index_eff->context_count(); ++c) {
      const auto& candidate = index_eff->context(c).members;
      if (std::includes(candidate.begin(), candidate.end(), part.begin(), part.end())) {
        host = c;
        break;
      }
    }
    if (host == index_eff->context_count()) {
      if (index_eff->context_count() != 0) {
        throw std::logic_error("contributing part of a context is not an effective clique");
      }
      // No effective contexts at all: only an overall constant can remain.
      std::vector<std::size_t> zeros(members.size(), 0);
      orphan_constant += sym[index.position(ci, zeros)];
      continue;
    }
    const auto& host_members = index_eff->context(host).members;
    std::vector<std::size_t> part_host_slots;
    for (const auto& name : part) {
      part_host_slots.push_back(static_cast<std::size_t>(
          std::find(host_members.begin(), host_members.end(), name) - host_members.begin()));
    }
    // For each joint outcome of `part`, read the symmetric representative
    // (non-contributing digits at 0) and add it to every extending host event.
    std::size_t part_combos = 1;
    for (std::size_t k : part_slots) part_combos *= s.measurement(ids[k]).outcomes.size();
    for (std::size_t t = 0; t < part_combos; ++t) {
      std::vector<std::size_t> digits(members.size(), 0);
      std::size_t rem = t;
      std::vector<std::size_t> part_digits(part_slots.size());
      for (std::size_t k = part_slots.size(); k-- > 0;) {
        const std::size_t radix = s.measurement(ids[part_slots[k]]).outcomes.size();
        part_digits[k] = rem % radix;
        rem /= radix;
        digits[part_slots[k]] = part_digits[k];
      }
      const Rational value = sym[index.position(ci, digits)];
      if (value == 0) continue;
      const std::size_t hoff = index_eff->block_offset(host);
      for (std::size_t e = 0; e < index_eff->block_size(host); ++e) {
        std::size_t erem = e;
        bool match = true;
        for (std::size_t k = 0; k < host_members.size() && match; ++k) {
          const std::size_t digit = erem / index_eff->member_strides(host)[k];
          erem %= index_eff->member_strides(host)[k];
          for (std::size_t pk = 0; pk < part_host_slots.size(); ++pk) {
            if (part_host_slots[pk] == k && digit != part_digits[pk]) {
              match = false;
              break;
            }
          }
        }
        if (match) table[hoff + e] += value;
      }
    }
  }
  if (orphan_constant != 0) {
    throw ReconciliationError(
        "no effective coefficient table exists: the inequality has constant value " +
        rational_to_string(orphan_constant) + " but no contributing measurement");
  }

  EffectiveForm out{
      Inequality(ineq.index(), std::move(sym), std::nullopt, ineq.provenance()),
      std::move(contributing),
      Inequality(std::move(index_eff), std::move(table)),
  };
  return out;
}

bool equivalent(const Inequality& a, const Inequality& b, std::size_t cap) {
  if (!same_index(a.index(), b.index())) {
    throw std::invalid_argument("equivalence requires inequalities over the same scenario");
  }
  const auto va = vertex_values(a, cap);
  const auto vb = vertex_values(b, cap);
  Rational scale = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    if ((va[i] == 0) != (vb[i] == 0)) return false;
    if (va[i] != 0 && scale == 0) {
      scale = va[i] / vb[i];
      if (scale <= 0) return false;
    }
  }
  if (scale == 0) return true;  // both vanish on every vertex
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i] != scale * vb[i]) return false;
  }
  return true;
}

}  // namespace nclift
