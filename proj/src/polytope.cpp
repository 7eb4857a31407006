#include "nclift/polytope.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "nclift/errors.hpp"
#include "nclift/parallel.hpp"

namespace nclift {

EventIndex::EventIndex(Scenario scenario) : scenario_(std::move(scenario)) {
  const auto& contexts = scenario_.maximal_contexts();
  offsets_.reserve(contexts.size());
  sizes_.reserve(contexts.size());
  member_ids_.reserve(contexts.size());
  strides_.reserve(contexts.size());
  for (std::size_t ci = 0; ci < contexts.size(); ++ci) {
    const auto& members = contexts[ci].members;
    std::vector<std::size_t> ids;
    ids.reserve(members.size());
    for (const auto& name : members) ids.push_back(scenario_.index_of(name));
    // Row-major strides: the last member varies fastest.
    std::vector<std::size_t> strides(members.size(), 1);
    std::size_t block = 1;
    for (std::size_t k = members.size(); k-- > 0;) {
      strides[k] = block;
      block *= scenario_.measurement(ids[k]).outcomes.size();
    }
    offsets_.push_back(total_);
    sizes_.push_back(block);
    member_ids_.push_back(std::move(ids));
    strides_.push_back(std::move(strides));
    context_lookup_.emplace(members, ci);
    total_ += block;
  }
}

std::size_t EventIndex::context_index(const std::vector<std::string>& members) const {
  const auto it = context_lookup_.find(members);
  if (it == context_lookup_.end()) {
    std::string joined;
    for (const auto& m : members) joined += (joined.empty() ? "" : ",") + m;
    throw std::invalid_argument("no maximal context {" + joined + "}");
  }
  return it->second;
}

std::size_t EventIndex::position(std::size_t ci, std::span<const std::size_t> outcome_ids) const {
  std::size_t pos = offsets_[ci];
  for (std::size_t k = 0; k < outcome_ids.size(); ++k) pos += outcome_ids[k] * strides_[ci][k];
  return pos;
}

std::size_t EventIndex::position(const std::vector<std::string>& context_members,
                                 const std::vector<std::string>& outcome_labels) const {
  const std::size_t ci = context_index(context_members);
  if (outcome_labels.size() != context_members.size()) {
    throw std::invalid_argument("outcome tuple length does not match context size");
  }
  std::vector<std::size_t> ids(outcome_labels.size());
  for (std::size_t k = 0; k < outcome_labels.size(); ++k) {
    ids[k] = scenario_.outcome_id(member_ids_[ci][k], outcome_labels[k]);
  }
  return position(ci, ids);
}

std::size_t EventIndex::position_for_assignment(std::size_t ci,
                                                std::span<const std::size_t> assignment) const {
  std::size_t pos = offsets_[ci];
  const auto& ids = member_ids_[ci];
  const auto& strides = strides_[ci];
  for (std::size_t k = 0; k < ids.size(); ++k) pos += assignment[ids[k]] * strides[k];
  return pos;
}

std::pair<std::size_t, std::vector<std::size_t>> EventIndex::decode(std::size_t position) const {
  std::size_t ci = 0;
  while (ci + 1 < offsets_.size() && offsets_[ci + 1] <= position) ++ci;
  std::size_t rem = position - offsets_[ci];
  std::vector<std::size_t> ids(member_ids_[ci].size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    ids[k] = rem / strides_[ci][k];
    rem %= strides_[ci][k];
  }
  return {ci, std::move(ids)};
}

EventIndexPtr make_event_index(Scenario scenario) {
  return std::make_shared<const EventIndex>(std::move(scenario));
}

CorrelationVector::CorrelationVector(EventIndexPtr index, std::vector<Rational> values)
    : index_(std::move(index)), values_(std::move(values)) {
  if (values_.size() != index_->size()) {
    throw std::invalid_argument("value vector length does not match event index");
  }
}

CorrelationVector CorrelationVector::zero(EventIndexPtr index) {
  const std::size_t n = index->size();
  return CorrelationVector(std::move(index), std::vector<Rational>(n));
}

bool CorrelationVector::is_normalized() const {
  for (std::size_t ci = 0; ci < index_->context_count(); ++ci) {
    Rational sum = 0;
    const std::size_t off = index_->block_offset(ci);
    for (std::size_t k = 0; k < index_->block_size(ci); ++k) sum += values_[off + k];
    if (sum != 1) return false;
  }
  return true;
}

bool CorrelationVector::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v >= 0; });
}

bool operator==(const CorrelationVector& a, const CorrelationVector& b) {
  return same_index(a.index(), b.index()) && a.values_ == b.values_;
}

bool same_index(const EventIndexPtr& a, const EventIndexPtr& b) {
  return a == b || *a == *b;
}

void require_same_index(const CorrelationVector& a, const CorrelationVector& b) {
  if (!same_index(a.index(), b.index())) {
    throw std::invalid_argument("vectors indexed by different scenarios");
  }
}

Rational dot(const CorrelationVector& a, const CorrelationVector& b) {
  require_same_index(a, b);
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) sum += a[i] * b[i];
  }
  return sum;
}

CorrelationVector operator+(const CorrelationVector& a, const CorrelationVector& b) {
  require_same_index(a, b);
  std::vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return CorrelationVector(a.index(), std::move(out));
}

CorrelationVector operator-(const CorrelationVector& a, const CorrelationVector& b) {
  require_same_index(a, b);
  std::vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return CorrelationVector(a.index(), std::move(out));
}

CorrelationVector operator*(const Rational& c, const CorrelationVector& v) {
  std::vector<Rational> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
  return CorrelationVector(v.index(), std::move(out));
}

std::string Vertex::outcome_of(const std::string& measurement) const {
  const auto& s = vector.index()->scenario();
  const std::size_t m = s.index_of(measurement);
  return s.measurement(m).outcomes[assignment[m]];
}

std::map<std::string, std::string> Vertex::assignment_labels() const {
  const auto& s = vector.index()->scenario();
  std::map<std::string, std::string> out;
  for (std::size_t m = 0; m < s.size(); ++m) {
    out[s.measurement(m).name] = s.measurement(m).outcomes[assignment[m]];
  }
  return out;
}

std::size_t ambient_dimension(const Scenario& s) {
  std::size_t total = 0;
  for (const auto& c : s.maximal_contexts()) {
    std::size_t block = 1;
    for (const auto& m : c.members) block *= s.outcomes_of(m).size();
    total += block;
  }
  return total;
}

std::size_t assignment_count(const Scenario& s, std::size_t cap) {
  std::size_t count = 1;
  for (const auto& m : s.measurements()) {
    if (count > cap / m.outcomes.size() && m.outcomes.size() > 1) {
      throw CapExceeded("assignment count exceeds the cap of " + std::to_string(cap));
    }
    count *= m.outcomes.size();
  }
  if (count > cap) throw CapExceeded("assignment count exceeds the cap of " + std::to_string(cap));
  return count;
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

}  // namespace

Vertex vertex_of(const EventIndexPtr& index, std::span<const std::size_t> assignment) {
  const auto& s = index->scenario();
  if (assignment.size() != s.size()) {
    throw std::invalid_argument("assignment length does not match measurement count");
  }
  for (std::size_t m = 0; m < s.size(); ++m) {
    if (assignment[m] >= s.measurement(m).outcomes.size()) {
      throw std::invalid_argument("assignment outcome out of range for measurement '" +
                                  s.measurement(m).name + "'");
    }
  }
  CorrelationVector v = CorrelationVector::zero(index);
  for (std::size_t ci = 0; ci < index->context_count(); ++ci) {
    v[index->position_for_assignment(ci, assignment)] = 1;
  }
  return Vertex{std::vector<std::size_t>(assignment.begin(), assignment.end()), std::move(v)};
}

Vertex vertex_of(const EventIndexPtr& index, const std::map<std::string, std::string>& assignment) {
  const auto& s = index->scenario();
  std::vector<std::size_t> digits(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) {
    const auto it = assignment.find(s.measurement(m).name);
    if (it == assignment.end()) {
      throw std::invalid_argument("assignment missing measurement '" + s.measurement(m).name +
                                  "'");
    }
    digits[m] = s.outcome_id(m, it->second);
  }
  return vertex_of(index, digits);
}

std::vector<Vertex> enumerate_vertices(const EventIndexPtr& index, std::size_t cap) {
  const auto& s = index->scenario();
  const std::size_t count = assignment_count(s, cap);
  std::vector<Vertex> out(count, Vertex{{}, CorrelationVector::zero(index)});
  parallel_for(count, [&](std::size_t ordinal) {
    out[ordinal] = vertex_of(index, assignment_at(s, ordinal));
  });
  return out;
}

bool AffineRankAccumulator::add_point(const std::vector<Rational>& point) {
  if (!has_base_) {
    base_ = point;
    has_base_ = true;
    return true;
  }
  std::vector<Rational> row(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) row[i] = point[i] - base_[i];
  for (const auto& pivot : pivot_rows_) {
    if (row[pivot.column] == 0) continue;
    const Rational factor = row[pivot.column];
    for (std::size_t i = pivot.column; i < row.size(); ++i) {
      if (pivot.row[i] != 0) row[i] -= factor * pivot.row[i];
    }
  }
  std::size_t col = 0;
  while (col < row.size() && row[col] == 0) ++col;
  if (col == row.size()) return false;
  const Rational lead = row[col];
  for (std::size_t i = col; i < row.size(); ++i) {
    if (row[i] != 0) row[i] /= lead;
  }
  pivot_rows_.push_back({col, std::move(row)});
  return true;
}

std::size_t affine_rank(const std::vector<CorrelationVector>& vectors) {
  if (vectors.empty()) return 0;
  for (const auto& v : vectors) require_same_index(vectors.front(), v);
  AffineRankAccumulator acc;
  for (const auto& v : vectors) acc.add_point(v.values());
  return acc.rank();
}

std::size_t nc_dimension(const Scenario& s, std::size_t cap) {
  const auto index = make_event_index(s);
  const std::size_t count = assignment_count(s, cap);
  AffineRankAccumulator acc;
  for (std::size_t ordinal = 0; ordinal < count; ++ordinal) {
    acc.add_point(vertex_of(index, assignment_at(s, ordinal)).vector.values());
  }
  return acc.rank() == 0 ? 0 : acc.rank() - 1;
}

bool check_no_disturbance(const CorrelationVector& q) {
  if (!q.is_correlation()) {
    throw std::invalid_argument("no-disturbance check requires a normalized nonnegative vector");
  }
  const auto& index = *q.index();
  const auto& s = index.scenario();
  const std::size_t n = index.context_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<std::string> shared;
      std::set_intersection(index.context(i).members.begin(), index.context(i).members.end(),
                            index.context(j).members.begin(), index.context(j).members.end(),
                            std::back_inserter(shared));
      if (shared.empty()) continue;
      // Positions of the shared measurements inside each context tuple.
      auto slots = [&](std::size_t ci) {
        std::vector<std::size_t> res;
        const auto& members = index.context(ci).members;
        for (const auto& m : shared) {
          res.push_back(static_cast<std::size_t>(
              std::find(members.begin(), members.end(), m) - members.begin()));
        }
        return res;
      };
      const auto slots_i = slots(i);
      const auto slots_j = slots(j);
      std::size_t combos = 1;
      for (const auto& m : shared) combos *= s.outcomes_of(m).size();
      for (std::size_t t = 0; t < combos; ++t) {
        std::vector<std::size_t> digits(shared.size());
        std::size_t rem = t;
        for (std::size_t k = shared.size(); k-- > 0;) {
          const std::size_t radix = s.outcomes_of(shared[k]).size();
          digits[k] = rem % radix;
          rem /= radix;
        }
        auto marginal = [&](std::size_t ci, const std::vector<std::size_t>& where) {
          Rational sum = 0;
          const std::size_t off = index.block_offset(ci);
          for (std::size_t e = 0; e < index.block_size(ci); ++e) {
            std::size_t pos_rem = e;
            bool match = true;
            std::vector<std::size_t> ids(index.member_ids(ci).size());
            for (std::size_t k = 0; k < ids.size(); ++k) {
              ids[k] = pos_rem / index.member_strides(ci)[k];
              pos_rem %= index.member_strides(ci)[k];
            }
            for (std::size_t k = 0; k < where.size(); ++k) {
              if (ids[where[k]] != digits[k]) {
                match = false;
                break;
              }
            }
            if (match) sum += q[off + e];
          }
          return sum;
        };
        if (marginal(i, slots_i) != marginal(j, slots_j)) return false;
      }
    }
  }
  return true;
}

namespace {

// Exact phase-1 simplex with Bland's rule for {A x = b, x >= 0}. Columns are
// the given vectors; a convexity row of ones is appended by the caller.
struct PhaseOneResult {
  bool feasible = false;
  std::vector<Rational> solution;    // over the original columns
  std::vector<Rational> dual;        // Farkas certificate when infeasible
};

PhaseOneResult phase_one_simplex(const std::vector<std::vector<Rational>>& columns,
                                 std::vector<Rational> rhs) {
  const std::size_t rows = rhs.size();
  const std::size_t n = columns.size();
  std::vector<bool> flipped(rows, false);
  std::vector<std::vector<Rational>> tab(rows, std::vector<Rational>(n + rows));
  for (std::size_t i = 0; i < rows; ++i) {
    if (rhs[i] < 0) {
      flipped[i] = true;
      rhs[i] = -rhs[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      tab[i][j] = flipped[i] ? -columns[j][i] : columns[j][i];
    }
    tab[i][n + i] = 1;  // artificial
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = n + i;

  // Reduced costs for phase 1 (artificial cost 1, original cost 0).
  std::vector<Rational> reduced(n + rows);
  for (std::size_t j = 0; j < n; ++j) {
    Rational sum = 0;
    for (std::size_t i = 0; i < rows; ++i) sum += tab[i][j];
    reduced[j] = -sum;
  }
  Rational objective = 0;
  for (std::size_t i = 0; i < rows; ++i) objective += rhs[i];

  while (true) {
    // Bland: entering column = smallest index with negative reduced cost.
    std::size_t enter = n + rows;
    for (std::size_t j = 0; j < n + rows; ++j) {
      if (reduced[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == n + rows) break;
    // Ratio test; ties go to the row whose basic variable has smallest index.
    std::size_t leave = rows;
    Rational best_ratio = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (tab[i][enter] <= 0) continue;
      Rational ratio = rhs[i] / tab[i][enter];
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == rows) {
      throw std::logic_error("phase-1 simplex unbounded");  // cannot happen: objective >= 0
    }
    // Pivot.
    const Rational pivot = tab[leave][enter];
    for (auto& v : tab[leave]) {
      if (v != 0) v /= pivot;
    }
    rhs[leave] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      const Rational factor = tab[i][enter];
      for (std::size_t j = 0; j < n + rows; ++j) {
        if (tab[leave][j] != 0) tab[i][j] -= factor * tab[leave][j];
      }
      rhs[i] -= factor * rhs[leave];
    }
    if (reduced[enter] != 0) {
      const Rational factor = reduced[enter];
      for (std::size_t j = 0; j < n + rows; ++j) {
        if (tab[leave][j] != 0) reduced[j] -= factor * tab[leave][j];
      }
      objective += factor * rhs[leave];
    }
    basis[leave] = enter;
  }

  PhaseOneResult result;
  if (objective == 0) {
    result.feasible = true;
    result.solution.assign(n, Rational(0));
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] < n) result.solution[basis[i]] = rhs[i];
    }
  } else {
    // Simplex multipliers: y_i = 1 - reduced[artificial_i]; undo row flips.
    result.dual.assign(rows, Rational(0));
    for (std::size_t i = 0; i < rows; ++i) {
      Rational y = 1 - reduced[n + i];
      result.dual[i] = flipped[i] ? Rational(-y) : y;
    }
  }
  return result;
}

}  // namespace

Membership decide_membership(const CorrelationVector& q, std::size_t cap) {
  if (!q.is_correlation()) {
    throw std::invalid_argument("membership test requires a normalized nonnegative vector");
  }
  if (!check_no_disturbance(q)) {
    throw DisturbanceError("membership test requires a no-disturbance correlation");
  }
  const auto& index = q.index();
  const auto& s = index->scenario();
  const std::size_t count = assignment_count(s, cap);
  const std::size_t d = index->size();

  std::vector<std::vector<Rational>> columns(count);
  parallel_for(count, [&](std::size_t ordinal) {
    auto col = vertex_of(index, assignment_at(s, ordinal)).vector.values();
    col.push_back(1);  // convexity row
    columns[ordinal] = std::move(col);
  });
  std::vector<Rational> rhs = q.values();
  rhs.push_back(1);

  const auto lp = phase_one_simplex(columns, rhs);
  Membership out;
  if (lp.feasible) {
    out.noncontextual = true;
    for (std::size_t j = 0; j < count; ++j) {
      if (lp.solution[j] != 0) out.weights.emplace_back(j, lp.solution[j]);
    }
    return out;
  }
  // Farkas dual y with y.[v;1] <= 0 on every vertex and y.[q;1] > 0. Fold the
  // constant through the per-context normalization to a zero-bound separator.
  out.noncontextual = false;
  const std::size_t contexts = index->context_count();
  CorrelationVector sep = CorrelationVector::zero(index);
  const Rational shift = lp.dual[d] / Rational(static_cast<long>(contexts == 0 ? 1 : contexts));
  for (std::size_t e = 0; e < d; ++e) sep[e] = -lp.dual[e] - shift;
  out.separating = std::move(sep);
  return out;
}

CorrelationVector marginalize(const CorrelationVector& q, const MeasurementExtension& ext) {
  if (!(q.index()->scenario() == ext.extended)) {
    throw std::invalid_argument("correlation is not indexed by the extended scenario");
  }
  if (!check_no_disturbance(q)) {
    throw DisturbanceError("marginalization requires a no-disturbance correlation");
  }
  const auto& tidx = *q.index();
  const auto base_index = make_event_index(ext.base);
  CorrelationVector out = CorrelationVector::zero(base_index);

  std::set<std::vector<std::string>> old_contexts;
  for (const auto& c : ext.contexts_old) old_contexts.insert(c.members);

  const std::size_t a_id = ext.extended.index_of(ext.measurement);
  const std::size_t a_outcomes = ext.extended.measurement(a_id).outcomes.size();

  for (std::size_t ci = 0; ci < base_index->context_count(); ++ci) {
    const auto& members = base_index->context(ci).members;
    const std::size_t off = base_index->block_offset(ci);
    if (old_contexts.count(members)) {
      // Identical context on both sides; block layouts agree.
      const std::size_t tci = tidx.context_index(members);
      const std::size_t toff = tidx.block_offset(tci);
      for (std::size_t e = 0; e < base_index->block_size(ci); ++e) out[off + e] = q[toff + e];
      continue;
    }
    // The context gains the new measurement in the extension: sum it out.
    std::vector<std::string> extended_members = members;
    extended_members.push_back(ext.measurement);
    std::sort(extended_members.begin(), extended_members.end());
    const std::size_t tci = tidx.context_index(extended_members);
    const auto a_slot = static_cast<std::size_t>(
        std::find(extended_members.begin(), extended_members.end(), ext.measurement) -
        extended_members.begin());
    for (std::size_t e = 0; e < base_index->block_size(ci); ++e) {
      // Decode base digits, insert the summed digit at the a_slot position.
      std::size_t rem = e;
      std::vector<std::size_t> digits(members.size());
      for (std::size_t k = 0; k < members.size(); ++k) {
        digits[k] = rem / base_index->member_strides(ci)[k];
        rem %= base_index->member_strides(ci)[k];
      }
      std::vector<std::size_t> tdigits(extended_members.size());
      for (std::size_t k = 0, bk = 0; k < extended_members.size(); ++k) {
        if (k == a_slot) continue;
        tdigits[k] = digits[bk++];
      }
      Rational sum = 0;
      for (std::size_t a = 0; a < a_outcomes; ++a) {
        tdigits[a_slot] = a;
        sum += q[tidx.position(tci, tdigits)];
      }
      out[off + e] = sum;
    }
  }
  return out;
}

CorrelationVector coarse_grain(const CorrelationVector& q, const OutcomeExtension& ext,
                               const std::string& a_k) {
  if (!(q.index()->scenario() == ext.extended)) {
    throw std::invalid_argument("vector is not indexed by the extended scenario");
  }
  if (a_k == ext.new_outcome) {
    throw std::invalid_argument("cannot club the new outcome with itself");
  }
  const std::size_t a_id = ext.base.index_of(ext.measurement);
  const std::size_t k_id = ext.base.outcome_id(a_id, a_k);  // throws on unknown a_k
  const std::size_t new_id = ext.base.measurement(a_id).outcomes.size();

  const auto& tidx = *q.index();
  const auto base_index = make_event_index(ext.base);
  CorrelationVector out = CorrelationVector::zero(base_index);
  for (std::size_t ci = 0; ci < base_index->context_count(); ++ci) {
    const auto& members = base_index->context(ci).members;
    const std::size_t tci = tidx.context_index(members);
    const auto& strides = base_index->member_strides(ci);
    const std::size_t off = base_index->block_offset(ci);
    const auto a_slot_it = std::find(members.begin(), members.end(), ext.measurement);
    const bool has_a = a_slot_it != members.end();
    const auto a_slot = static_cast<std::size_t>(a_slot_it - members.begin());
    for (std::size_t e = 0; e < base_index->block_size(ci); ++e) {
      std::size_t rem = e;
      std::vector<std::size_t> digits(members.size());
      for (std::size_t k = 0; k < members.size(); ++k) {
        digits[k] = rem / strides[k];
        rem %= strides[k];
      }
      Rational value = q[tidx.position(tci, digits)];
      if (has_a && digits[a_slot] == k_id) {
        auto clubbed = digits;
        clubbed[a_slot] = new_id;
        value += q[tidx.position(tci, clubbed)];
      }
      out[off + e] = value;
    }
  }
  return out;
}

}  // namespace nclift
