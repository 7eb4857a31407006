#pragma once

// Shared fixtures and exact samplers for the unit and property suites.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nclift/catalog.hpp"
#include "nclift/inequality.hpp"
#include "nclift/polytope.hpp"
#include "nclift/rational.hpp"
#include "nclift/scenario.hpp"

namespace nclift::test {

inline CorrelationVector uniform_correlation(const EventIndexPtr& index) {
  CorrelationVector q = CorrelationVector::zero(index);
  for (std::size_t ci = 0; ci < index->context_count(); ++ci) {
    const Rational share(1, static_cast<long>(index->block_size(ci)));
    for (std::size_t e = 0; e < index->block_size(ci); ++e) {
      q[index->block_offset(ci) + e] = share;
    }
  }
  return q;
}

/// The extremal no-disturbance box of the dichotomic 4-cycle: perfectly
/// correlated on {0,1},{1,2},{2,3}, perfectly anticorrelated on {0,3}.
inline CorrelationVector pr_box(const EventIndexPtr& index) {
  CorrelationVector q = CorrelationVector::zero(index);
  const Rational half(1, 2);
  q[index->position({"0", "1"}, {"0", "0"})] = half;
  q[index->position({"0", "1"}, {"1", "1"})] = half;
  q[index->position({"1", "2"}, {"0", "0"})] = half;
  q[index->position({"1", "2"}, {"1", "1"})] = half;
  q[index->position({"2", "3"}, {"0", "0"})] = half;
  q[index->position({"2", "3"}, {"1", "1"})] = half;
  q[index->position({"0", "3"}, {"0", "1"})] = half;
  q[index->position({"0", "3"}, {"1", "0"})] = half;
  return q;
}

/// Per-context normalization rows (sum of each block).
inline std::vector<std::vector<Rational>> normalization_rows(const EventIndex& index) {
  std::vector<std::vector<Rational>> rows;
  for (std::size_t ci = 0; ci < index.context_count(); ++ci) {
    std::vector<Rational> row(index.size());
    for (std::size_t e = 0; e < index.block_size(ci); ++e) row[index.block_offset(ci) + e] = 1;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// No-disturbance equality rows: for each overlapping context pair and each
/// joint outcome of the overlap, the difference of the two marginal sums.
inline std::vector<std::vector<Rational>> no_disturbance_rows(const EventIndex& index) {
  const auto& s = index.scenario();
  std::vector<std::vector<Rational>> rows;
  const std::size_t n = index.context_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<std::string> shared;
      const auto& mi = index.context(i).members;
      const auto& mj = index.context(j).members;
      for (const auto& m : mi) {
        if (std::find(mj.begin(), mj.end(), m) != mj.end()) shared.push_back(m);
      }
      if (shared.empty()) continue;
      std::size_t combos = 1;
      for (const auto& m : shared) combos *= s.outcomes_of(m).size();
      for (std::size_t t = 0; t < combos; ++t) {
        std::map<std::string, std::size_t> want;
        std::size_t rem = t;
        for (std::size_t k = shared.size(); k-- > 0;) {
          const std::size_t radix = s.outcomes_of(shared[k]).size();
          want[shared[k]] = rem % radix;
          rem /= radix;
        }
        std::vector<Rational> row(index.size());
        auto add_block = [&](std::size_t ci, int sign) {
          const auto& members = index.context(ci).members;
          for (std::size_t e = 0; e < index.block_size(ci); ++e) {
            std::size_t erem = e;
            bool match = true;
            for (std::size_t k = 0; k < members.size(); ++k) {
              const std::size_t digit = erem / index.member_strides(ci)[k];
              erem %= index.member_strides(ci)[k];
              const auto it = want.find(members[k]);
              if (it != want.end() && it->second != digit) {
                match = false;
                break;
              }
            }
            if (match) row[index.block_offset(ci) + e] += sign;
          }
        };
        add_block(i, 1);
        add_block(j, -1);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

/// Exact null-space basis of the span of the given rows, in dimension dim.
inline std::vector<std::vector<Rational>> nullspace_basis(std::vector<std::vector<Rational>> rows,
                                                          std::size_t dim) {
  // Reduced row echelon form.
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < dim && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const Rational lead = rows[rank][col];
    for (auto& v : rows[rank]) {
      if (v != 0) v /= lead;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const Rational f = rows[r][col];
      for (std::size_t c = col; c < dim; ++c) rows[r][c] -= f * rows[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(dim, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < dim; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(dim);
    v[free] = 1;
    for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Exact random no-disturbance correlation: the uniform point moved along a
/// random direction of the equality null space, scaled to stay nonnegative.
inline CorrelationVector random_nd_correlation(const EventIndexPtr& index, std::mt19937& rng) {
  auto q = uniform_correlation(index);
  auto rows = normalization_rows(*index);
  auto nd = no_disturbance_rows(*index);
  rows.insert(rows.end(), nd.begin(), nd.end());
  const auto basis = nullspace_basis(std::move(rows), index->size());
  if (basis.empty()) return q;
  std::vector<Rational> direction(index->size());
  for (const auto& v : basis) {
    const long num = static_cast<long>(rng() % 5) - 2;  // -2..2
    if (num == 0) continue;
    const Rational c = make_rational(num, static_cast<long>(1 + rng() % 3));
    for (std::size_t e = 0; e < direction.size(); ++e) direction[e] += c * v[e];
  }
  // Largest step keeping q + t * direction nonnegative, then halve it.
  Rational t_max = -1;
  for (std::size_t e = 0; e < direction.size(); ++e) {
    if (direction[e] < 0) {
      const Rational limit = q[e] / -direction[e];
      if (t_max < 0 || limit < t_max) t_max = limit;
    }
  }
  if (t_max < 0) t_max = 1;
  const Rational t = t_max / 2;
  for (std::size_t e = 0; e < direction.size(); ++e) q[e] += t * direction[e];
  return q;
}

/// Exact random correlation (normalized, nonnegative, possibly disturbing).
inline CorrelationVector random_correlation(const EventIndexPtr& index, std::mt19937& rng) {
  CorrelationVector q = CorrelationVector::zero(index);
  for (std::size_t ci = 0; ci < index->context_count(); ++ci) {
    const std::size_t block = index->block_size(ci);
    std::vector<long> weights(block);
    long total = 0;
    for (auto& w : weights) {
      w = static_cast<long>(rng() % 5);
      total += w;
    }
    if (total == 0) {
      weights[0] = 1;
      total = 1;
    }
    for (std::size_t e = 0; e < block; ++e) {
      q[index->block_offset(ci) + e] = make_rational(weights[e], total);
    }
  }
  return q;
}

inline Scenario random_scenario(std::mt19937& rng, std::size_t max_measurements,
                                std::size_t max_outcomes, unsigned edge_percent) {
  const std::size_t n = 1 + rng() % max_measurements;
  std::vector<Scenario::Measurement> ms;
  for (std::size_t i = 0; i < n; ++i) {
    Scenario::Measurement m;
    m.name = std::to_string(i);
    const std::size_t outcomes = 2 + rng() % (max_outcomes - 1);
    for (std::size_t o = 0; o < outcomes; ++o) m.outcomes.push_back(std::to_string(o));
    ms.push_back(std::move(m));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng() % 100 < edge_percent) edges.emplace_back(std::to_string(i), std::to_string(j));
    }
  }
  return Scenario(std::move(ms), edges);
}

/// Random inequality made valid by shifting its vertex minimum to zero
/// through the normalization rows.
inline Inequality random_valid_inequality(const EventIndexPtr& index, std::mt19937& rng) {
  std::vector<Rational> coeffs(index->size());
  for (auto& c : coeffs) {
    c = make_rational(static_cast<long>(rng() % 7) - 3, static_cast<long>(1 + rng() % 2));
  }
  Inequality raw(index, std::move(coeffs));
  const auto& s = index->scenario();
  std::size_t count = 1;
  for (const auto& m : s.measurements()) count *= m.outcomes.size();
  Rational min_value;
  bool first = true;
  for (std::size_t ordinal = 0; ordinal < count; ++ordinal) {
    std::vector<std::size_t> digits(s.size(), 0);
    std::size_t rem = ordinal;
    for (std::size_t m = s.size(); m-- > 0;) {
      const std::size_t radix = s.measurement(m).outcomes.size();
      digits[m] = rem % radix;
      rem /= radix;
    }
    const Rational v = evaluate_assignment(raw, digits);
    if (first || v < min_value) {
      min_value = v;
      first = false;
    }
  }
  const std::size_t n = index->context_count();
  if (n == 0) return raw;
  const Rational shift = min_value / Rational(static_cast<long>(n));
  std::vector<Rational> shifted = raw.coefficients();
  for (auto& c : shifted) c -= shift;
  return Inequality(index, std::move(shifted));
}

}  // namespace nclift::test
