#pragma once

// Test-side oracles, written independently of the library's computation paths:
// subset-enumeration clique finding, definition-unrolled vertex vectors, a
// plain dense Gaussian elimination for affine rank, and direct evaluation of
// written (pre-canonicalization) inequality forms on assignments.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nclift/inequality.hpp"
#include "nclift/polytope.hpp"
#include "nclift/rational.hpp"
#include "nclift/scenario.hpp"

namespace nclift::test {

// All maximal cliques by checking every subset (n <= 20), sorted like the
// library's canonical order.
inline std::vector<std::vector<std::string>> naive_maximal_cliques(const Scenario& s) {
  const std::size_t n = s.size();
  std::vector<std::vector<std::string>> cliques;
  std::vector<unsigned long> clique_masks;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    bool is_clique = true;
    for (std::size_t i = 0; i < n && is_clique; ++i) {
      if (!((mask >> i) & 1)) continue;
      for (std::size_t j = i + 1; j < n && is_clique; ++j) {
        if (((mask >> j) & 1) && !s.compatible(i, j)) is_clique = false;
      }
    }
    if (is_clique) clique_masks.push_back(mask);
  }
  for (unsigned long mask : clique_masks) {
    bool maximal = true;
    for (unsigned long other : clique_masks) {
      if (other != mask && (other & mask) == mask) {
        maximal = false;
        break;
      }
    }
    if (!maximal) continue;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1) names.push_back(s.measurement(i).name);
    }
    std::sort(names.begin(), names.end());
    cliques.push_back(std::move(names));
  }
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

// Deterministic correlation vector of an assignment, unrolled from the
// definition: one component per (context, joint outcome), 1 iff the
// assignment restricts to that joint outcome.
inline std::vector<Rational> naive_vertex_values(const Scenario& s,
                                                 const std::map<std::string, std::string>& lam) {
  std::vector<Rational> out;
  for (const auto& context : s.maximal_contexts()) {
    std::vector<std::size_t> radices;
    for (const auto& m : context.members) radices.push_back(s.outcomes_of(m).size());
    std::size_t block = 1;
    for (std::size_t r : radices) block *= r;
    for (std::size_t e = 0; e < block; ++e) {
      std::size_t rem = e;
      bool match = true;
      for (std::size_t k = context.members.size(); k-- > 0;) {
        const auto label = s.outcomes_of(context.members[k])[rem % radices[k]];
        rem /= radices[k];
        if (lam.at(context.members[k]) != label) match = false;
      }
      out.push_back(match ? 1 : 0);
    }
  }
  return out;
}

// Every assignment as a measurement->outcome map, odometer order.
inline std::vector<std::map<std::string, std::string>> naive_assignments(const Scenario& s) {
  std::vector<std::map<std::string, std::string>> out;
  std::size_t total = 1;
  for (const auto& m : s.measurements()) total *= m.outcomes.size();
  for (std::size_t ordinal = 0; ordinal < total; ++ordinal) {
    std::map<std::string, std::string> lam;
    std::size_t rem = ordinal;
    for (std::size_t m = s.size(); m-- > 0;) {
      const auto& outs = s.measurement(m).outcomes;
      lam[s.measurement(m).name] = outs[rem % outs.size()];
      rem /= outs.size();
    }
    out.push_back(std::move(lam));
  }
  return out;
}

// Affine rank by dense forward elimination over the difference matrix.
inline std::size_t naive_affine_rank(const std::vector<std::vector<Rational>>& points) {
  if (points.empty()) return 0;
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 1; i < points.size(); ++i) {
    std::vector<Rational> row(points[i].size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = points[i][c] - points[0][c];
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  const std::size_t cols = points[0].size();
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank + 1;
}

// Value of a written term list on an assignment: sum of coefficients whose
// (measurement -> outcome) constraints all hold.
inline Rational written_form_value(const SourceForm& form,
                                   const std::map<std::string, std::string>& lam) {
  Rational sum = 0;
  for (const auto& term : form.terms) {
    bool match = true;
    for (std::size_t k = 0; k < term.context.size(); ++k) {
      if (lam.at(term.context[k]) != term.outcome[k]) {
        match = false;
        break;
      }
    }
    if (match) sum += term.coeff;
  }
  return sum;
}

// Is {a,b,c,d} an induced 4-cycle (each vertex exactly two neighbors within)?
inline bool induced_four_cycle(const Scenario& s, const std::vector<std::string>& quad) {
  std::size_t edges = 0;
  std::vector<std::size_t> degree(4, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (s.compatible(quad[i], quad[j])) {
        ++edges;
        ++degree[i];
        ++degree[j];
      }
    }
  }
  return edges == 4 && std::all_of(degree.begin(), degree.end(),
                                   [](std::size_t d) { return d == 2; });
}

}  // namespace nclift::test
