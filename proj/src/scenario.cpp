#include "nclift/scenario.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "nclift/errors.hpp"

namespace nclift {

bool Context::contains(const std::string& name) const {
  return std::binary_search(members.begin(), members.end(), name);
}

Scenario::Scenario() = default;

namespace {

// Bron-Kerbosch with pivoting on bitmask adjacency. Reports maximal cliques.
void bron_kerbosch(std::uint64_t r, std::uint64_t p, std::uint64_t x,
                   const std::vector<std::uint64_t>& adj, std::vector<std::uint64_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  // Pivot: vertex of P | X with the most neighbors in P.
  std::uint64_t candidates = p | x;
  int best = -1;
  std::uint64_t pivot_neighbors = 0;
  while (candidates != 0) {
    const int u = std::countr_zero(candidates);
    candidates &= candidates - 1;
    const int deg = std::popcount(p & adj[u]);
    if (deg > best) {
      best = deg;
      pivot_neighbors = adj[u];
    }
  }
  std::uint64_t ext = p & ~pivot_neighbors;
  while (ext != 0) {
    const int v = std::countr_zero(ext);
    const std::uint64_t bit = std::uint64_t{1} << v;
    ext &= ext - 1;
    bron_kerbosch(r | bit, p & adj[v], x & adj[v], adj, out);
    p &= ~bit;
    x |= bit;
  }
}

}  // namespace

Scenario::Scenario(std::vector<Measurement> measurements,
                   const std::vector<std::pair<std::string, std::string>>& compatible)
    : measurements_(std::move(measurements)) {
  if (measurements_.size() > max_measurements) {
    throw CapExceeded("scenario exceeds the " + std::to_string(max_measurements) +
                      "-measurement cap");
  }
  for (std::size_t i = 0; i < measurements_.size(); ++i) {
    const auto& m = measurements_[i];
    if (m.name.empty()) throw std::invalid_argument("empty measurement name");
    if (!index_.emplace(m.name, i).second) {
      throw std::invalid_argument("duplicate measurement name '" + m.name + "'");
    }
    if (m.outcomes.empty()) {
      throw std::invalid_argument("measurement '" + m.name + "' has no outcomes");
    }
    std::set<std::string> seen(m.outcomes.begin(), m.outcomes.end());
    if (seen.size() != m.outcomes.size()) {
      throw std::invalid_argument("duplicate outcome label for measurement '" + m.name + "'");
    }
  }
  adjacency_.assign(measurements_.size(), 0);
  for (const auto& [a, b] : compatible) {
    const std::size_t i = index_of(a);
    const std::size_t j = index_of(b);
    if (i == j) {
      throw std::invalid_argument("self-compatibility pair for '" + a + "' (implicit, not stored)");
    }
    adjacency_[i] |= std::uint64_t{1} << j;
    adjacency_[j] |= std::uint64_t{1} << i;
  }

  if (!measurements_.empty()) {
    std::vector<std::uint64_t> cliques;
    const std::uint64_t all = (measurements_.size() == 64)
                                  ? ~std::uint64_t{0}
                                  : (std::uint64_t{1} << measurements_.size()) - 1;
    bron_kerbosch(0, all, 0, adjacency_, cliques);
    contexts_.reserve(cliques.size());
    for (std::uint64_t mask : cliques) {
      Context c;
      std::uint64_t bits = mask;
      while (bits != 0) {
        const int v = std::countr_zero(bits);
        bits &= bits - 1;
        c.members.push_back(measurements_[v].name);
      }
      std::sort(c.members.begin(), c.members.end());
      contexts_.push_back(std::move(c));
    }
    std::sort(contexts_.begin(), contexts_.end());
  }
}

bool Scenario::has_measurement(const std::string& name) const {
  return index_.find(name) != index_.end();
}

std::size_t Scenario::index_of(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) throw std::invalid_argument("unknown measurement '" + name + "'");
  return it->second;
}

const std::vector<std::string>& Scenario::outcomes_of(const std::string& name) const {
  return measurements_[index_of(name)].outcomes;
}

std::size_t Scenario::outcome_id(std::size_t measurement, const std::string& label) const {
  const auto& outs = measurements_[measurement].outcomes;
  const auto it = std::find(outs.begin(), outs.end(), label);
  if (it == outs.end()) {
    throw std::invalid_argument("unknown outcome '" + label + "' for measurement '" +
                                measurements_[measurement].name + "'");
  }
  return static_cast<std::size_t>(it - outs.begin());
}

bool Scenario::compatible(std::size_t a, std::size_t b) const {
  if (a == b) return true;
  return (adjacency_[a] >> b) & 1;
}

bool Scenario::compatible(const std::string& a, const std::string& b) const {
  return compatible(index_of(a), index_of(b));
}

std::vector<std::pair<std::string, std::string>> Scenario::compatible_pairs() const {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < measurements_.size(); ++i) {
    for (std::size_t j = i + 1; j < measurements_.size(); ++j) {
      if (!compatible(i, j)) continue;
      auto a = measurements_[i].name;
      auto b = measurements_[j].name;
      if (b < a) std::swap(a, b);
      pairs.emplace_back(std::move(a), std::move(b));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.measurements_ == b.measurements_ && a.adjacency_ == b.adjacency_;
}

MeasurementExtension extend_with_measurement(const Scenario& s, const std::string& name,
                                             std::vector<std::string> outcomes,
                                             const std::vector<std::string>& neighbors) {
  if (s.has_measurement(name)) {
    throw std::invalid_argument("measurement '" + name + "' already present");
  }
  std::set<std::string> neighbor_set;
  for (const auto& n : neighbors) {
    s.index_of(n);  // throws on unknown neighbor
    neighbor_set.insert(n);
  }

  auto measurements = s.measurements();
  measurements.push_back({name, std::move(outcomes)});
  auto pairs = s.compatible_pairs();
  for (const auto& n : neighbor_set) pairs.emplace_back(name, n);

  MeasurementExtension ext;
  ext.base = s;
  ext.extended = Scenario(std::move(measurements), pairs);
  ext.measurement = name;
  ext.outcomes = ext.extended.outcomes_of(name);
  ext.neighbors.assign(neighbor_set.begin(), neighbor_set.end());

  // Classify each maximal context of the extended scenario: those without A
  // stay from the base; {A} joined with U goes to contexts_mc when U is a
  // maximal context of the base, else to contexts_pc (U may be empty).
  std::set<std::vector<std::string>> base_contexts;
  for (const auto& c : s.maximal_contexts()) base_contexts.insert(c.members);
  for (const auto& c : ext.extended.maximal_contexts()) {
    if (!c.contains(name)) {
      ext.contexts_old.push_back(c);
      continue;
    }
    std::vector<std::string> rest;
    for (const auto& m : c.members) {
      if (m != name) rest.push_back(m);
    }
    if (base_contexts.count(rest)) {
      ext.contexts_mc.push_back(c);
    } else {
      ext.contexts_pc.push_back(c);
    }
  }
  return ext;
}

OutcomeExtension extend_with_outcome(const Scenario& s, const std::string& measurement,
                                     const std::string& new_outcome) {
  const std::size_t idx = s.index_of(measurement);
  const auto& outs = s.measurement(idx).outcomes;
  if (std::find(outs.begin(), outs.end(), new_outcome) != outs.end()) {
    throw std::invalid_argument("outcome '" + new_outcome + "' already present for '" +
                                measurement + "'");
  }
  auto measurements = s.measurements();
  measurements[idx].outcomes.push_back(new_outcome);

  OutcomeExtension ext;
  ext.base = s;
  ext.extended = Scenario(std::move(measurements), s.compatible_pairs());
  ext.measurement = measurement;
  ext.new_outcome = new_outcome;
  return ext;
}

namespace {

// Depth-first enumeration of induced cycles of exact length, canonicalized:
// the path starts at its smallest vertex and its second element is smaller
// than its last (reflection). Vertices are compared by rank in name order.
void induced_cycles_of_length(const std::vector<std::uint64_t>& adj, std::size_t n,
                              std::size_t length, std::vector<std::vector<int>>& found) {
  std::vector<int> path;
  path.reserve(length);

  auto extend = [&](auto&& self) -> void {
    if (path.size() == length) {
      const int first = path.front();
      const int last = path.back();
      if (((adj[first] >> last) & 1) && path[1] < last) found.push_back(path);
      return;
    }
    const int tail = path.back();
    for (std::size_t v = path.front() + 1; v < n; ++v) {
      if (std::find(path.begin(), path.end(), static_cast<int>(v)) != path.end()) continue;
      if (!((adj[tail] >> v) & 1)) continue;
      bool chord = false;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        // Non-consecutive pairs must be non-adjacent; the pair (path[0], v)
        // only closes the cycle at full length.
        if (k == 0 && path.size() + 1 == length) continue;
        if ((adj[path[k]] >> v) & 1) {
          chord = true;
          break;
        }
      }
      if (chord) continue;
      path.push_back(static_cast<int>(v));
      self(self);
      path.pop_back();
    }
  };

  for (std::size_t start = 0; start + 3 < n; ++start) {
    path.assign(1, static_cast<int>(start));
    extend(extend);
  }
}

}  // namespace

std::optional<std::vector<std::string>> find_induced_cycle(const Scenario& s) {
  const std::size_t n = s.size();
  if (n < 4) return std::nullopt;

  // Work in name-sorted rank space so lexicographic tie-breaking is by name.
  std::vector<std::size_t> by_name(n);
  for (std::size_t i = 0; i < n; ++i) by_name[i] = i;
  std::sort(by_name.begin(), by_name.end(), [&](std::size_t a, std::size_t b) {
    return s.measurement(a).name < s.measurement(b).name;
  });
  std::vector<std::size_t> rank_of(n);
  for (std::size_t r = 0; r < n; ++r) rank_of[by_name[r]] = r;
  std::vector<std::uint64_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && s.compatible(i, j)) adj[rank_of[i]] |= std::uint64_t{1} << rank_of[j];
    }
  }

  for (std::size_t length = 4; length <= n; ++length) {
    std::vector<std::vector<int>> found;
    induced_cycles_of_length(adj, n, length, found);
    if (found.empty()) continue;
    auto sorted_members = [&](const std::vector<int>& cycle) {
      std::vector<std::string> names;
      for (int r : cycle) names.push_back(s.measurement(by_name[r]).name);
      std::sort(names.begin(), names.end());
      return names;
    };
    const auto* best = &found.front();
    auto best_key = sorted_members(*best);
    for (const auto& c : found) {
      auto key = sorted_members(c);
      if (key < best_key) {
        best_key = std::move(key);
        best = &c;
      }
    }
    std::vector<std::string> ordered;
    for (int r : *best) ordered.push_back(s.measurement(by_name[r]).name);
    return ordered;
  }
  return std::nullopt;
}

Scenario restrict_to(const Scenario& s, const std::vector<std::string>& keep) {
  std::set<std::string> keep_set;
  for (const auto& name : keep) {
    s.index_of(name);  // throws on unknown measurement
    keep_set.insert(name);
  }
  std::vector<Scenario::Measurement> measurements;
  for (const auto& m : s.measurements()) {
    if (keep_set.count(m.name)) measurements.push_back(m);
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& p : s.compatible_pairs()) {
    if (keep_set.count(p.first) && keep_set.count(p.second)) pairs.push_back(p);
  }
  return Scenario(std::move(measurements), pairs);
}

}  // namespace nclift
