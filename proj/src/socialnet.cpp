#include "kinsim/socialnet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>

#include "kinsim/errors.hpp"
#include "kinsim/kinship.hpp"

namespace kinsim {

namespace {

using GrandparentSlots = std::array<AgentId, 4>;

std::vector<GrandparentSlots> sorted_grandparents(const Cohort& cohort, Pedigree pedigree) {
  std::vector<GrandparentSlots> out;
  out.reserve(cohort.size());
  for (AgentId id : cohort.members) {
    const AncestorVector v = ancestor_slots(id, 2, pedigree);
    GrandparentSlots s{v[0], v[1], v[2], v[3]};
    std::ranges::sort(s);
    out.push_back(s);
  }
  return out;
}

int overlap4(const GrandparentSlots& a, const GrandparentSlots& b) {
  int shared = 0;
  std::size_t x = 0, y = 0;
  while (x < 4 && y < 4) {
    if (a[x] < b[y]) {
      ++x;
    } else if (b[y] < a[x]) {
      ++y;
    } else {
      ++shared;
      ++x;
      ++y;
    }
  }
  return shared;
}

bool same_parents(const Agent& a, const Agent& b) {
  return !a.is_founder() && a.mother == b.mother && a.father == b.father;
}

struct CandidatePair {
  double delta;
  std::uint32_t i, j;
};

}  // namespace

void NetworkCaps::validate() const {
  if (relative_cap <= 0 || relative_cap > total_cap) {
    throw ConfigError("network caps need 0 < relative cap <= total cap");
  }
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Sibling: return "sibling";
    case Provenance::Cousin: return "cousin";
    case Provenance::Friend: return "friend";
  }
  return "unknown";
}

double StandardNetwork::mean_degree() const {
  const std::size_t n = adjacency.size();
  return n == 0 ? 0.0 : 2.0 * static_cast<double>(adjacency.edge_count()) / static_cast<double>(n);
}

TraitMap assign_traits(std::size_t cohort_size, Rng& rng) {
  std::uniform_real_distribution<double> compass(0.0, 360.0);
  TraitMap traits(cohort_size);
  for (double& t : traits) {
    t = compass(rng);
    if (t >= 360.0) t = 0.0;  // guard against rounding up to the open bound
  }
  return traits;
}

double compass_distance(double a, double b) {
  const double d = std::fabs(a - b);
  return d > 180.0 ? 360.0 - d : d;
}

std::vector<Edge> sibling_edges(const Cohort& cohort, Pedigree pedigree) {
  std::map<std::pair<AgentId, AgentId>, std::vector<std::uint32_t>> families;
  for (std::uint32_t i = 0; i < cohort.size(); ++i) {
    const Agent& a = pedigree[static_cast<std::size_t>(cohort.members[i])];
    if (a.is_founder()) continue;
    families[{a.mother, a.father}].push_back(i);
  }
  std::vector<Edge> edges;
  for (const auto& [parents, kids] : families) {
    for (std::size_t x = 0; x < kids.size(); ++x) {
      for (std::size_t y = x + 1; y < kids.size(); ++y) edges.push_back({kids[x], kids[y]});
    }
  }
  std::ranges::sort(edges);
  return edges;
}

std::vector<Edge> cousin_edges(const Cohort& cohort, Pedigree pedigree) {
  const auto gp = sorted_grandparents(cohort, pedigree);
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < gp.size(); ++i) {
    for (std::uint32_t j = i + 1; j < gp.size(); ++j) {
      if (overlap4(gp[i], gp[j]) == 2) edges.push_back({i, j});
    }
  }
  return edges;
}

StandardNetwork build_standard_network(const Cohort& cohort, Pedigree pedigree,
                                       const TraitMap& traits, const NetworkCaps& caps,
                                       Rng& rng) {
  caps.validate();
  const std::size_t n = cohort.size();
  if (traits.size() != n) throw std::invalid_argument("trait map does not match cohort size");

  StandardNetwork net;
  net.adjacency = Adjacency(n);
  net.relative_degree.assign(n, 0);
  auto add = [&](Edge e, Provenance p) {
    net.adjacency.add_edge(e.i, e.j);
    net.edges.push_back({e, p});
    if (p != Provenance::Friend) {
      ++net.relative_degree[e.i];
      ++net.relative_degree[e.j];
    }
  };

  // Step 1: every sibling pair.
  for (Edge e : sibling_edges(cohort, pedigree)) add(e, Provenance::Sibling);

  // Step 2: first cousins in random order while both ends are under the cap.
  std::vector<Edge> cousins = cousin_edges(cohort, pedigree);
  net.cousin_candidates = cousins.size();
  std::shuffle(cousins.begin(), cousins.end(), rng);
  const auto relative_cap = static_cast<std::uint32_t>(caps.relative_cap);
  for (Edge e : cousins) {
    if (net.relative_degree[e.i] < relative_cap && net.relative_degree[e.j] < relative_cap &&
        !net.adjacency.has_edge(e.i, e.j)) {
      add(e, Provenance::Cousin);
    }
  }

  {
    const auto gp = sorted_grandparents(cohort, pedigree);
    for (std::uint32_t i = 0; i < n; ++i) {
      const Agent& a = pedigree[static_cast<std::size_t>(cohort.members[i])];
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (overlap4(gp[i], gp[j]) == 4 &&
            !same_parents(a, pedigree[static_cast<std::size_t>(cohort.members[j])])) {
          ++net.double_first_cousin_pairs;
        }
      }
    }
  }

  // Step 3: remaining pairs by ascending trait distance, ties by pair id.
  std::vector<CandidatePair> candidates;
  candidates.reserve(n < 2 ? 0 : n * (n - 1) / 2 - net.edges.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (!net.adjacency.has_edge(i, j)) {
        candidates.push_back({compass_distance(traits[i], traits[j]), i, j});
      }
    }
  }
  std::ranges::sort(candidates, [](const CandidatePair& a, const CandidatePair& b) {
    if (a.delta != b.delta) return a.delta < b.delta;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  const auto total_cap = static_cast<std::size_t>(caps.total_cap);
  std::size_t open = 0;
  for (std::size_t v = 0; v < n; ++v) open += net.adjacency.degree(v) < total_cap ? 1 : 0;
  for (const CandidatePair& p : candidates) {
    if (open < 2) break;
    if (net.adjacency.degree(p.i) < total_cap && net.adjacency.degree(p.j) < total_cap) {
      add({p.i, p.j}, Provenance::Friend);
      if (net.adjacency.degree(p.i) == total_cap) --open;
      if (net.adjacency.degree(p.j) == total_cap) --open;
    }
  }
  return net;
}

}  // namespace kinsim
