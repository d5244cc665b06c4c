#pragma once

#include <cstdint>
#include <vector>

#include "kinsim/demography.hpp"
#include "kinsim/graph.hpp"
#include "kinsim/pedigree.hpp"
#include "kinsim/random.hpp"

namespace kinsim {

/// Per-member neutral trait in degrees on [0, 360), indexed like the cohort.
using TraitMap = std::vector<double>;

struct NetworkCaps {
  int relative_cap = 50;
  int total_cap = 60;

  void validate() const;
};

/// Cohort-index pair with i < j.
struct Edge {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

enum class Provenance : std::uint8_t { Sibling, Cousin, Friend };

const char* to_string(Provenance p);

struct TaggedEdge {
  Edge edge;
  Provenance provenance = Provenance::Friend;
  bool operator==(const TaggedEdge&) const = default;
};

struct StandardNetwork {
  Adjacency adjacency;
  std::vector<TaggedEdge> edges;            // in insertion order
  std::vector<std::uint32_t> relative_degree;  // sibling + cousin edges per member
  std::size_t cousin_candidates = 0;        // |b(-2)|
  std::size_t double_first_cousin_pairs = 0;  // non-siblings sharing all 4 grandparent slots

  double mean_degree() const;
};

TraitMap assign_traits(std::size_t cohort_size, Rng& rng);

/// Circular distance on the 360 degree compass, in [0, 180].
double compass_distance(double a, double b);

/// Pairs of cohort members with the same mother and father, sorted.
std::vector<Edge> sibling_edges(const Cohort& cohort, Pedigree pedigree);

/// Pairs sharing exactly two grandparent slots (first cousins), sorted.
std::vector<Edge> cousin_edges(const Cohort& cohort, Pedigree pedigree);

/// Degree-capped network: all siblings, random-order cousins up to the
/// relative cap, then trait-nearest pairs up to the total cap.
StandardNetwork build_standard_network(const Cohort& cohort, Pedigree pedigree,
                                       const TraitMap& traits, const NetworkCaps& caps,
                                       Rng& rng);

}  // namespace kinsim
