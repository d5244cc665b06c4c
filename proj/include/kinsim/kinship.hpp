#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "kinsim/demography.hpp"
#include "kinsim/graph.hpp"
#include "kinsim/matrix.hpp"
#include "kinsim/pedigree.hpp"

namespace kinsim {

inline constexpr int kMaxAncestorDepth = 4;
inline constexpr int kGreatGreatSlots = 16;

/// Ancestor slots at one depth: 2 parents, 4 grandparents, 8 great-grandparents
/// or 16 great-great-grandparents, kept with multiplicity. Slot order is
/// canonical: the mother-side subtree precedes the father-side subtree at
/// every level.
class AncestorVector {
 public:
  AncestorVector() = default;
  AncestorVector(int depth, std::span<const AgentId> slots);

  int depth() const { return depth_; }
  std::size_t size() const { return std::size_t{1} << depth_; }
  std::span<const AgentId> slots() const { return {slots_.data(), size()}; }
  AgentId operator[](std::size_t i) const { return slots_[i]; }

  bool operator==(const AncestorVector& other) const;

 private:
  int depth_ = 0;
  std::array<AgentId, kGreatGreatSlots> slots_{};
};

/// Ids standing in for the unrecorded ancestors of founders. They are negative,
/// never equal kFounder, and are a pure function of (founder, path above the
/// founder), so distinct founders never share one.
AgentId virtual_ancestor(AgentId founder, unsigned path_code);
bool is_virtual_ancestor(AgentId id);

/// Throws std::invalid_argument unless 1 <= depth <= 4.
AncestorVector ancestor_slots(AgentId agent, int depth, Pedigree pedigree);

/// Size of the multiset intersection of two slot lists.
int multiset_overlap(std::span<const AgentId> a, std::span<const AgentId> b);

/// Number of shared ancestor slots of two agents at the given depth.
int shared_ancestor_count(AgentId i, AgentId j, int depth, Pedigree pedigree);

/// r[i][j] = shared great-great-grandparent slots, zero diagonal.
using RelatednessMatrix = SymmetricMatrix<std::uint8_t>;

/// c[i][j] = common neighbours of i and j.
using SharedContactMatrix = SymmetricMatrix<std::uint16_t>;

RelatednessMatrix relatedness_matrix(const Cohort& cohort, Pedigree pedigree);

inline constexpr int kPrimaryKinThreshold = 8;

/// Edge between cohort indices i != j iff r[i][j] >= threshold.
Adjacency build_primary_kin_network(const RelatednessMatrix& r,
                                    int threshold = kPrimaryKinThreshold);
Adjacency build_primary_kin_network(const Cohort& cohort, Pedigree pedigree);

/// Full common-neighbour matrix of a symmetric zero-diagonal adjacency.
SharedContactMatrix shared_contacts(const Adjacency& adjacency);

/// Single entry of the same matrix, computed on demand.
int shared_contacts(const Adjacency& adjacency, std::size_t i, std::size_t j);

}  // namespace kinsim
