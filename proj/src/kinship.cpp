#include "kinsim/kinship.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace kinsim {

namespace {

// Path codes carry a leading 1 bit above the mother(0)/father(1) path bits, so
// a founder's depth-4 ancestors still fit below 32.
constexpr AgentId kPathCodeSpan = 32;
constexpr AgentId kVirtualBase = -2;

const Agent& lookup(Pedigree pedigree, AgentId id) {
  if (id < 0 || static_cast<std::size_t>(id) >= pedigree.size()) {
    throw std::out_of_range("agent id " + std::to_string(id) + " not in pedigree");
  }
  return pedigree[static_cast<std::size_t>(id)];
}

std::array<AgentId, kGreatGreatSlots> sorted_gggp(AgentId id, Pedigree pedigree) {
  const AncestorVector v = ancestor_slots(id, kMaxAncestorDepth, pedigree);
  std::array<AgentId, kGreatGreatSlots> s{};
  std::ranges::copy(v.slots(), s.begin());
  std::ranges::sort(s);
  return s;
}

int sorted_overlap(std::span<const AgentId> a, std::span<const AgentId> b) {
  int shared = 0;
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
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

}  // namespace

AncestorVector::AncestorVector(int depth, std::span<const AgentId> slots) : depth_(depth) {
  if (depth < 1 || depth > kMaxAncestorDepth || slots.size() != size()) {
    throw std::invalid_argument("AncestorVector: slot count must be 2^depth");
  }
  std::ranges::copy(slots, slots_.begin());
}

bool AncestorVector::operator==(const AncestorVector& other) const {
  return depth_ == other.depth_ && std::ranges::equal(slots(), other.slots());
}

AgentId virtual_ancestor(AgentId founder, unsigned path_code) {
  return kVirtualBase - (founder * kPathCodeSpan + static_cast<AgentId>(path_code));
}

bool is_virtual_ancestor(AgentId id) { return id <= kVirtualBase; }

AncestorVector ancestor_slots(AgentId agent, int depth, Pedigree pedigree) {
  if (depth < 1 || depth > kMaxAncestorDepth) {
    throw std::invalid_argument("ancestor depth must be in 1..4");
  }
  std::array<AgentId, kGreatGreatSlots> level{};
  std::array<AgentId, kGreatGreatSlots> next{};
  level[0] = agent;
  lookup(pedigree, agent);
  std::size_t width = 1;
  for (int step = 0; step < depth; ++step) {
    for (std::size_t s = 0; s < width; ++s) {
      const AgentId x = level[s];
      AgentId mother, father;
      if (is_virtual_ancestor(x)) {
        const AgentId offset = kVirtualBase - x;
        const AgentId founder = offset / kPathCodeSpan;
        const auto code = static_cast<unsigned>(offset % kPathCodeSpan);
        mother = virtual_ancestor(founder, code << 1);
        father = virtual_ancestor(founder, (code << 1) | 1U);
      } else {
        const Agent& a = lookup(pedigree, x);
        if (a.is_founder()) {
          mother = virtual_ancestor(x, 0b10);
          father = virtual_ancestor(x, 0b11);
        } else {
          mother = a.mother;
          father = a.father;
        }
      }
      next[2 * s] = mother;
      next[2 * s + 1] = father;
    }
    width *= 2;
    level = next;
  }
  return AncestorVector(depth, std::span<const AgentId>(level.data(), width));
}

int multiset_overlap(std::span<const AgentId> a, std::span<const AgentId> b) {
  std::array<AgentId, kGreatGreatSlots> sa{}, sb{};
  if (a.size() > sa.size() || b.size() > sb.size()) {
    std::vector<AgentId> va(a.begin(), a.end()), vb(b.begin(), b.end());
    std::ranges::sort(va);
    std::ranges::sort(vb);
    return sorted_overlap(va, vb);
  }
  std::ranges::copy(a, sa.begin());
  std::ranges::copy(b, sb.begin());
  std::sort(sa.begin(), sa.begin() + static_cast<std::ptrdiff_t>(a.size()));
  std::sort(sb.begin(), sb.begin() + static_cast<std::ptrdiff_t>(b.size()));
  return sorted_overlap({sa.data(), a.size()}, {sb.data(), b.size()});
}

int shared_ancestor_count(AgentId i, AgentId j, int depth, Pedigree pedigree) {
  const AncestorVector vi = ancestor_slots(i, depth, pedigree);
  const AncestorVector vj = ancestor_slots(j, depth, pedigree);
  return multiset_overlap(vi.slots(), vj.slots());
}

RelatednessMatrix relatedness_matrix(const Cohort& cohort, Pedigree pedigree) {
  const std::size_t n = cohort.size();
  std::vector<std::array<AgentId, kGreatGreatSlots>> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = sorted_gggp(cohort.members[i], pedigree);

  RelatednessMatrix r(n);
  auto out = r.pairs().begin();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      *out++ = static_cast<std::uint8_t>(sorted_overlap(sorted[i], sorted[j]));
    }
  }
  return r;
}

Adjacency build_primary_kin_network(const RelatednessMatrix& r, int threshold) {
  const std::size_t n = r.size();
  Adjacency a(n);
  auto value = r.pairs().begin();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++value) {
      if (*value >= threshold) a.add_edge(i, j);
    }
  }
  return a;
}

Adjacency build_primary_kin_network(const Cohort& cohort, Pedigree pedigree) {
  return build_primary_kin_network(relatedness_matrix(cohort, pedigree));
}

SharedContactMatrix shared_contacts(const Adjacency& adjacency) {
  // Every vertex k adds one shared contact to each pair of its neighbours.
  const std::size_t n = adjacency.size();
  SharedContactMatrix c(n);
  auto cells = c.pairs();
  for (std::size_t k = 0; k < n; ++k) {
    const auto nb = adjacency.neighbors(k);
    for (std::size_t x = 0; x < nb.size(); ++x) {
      for (std::size_t y = x + 1; y < nb.size(); ++y) {
        ++cells[c.pair_index(nb[x], nb[y])];
      }
    }
  }
  return c;
}

int shared_contacts(const Adjacency& adjacency, std::size_t i, std::size_t j) {
  return adjacency.common_neighbors(i, j);
}

}  // namespace kinsim
