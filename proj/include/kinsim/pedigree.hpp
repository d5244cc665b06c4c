#pragma once

#include <cstdint>
#include <span>

namespace kinsim {

using AgentId = std::int64_t;

/// Parent-field marker for generation-1 agents.
inline constexpr AgentId kFounder = -1;

enum class Gender : std::uint8_t { Female = 0, Male = 1 };

struct Agent {
  AgentId id = 0;
  int generation = 1;
  Gender gender = Gender::Female;
  AgentId mother = kFounder;
  AgentId father = kFounder;

  bool is_founder() const { return mother == kFounder; }
  bool operator==(const Agent&) const = default;
};

/// Agents indexed by id: pedigree[id].id == id for every entry.
using Pedigree = std::span<const Agent>;

}  // namespace kinsim
