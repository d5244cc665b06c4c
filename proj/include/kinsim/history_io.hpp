#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "kinsim/demography.hpp"
#include "kinsim/pedigree.hpp"

namespace kinsim {

/// Header of every agent CSV.
inline constexpr const char* kAgentCsvHeader = "id,generation,gender,mother_id,father_id";

/// Rows `id,generation,gender,mother_id,father_id` (gender 0 = female, 1 = male,
/// founders' parents = -1) followed by a `#end,<rows>` sentinel.
void write_agents_csv(std::ostream& out, std::span<const Agent> agents);

/// Writes only the cohort members, in cohort order.
void write_cohort_csv(std::ostream& out, const Cohort& cohort, Pedigree pedigree);

/// Throws IoError if unreadable and SchemaMismatch (naming the file) on a bad
/// header, malformed row or missing sentinel.
std::vector<Agent> read_agents_csv(const std::filesystem::path& path);

/// Reads a full history: agents must be densely numbered 0..N-1.
std::vector<Agent> read_pedigree_csv(const std::filesystem::path& path);

}  // namespace kinsim
