#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kinsim/pedigree.hpp"
#include "kinsim/random.hpp"

namespace kinsim {

struct SimConfig {
  double kappa = 4.0;  // mean children per couple
  int target_size = 2000;
  int generations = 6;
  std::uint64_t seed = 0;
  double buffer = 1.1;  // founder oversize factor

  /// Throws ConfigError.
  void validate() const;
};

struct LibraryConfig {
  int runs = 400;
  double fertility_min = 2.5;
  double fertility_max = 5.0;
  int target_size = 2000;
  int generations = 6;
  std::uint64_t master_seed = 0;
  double buffer = 1.1;

  void validate() const;

  /// Fertility target of run `index` on the deterministic uniform grid.
  double kappa_for_run(int index) const;
  std::uint64_t seed_for_run(int index) const;
};

struct Couple {
  AgentId wife = 0;
  AgentId husband = 0;
  std::vector<AgentId> children;
};

/// Members of one generation, ascending by id.
using Roster = std::vector<AgentId>;

struct PopulationHistory {
  std::vector<Agent> agents;                // agents[id].id == id
  std::vector<std::vector<Couple>> couples; // couples[g - 1] formed in generation g
  double kappa = 0.0;
  std::uint64_t seed = 0;        // seed of the attempt that succeeded
  int generations = 0;
  int attempts = 1;

  Pedigree pedigree() const { return agents; }
  Roster generation(int g) const;
  std::size_t final_size() const;

  /// Children born per woman, averaged over generations 1..G-1.
  double realized_fertility() const;
};

/// Final-generation subsample on which all network analysis runs.
struct Cohort {
  std::vector<AgentId> members;  // ascending
  int generation = 0;

  std::size_t size() const { return members.size(); }
};

/// Number of founders needed for the final generation to reach
/// target_size * buffer when each generation grows by kappa / 2.
int founder_count(const SimConfig& config);

/// Appends the founder generation to `history` and returns its roster.
Roster init_founders(const SimConfig& config, PopulationHistory& history, Rng& rng);

/// Greedy random heterosexual matching subject to disjoint grandparent slots.
/// Unmatched agents stay single.
std::vector<Couple> form_pairs(std::span<const AgentId> roster, Pedigree pedigree, Rng& rng);

/// Draws Poisson(kappa) children per couple, appends them to `agents` and
/// records them in each couple. Returns the new generation's roster.
Roster draw_offspring(std::vector<Couple>& couples, double kappa, std::vector<Agent>& agents,
                      Rng& rng);

/// Full G-generation history. An undersized run is retried with a derived seed
/// and the founder buffer scaled up by the observed shortfall (at most doubled);
/// throws GrowthFailure after five attempts.
PopulationHistory run_history(const SimConfig& config);

inline constexpr int kMaxGrowthAttempts = 5;

/// Uniform subsample without replacement of exactly target_size final-generation
/// agents. Throws InsufficientPopulation.
Cohort truncate_final(const PopulationHistory& history, int target_size, Rng& rng);

struct LibraryRun {
  int run_id = 0;
  double kappa_target = 0.0;
  double kappa_realized = 0.0;
  std::uint64_t seed = 0;
  PopulationHistory history;
  Cohort cohort;
};

/// One run of the library: history plus truncated cohort.
LibraryRun build_library_run(const LibraryConfig& config, int run_index);

/// All runs, executed on `workers` threads. Output is independent of the
/// worker count. GrowthFailure carries the offending run index.
std::vector<LibraryRun> build_library(const LibraryConfig& config, int workers = 1);

}  // namespace kinsim
