#include "kinsim/demography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "kinsim/errors.hpp"
#include "kinsim/kinship.hpp"
#include "kinsim/parallel.hpp"

namespace kinsim {

namespace {

// Founder rosters larger than this multiple of the target mean the fertility
// cannot sustain the population over the requested generations.
constexpr double kMaxFounderRatio = 100.0;

// Retry growth of the founder buffer: shortfall times a small margin, at least
// the margin itself and at most a doubling.
constexpr double kRetryMargin = 1.05;
constexpr double kMaxShortfallScale = 2.0;

using GrandparentSlots = std::array<AgentId, 4>;

GrandparentSlots sorted_grandparents(AgentId id, Pedigree pedigree) {
  const AncestorVector v = ancestor_slots(id, 2, pedigree);
  GrandparentSlots s{v[0], v[1], v[2], v[3]};
  std::ranges::sort(s);
  return s;
}

bool disjoint(const GrandparentSlots& a, const GrandparentSlots& b) {
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] < b[y]) {
      ++x;
    } else if (b[y] < a[x]) {
      ++y;
    } else {
      return false;
    }
  }
  return true;
}

Gender draw_gender(Rng& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? Gender::Male : Gender::Female;
}

double required_founders(const SimConfig& config) {
  const double growth = std::pow(config.kappa / 2.0, config.generations - 1);
  return config.target_size * config.buffer / growth;
}

}  // namespace

void SimConfig::validate() const {
  if (!(kappa > 0.0)) throw ConfigError("kappa must be > 0");
  if (target_size < 2) throw ConfigError("target size must be >= 2");
  if (generations < 5) throw ConfigError("generations must be >= 5");
  if (!(buffer > 0.0)) throw ConfigError("buffer must be > 0");
}

void LibraryConfig::validate() const {
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (!(fertility_min > 0.0)) throw ConfigError("fertility minimum must be > 0");
  if (!(fertility_min < fertility_max)) throw ConfigError("fertility minimum must be below maximum");
  if (target_size < 2) throw ConfigError("population size must be >= 2");
  if (generations < 5) throw ConfigError("generations must be >= 5");
  if (!(buffer > 0.0)) throw ConfigError("buffer must be > 0");
}

double LibraryConfig::kappa_for_run(int index) const {
  return fertility_min + (index + 0.5) * (fertility_max - fertility_min) / runs;
}

std::uint64_t LibraryConfig::seed_for_run(int index) const {
  return derive_seed(master_seed, static_cast<std::uint64_t>(index));
}

Roster PopulationHistory::generation(int g) const {
  Roster out;
  for (const Agent& a : agents) {
    if (a.generation == g) out.push_back(a.id);
  }
  return out;
}

std::size_t PopulationHistory::final_size() const {
  return static_cast<std::size_t>(std::ranges::count_if(
      agents, [&](const Agent& a) { return a.generation == generations; }));
}

double PopulationHistory::realized_fertility() const {
  std::vector<std::size_t> women(static_cast<std::size_t>(generations) + 1, 0);
  std::vector<std::size_t> born(static_cast<std::size_t>(generations) + 1, 0);
  for (const Agent& a : agents) {
    if (a.generation < 1 || a.generation > generations) continue;
    if (a.gender == Gender::Female) ++women[static_cast<std::size_t>(a.generation)];
    if (a.generation > 1) ++born[static_cast<std::size_t>(a.generation - 1)];
  }
  double sum = 0.0;
  for (int g = 1; g < generations; ++g) {
    const auto w = women[static_cast<std::size_t>(g)];
    if (w > 0) sum += static_cast<double>(born[static_cast<std::size_t>(g)]) / static_cast<double>(w);
  }
  return generations > 1 ? sum / (generations - 1) : 0.0;
}

int founder_count(const SimConfig& config) {
  config.validate();
  const double needed = std::ceil(required_founders(config) - 1e-9);
  return std::max(2, static_cast<int>(needed));
}

Roster init_founders(const SimConfig& config, PopulationHistory& history, Rng& rng) {
  const int n = founder_count(config);
  Roster roster;
  roster.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Agent a;
    a.id = static_cast<AgentId>(history.agents.size());
    a.generation = 1;
    a.gender = draw_gender(rng);
    history.agents.push_back(a);
    roster.push_back(a.id);
  }
  return roster;
}

std::vector<Couple> form_pairs(std::span<const AgentId> roster, Pedigree pedigree, Rng& rng) {
  if (roster.empty()) return {};
  const int generation = pedigree[static_cast<std::size_t>(roster.front())].generation;
  std::vector<AgentId> women, men;
  for (AgentId id : roster) {
    const Agent& a = pedigree[static_cast<std::size_t>(id)];
    if (a.generation != generation) {
      throw std::invalid_argument("form_pairs: roster spans several generations");
    }
    (a.gender == Gender::Female ? women : men).push_back(id);
  }
  std::shuffle(women.begin(), women.end(), rng);
  std::shuffle(men.begin(), men.end(), rng);

  std::vector<GrandparentSlots> men_slots;
  men_slots.reserve(men.size());
  for (AgentId m : men) men_slots.push_back(sorted_grandparents(m, pedigree));

  std::vector<Couple> couples;
  for (AgentId w : women) {
    if (men.empty()) break;
    const GrandparentSlots ws = sorted_grandparents(w, pedigree);
    for (std::size_t k = 0; k < men.size(); ++k) {
      if (!disjoint(ws, men_slots[k])) continue;
      couples.push_back(Couple{w, men[k], {}});
      men.erase(men.begin() + static_cast<std::ptrdiff_t>(k));
      men_slots.erase(men_slots.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  return couples;
}

Roster draw_offspring(std::vector<Couple>& couples, double kappa, std::vector<Agent>& agents,
                      Rng& rng) {
  std::poisson_distribution<int> fertility(kappa);
  Roster roster;
  for (Couple& c : couples) {
    const int generation = agents[static_cast<std::size_t>(c.wife)].generation + 1;
    const int k = fertility(rng);
    for (int child = 0; child < k; ++child) {
      Agent a;
      a.id = static_cast<AgentId>(agents.size());
      a.generation = generation;
      a.gender = draw_gender(rng);
      a.mother = c.wife;
      a.father = c.husband;
      agents.push_back(a);
      c.children.push_back(a.id);
      roster.push_back(a.id);
    }
  }
  return roster;
}

PopulationHistory run_history(const SimConfig& config) {
  config.validate();
  double buffer = config.buffer;
  for (int attempt = 0; attempt < kMaxGrowthAttempts; ++attempt) {
    SimConfig trial = config;
    trial.seed = attempt == 0 ? config.seed : derive_seed(config.seed, static_cast<std::uint64_t>(attempt));
    trial.buffer = buffer;
    if (required_founders(trial) > kMaxFounderRatio * config.target_size) {
      throw GrowthFailure("kappa " + std::to_string(config.kappa) +
                          " cannot sustain the target population over " +
                          std::to_string(config.generations) + " generations");
    }

    Rng rng(trial.seed);
    PopulationHistory history;
    history.kappa = config.kappa;
    history.seed = trial.seed;
    history.generations = config.generations;
    history.attempts = attempt + 1;

    Roster roster = init_founders(trial, history, rng);
    for (int g = 1; g < config.generations; ++g) {
      std::vector<Couple> couples = form_pairs(roster, history.agents, rng);
      roster = draw_offspring(couples, config.kappa, history.agents, rng);
      history.couples.push_back(std::move(couples));
      if (roster.empty()) break;
    }
    const bool complete = history.couples.size() == static_cast<std::size_t>(config.generations - 1);
    if (complete && roster.size() >= static_cast<std::size_t>(config.target_size)) return history;

    // Grow the founder roster by the observed shortfall, so the final
    // generation of the next attempt lands just above the target.
    const double reached = complete ? static_cast<double>(roster.size()) : 0.0;
    const double shortfall = reached > 0.0 ? config.target_size / reached : kMaxShortfallScale;
    buffer *= std::clamp(kRetryMargin * shortfall, kRetryMargin, kMaxShortfallScale);
  }
  throw GrowthFailure("final generation stayed below " + std::to_string(config.target_size) +
                      " after " + std::to_string(kMaxGrowthAttempts) + " attempts (kappa " +
                      std::to_string(config.kappa) + ")");
}

Cohort truncate_final(const PopulationHistory& history, int target_size, Rng& rng) {
  const Roster final_generation = history.generation(history.generations);
  if (target_size < 0 || final_generation.size() < static_cast<std::size_t>(target_size)) {
    throw InsufficientPopulation("final generation has " + std::to_string(final_generation.size()) +
                                 " agents, need " + std::to_string(target_size));
  }
  Cohort cohort;
  cohort.generation = history.generations;
  cohort.members.reserve(static_cast<std::size_t>(target_size));
  std::sample(final_generation.begin(), final_generation.end(), std::back_inserter(cohort.members),
              target_size, rng);
  return cohort;
}

LibraryRun build_library_run(const LibraryConfig& config, int run_index) {
  LibraryRun run;
  run.run_id = run_index;
  run.kappa_target = config.kappa_for_run(run_index);
  run.seed = config.seed_for_run(run_index);

  SimConfig sim;
  sim.kappa = run.kappa_target;
  sim.target_size = config.target_size;
  sim.generations = config.generations;
  sim.seed = run.seed;
  sim.buffer = config.buffer;
  try {
    run.history = run_history(sim);
  } catch (const GrowthFailure& e) {
    throw GrowthFailure("run " + std::to_string(run_index) + ": " + e.what(), run_index);
  }
  run.kappa_realized = run.history.realized_fertility();
  Rng rng(derive_seed(run.seed, "truncate"));
  run.cohort = truncate_final(run.history, config.target_size, rng);
  return run;
}

std::vector<LibraryRun> build_library(const LibraryConfig& config, int workers) {
  config.validate();
  std::vector<LibraryRun> runs(static_cast<std::size_t>(config.runs));
  parallel_for(runs.size(), workers,
               [&](std::size_t i) { runs[i] = build_library_run(config, static_cast<int>(i)); });
  return runs;
}

}  // namespace kinsim
