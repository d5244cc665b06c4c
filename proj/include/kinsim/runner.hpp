#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kinsim/analysis.hpp"
#include "kinsim/demography.hpp"
#include "kinsim/kinship.hpp"
#include "kinsim/socialnet.hpp"

namespace kinsim {

inline constexpr const char* kToolVersion = "1.0.0";

struct PipelineConfig {
  std::string preset = "full";
  LibraryConfig library;
  NetworkCaps caps;
  AnalysisOptions analysis;
  int band_count = 5;
  std::filesystem::path out_dir = "kinsim_out";
  int workers = 1;
  bool dump_matrices = false;

  /// Recomputes the fertility bands from the library range, then checks every
  /// embedded config. Throws ConfigError.
  void resolve();
};

/// "full": 400 runs of 2000, every pair regressed. "desk": 60 runs of 500,
/// 200k-pair regression sample. Throws ConfigError for other names.
PipelineConfig preset_config(std::string_view name);

/// Overrides fields present in `settings`. Keys mirror the long CLI flags with
/// underscores (runs, pop_size, fertility_min, relative_cap, seed, out, ...).
void apply_settings(PipelineConfig& config, const nlohmann::json& settings);

nlohmann::json to_json(const PipelineConfig& config);

/// Per-run networks and matrices built from a history and its cohort.
struct RunArtifacts {
  TraitMap traits;
  RelatednessMatrix relatedness;
  Adjacency kin_network;
  SharedContactMatrix kin_contacts;
  StandardNetwork standard;
  SharedContactMatrix standard_contacts;
};

/// Traits and the cousin order are drawn from streams derived from `run_seed`.
RunArtifacts build_run_artifacts(const Cohort& cohort, Pedigree pedigree, std::uint64_t run_seed,
                                 const NetworkCaps& caps);

struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  std::uint64_t history_seed = 0;
  int attempts = 1;
  double kappa_target = 0.0;
  double kappa_realized = 0.0;
  std::size_t n_final = 0;
  std::size_t cohort_size = 0;
  int generations = 0;
};

struct GenerateResult {
  std::vector<RunRecord> runs;
  double seconds = 0.0;
};

struct AnalyzeResult {
  std::vector<RunSummary> summaries;
  std::vector<Fig5Row> fig5;
  std::vector<Fig6Row> fig6;
  std::vector<Fig7Row> fig7;
  std::vector<Fig8Row> fig8_high;
  std::vector<Fig8Row> fig8_low;
  std::vector<Fig9Row> fig9;
  double seconds = 0.0;
};

/// Writes runs/run_NNNN/{history.csv,cohort.csv,run.json} and manifest.json
/// under config.out_dir.
GenerateResult cmd_generate(const PipelineConfig& config);

/// Reads the library in `library_dir` and writes fig5..fig9 CSVs next to it.
/// Throws ManifestMissing or SchemaMismatch.
AnalyzeResult cmd_analyze(const PipelineConfig& config, const std::filesystem::path& library_dir);

/// cmd_generate followed by cmd_analyze on config.out_dir.
AnalyzeResult cmd_all(const PipelineConfig& config);

inline constexpr const char* kFigureFiles[] = {"fig5.csv", "fig6.csv", "fig7.csv",
                                               "fig8_high.csv", "fig8_low.csv", "fig9.csv"};

}  // namespace kinsim
