#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinsim/kinship.hpp"
#include "kinsim/regression.hpp"
#include "kinsim/socialnet.hpp"

namespace kinsim {

inline constexpr int kRelatednessLevels = kGreatGreatSlots + 1;  // r in 0..16

/// Fertility interval. Half open unless `closed_upper`.
struct FertilityBand {
  double lower = 0.0;
  double upper = 0.0;
  bool closed_upper = false;

  bool contains(double kappa) const {
    return kappa >= lower && (kappa < upper || (closed_upper && kappa == upper));
  }
};

/// `count` equal-width bands partitioning [lo, hi]; the last one is closed.
std::vector<FertilityBand> partition_bands(double lo, double hi, int count);

struct AnalysisOptions {
  std::vector<FertilityBand> bands = partition_bands(2.5, 5.0, 5);
  FertilityBand high_band{4.5, 5.0, true};
  FertilityBand low_band{2.5, 3.0, true};
  double delta_bucket = 10.0;  // degrees
  std::size_t pair_sample = 0;  // 0 = regress on every pair

  void validate() const;
  int delta_bucket_count() const;
};

/// Everything the figure tables need from one run, computed over the cohort.
struct RunInputs {
  int run_id = 0;
  double kappa_target = 0.0;
  double kappa_realized = 0.0;
  std::uint64_t seed = 0;
  const RelatednessMatrix* relatedness = nullptr;
  const SharedContactMatrix* kin_contacts = nullptr;       // from the primary kin network
  const SharedContactMatrix* standard_contacts = nullptr;  // from the standardized network
  const TraitMap* traits = nullptr;
};

/// Per-run reduction. Small enough to keep for a whole library.
struct RunSummary {
  int run_id = 0;
  double kappa_target = 0.0;
  double kappa_realized = 0.0;
  std::size_t cohort_size = 0;
  std::size_t pair_count = 0;

  std::array<std::uint64_t, kRelatednessLevels> pairs_by_r{};
  double mean_r = 0.0;
  std::array<std::uint64_t, kRelatednessLevels> kin_contacts_by_r{};  // sum of c

  double delta_bucket = 10.0;
  // [bucket * kRelatednessLevels + r]
  std::vector<std::uint64_t> surface_contacts;
  std::vector<std::uint64_t> surface_pairs;

  RegressionFit kin_fit;
  RegressionFit similarity_fit;
  std::size_t regression_pairs = 0;
};

/// Throws DegenerateInput naming the run if either regression is degenerate.
RunSummary summarize_run(const RunInputs& inputs, const AnalysisOptions& options);

struct Fig5Row {
  double band_lo, band_hi;
  int shared_gggp;
  double fraction;
};
struct Fig6Row {
  int run_id;
  double kappa_target, kappa_realized, mean_shared_gggp;
};
struct Fig7Row {
  double band_lo, band_hi;
  int shared_gggp;
  double mean_shared_contacts;
  std::uint64_t n_pairs;
};
struct Fig8Row {
  double delta_lo, delta_hi;
  int shared_gggp;
  std::optional<double> mean_shared_contacts;  // empty cell
  std::uint64_t n_pairs;
};
struct Fig9Row {
  int run_id;
  double kappa_target, adj_r2_kinship, adj_r2_similarity;
  std::size_t n_pairs;
  int effective_degree_kin, effective_degree_sim;
};

/// Mean over band runs of the fraction of alters at each relatedness level.
/// Throws EmptyBand.
std::vector<Fig5Row> relatedness_histogram(std::span<const RunSummary> runs,
                                           std::span<const FertilityBand> bands);

/// Run order is preserved.
std::vector<Fig6Row> mean_relatedness_by_fertility(std::span<const RunSummary> runs);

/// Pooled mean kin-network shared contacts per relatedness level present in
/// each band. Throws EmptyBand.
std::vector<Fig7Row> contacts_by_relatedness(std::span<const RunSummary> runs,
                                             std::span<const FertilityBand> bands);

/// (delta bucket, r) surface of pooled standardized-network shared contacts.
/// Throws EmptyBand.
std::vector<Fig8Row> interaction_surface(std::span<const RunSummary> runs,
                                         const FertilityBand& band);

std::vector<Fig9Row> predictive_power(std::span<const RunSummary> runs);

/// Mean of (kinship adj R^2 - similarity adj R^2) per band, in band order.
/// Throws EmptyBand.
std::vector<double> crossover_profile(std::span<const Fig9Row> rows,
                                      std::span<const FertilityBand> bands);

/// Pooled mean over all cells of `rows` with the given r, weighted by pairs.
std::optional<double> pooled_surface_mean(std::span<const Fig8Row> rows, int shared_gggp);

void write_fig5(std::ostream& out, std::span<const Fig5Row> rows);
void write_fig6(std::ostream& out, std::span<const Fig6Row> rows);
void write_fig7(std::ostream& out, std::span<const Fig7Row> rows);
void write_fig8(std::ostream& out, std::span<const Fig8Row> rows);
void write_fig9(std::ostream& out, std::span<const Fig9Row> rows);

/// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace kinsim
