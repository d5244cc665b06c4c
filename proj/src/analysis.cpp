#include "kinsim/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "kinsim/errors.hpp"

namespace kinsim {

namespace {

std::vector<const RunSummary*> band_members(std::span<const RunSummary> runs,
                                            const FertilityBand& band) {
  std::vector<const RunSummary*> out;
  for (const RunSummary& s : runs) {
    if (band.contains(s.kappa_target)) out.push_back(&s);
  }
  if (out.empty()) {
    throw EmptyBand("no runs with fertility in [" + format_number(band.lower) + ", " +
                    format_number(band.upper) + "]");
  }
  return out;
}

std::string band_label(const FertilityBand& band) {
  return format_number(band.lower) + "," + format_number(band.upper);
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::vector<FertilityBand> partition_bands(double lo, double hi, int count) {
  if (count < 1 || !(lo < hi)) throw ConfigError("band partition needs lo < hi and count >= 1");
  std::vector<FertilityBand> bands;
  const double width = (hi - lo) / count;
  for (int b = 0; b < count; ++b) {
    const double lower = lo + b * width;
    const double upper = b + 1 == count ? hi : lo + (b + 1) * width;
    bands.push_back({lower, upper, b + 1 == count});
  }
  return bands;
}

void AnalysisOptions::validate() const {
  if (bands.empty()) throw ConfigError("at least one fertility band is required");
  for (const auto& b : bands) {
    if (!(b.lower < b.upper)) throw ConfigError("fertility band bounds must satisfy lower < upper");
  }
  if (!(high_band.lower < high_band.upper) || !(low_band.lower < low_band.upper)) {
    throw ConfigError("surface band bounds must satisfy lower < upper");
  }
  if (!(delta_bucket > 0.0) || delta_bucket > 180.0) {
    throw ConfigError("delta bucket width must be in (0, 180]");
  }
}

int AnalysisOptions::delta_bucket_count() const {
  return static_cast<int>(std::ceil(180.0 / delta_bucket - 1e-9));
}

RunSummary summarize_run(const RunInputs& in, const AnalysisOptions& options) {
  const RelatednessMatrix& r = *in.relatedness;
  const SharedContactMatrix& kin = *in.kin_contacts;
  const SharedContactMatrix& standard = *in.standard_contacts;
  const TraitMap& traits = *in.traits;
  const std::size_t n = r.size();
  if (kin.size() != n || standard.size() != n || traits.size() != n) {
    throw std::invalid_argument("summarize_run: run matrices differ in size");
  }

  RunSummary s;
  s.run_id = in.run_id;
  s.kappa_target = in.kappa_target;
  s.kappa_realized = in.kappa_realized;
  s.cohort_size = n;
  s.pair_count = r.pair_count();
  s.delta_bucket = options.delta_bucket;
  const int buckets = options.delta_bucket_count();
  s.surface_contacts.assign(static_cast<std::size_t>(buckets) * kRelatednessLevels, 0);
  s.surface_pairs.assign(s.surface_contacts.size(), 0);

  // Pair indices used for the regressions, ascending.
  std::vector<std::size_t> sample;
  const bool all_pairs = options.pair_sample == 0 || options.pair_sample >= s.pair_count;
  if (!all_pairs) {
    Rng rng(derive_seed(in.seed, "pair-sample"));
    sample.reserve(options.pair_sample);
    // Selection sampling: each index is kept with probability needed / remaining.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t needed = options.pair_sample;
    for (std::size_t idx = 0; idx < s.pair_count && needed > 0; ++idx) {
      if (unit(rng) * static_cast<double>(s.pair_count - idx) < static_cast<double>(needed)) {
        sample.push_back(idx);
        --needed;
      }
    }
  }
  const std::size_t regression_n = all_pairs ? s.pair_count : sample.size();
  std::vector<double> x_kin, x_sim, y;
  x_kin.reserve(regression_n);
  x_sim.reserve(regression_n);
  y.reserve(regression_n);

  const auto rv = r.pairs();
  const auto kv = kin.pairs();
  const auto sv = standard.pairs();
  std::size_t k = 0;
  std::size_t next_sample = 0;
  std::uint64_t r_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      const int rel = rv[k];
      const double delta = compass_distance(traits[i], traits[j]);
      s.pairs_by_r[static_cast<std::size_t>(rel)] += 1;
      s.kin_contacts_by_r[static_cast<std::size_t>(rel)] += kv[k];
      r_total += static_cast<std::uint64_t>(rel);

      const int bucket = std::min(buckets - 1, static_cast<int>(delta / options.delta_bucket));
      const auto cell = static_cast<std::size_t>(bucket * kRelatednessLevels + rel);
      s.surface_contacts[cell] += sv[k];
      s.surface_pairs[cell] += 1;

      if (all_pairs || (next_sample < sample.size() && sample[next_sample] == k)) {
        x_kin.push_back(rel);
        x_sim.push_back(delta);
        y.push_back(sv[k]);
        ++next_sample;
      }
    }
  }
  s.mean_r = s.pair_count == 0 ? 0.0
                               : static_cast<double>(r_total) / static_cast<double>(s.pair_count);
  s.regression_pairs = y.size();
  try {
    s.kin_fit = cubic_fit(x_kin, y);
    s.similarity_fit = cubic_fit(x_sim, y);
  } catch (const DegenerateInput& e) {
    throw DegenerateInput("run " + std::to_string(in.run_id) + ": " + e.what());
  }
  return s;
}

std::vector<Fig5Row> relatedness_histogram(std::span<const RunSummary> runs,
                                           std::span<const FertilityBand> bands) {
  std::vector<Fig5Row> rows;
  for (const FertilityBand& band : bands) {
    const auto members = band_members(runs, band);
    for (int v = 0; v < kRelatednessLevels; ++v) {
      double sum = 0.0;
      for (const RunSummary* s : members) {
        if (s->pair_count > 0) {
          sum += static_cast<double>(s->pairs_by_r[static_cast<std::size_t>(v)]) /
                 static_cast<double>(s->pair_count);
        }
      }
      rows.push_back({band.lower, band.upper, v, sum / static_cast<double>(members.size())});
    }
  }
  return rows;
}

std::vector<Fig6Row> mean_relatedness_by_fertility(std::span<const RunSummary> runs) {
  std::vector<Fig6Row> rows;
  rows.reserve(runs.size());
  for (const RunSummary& s : runs) {
    rows.push_back({s.run_id, s.kappa_target, s.kappa_realized, s.mean_r});
  }
  return rows;
}

std::vector<Fig7Row> contacts_by_relatedness(std::span<const RunSummary> runs,
                                             std::span<const FertilityBand> bands) {
  std::vector<Fig7Row> rows;
  for (const FertilityBand& band : bands) {
    std::array<std::uint64_t, kRelatednessLevels> contacts{}, pairs{};
    for (const RunSummary* s : band_members(runs, band)) {
      for (std::size_t v = 0; v < kRelatednessLevels; ++v) {
        contacts[v] += s->kin_contacts_by_r[v];
        pairs[v] += s->pairs_by_r[v];
      }
    }
    for (std::size_t v = 0; v < kRelatednessLevels; ++v) {
      if (pairs[v] == 0) continue;
      rows.push_back({band.lower, band.upper, static_cast<int>(v),
                      static_cast<double>(contacts[v]) / static_cast<double>(pairs[v]), pairs[v]});
    }
  }
  return rows;
}

std::vector<Fig8Row> interaction_surface(std::span<const RunSummary> runs,
                                         const FertilityBand& band) {
  const auto members = band_members(runs, band);
  const double width = members.front()->delta_bucket;
  const std::size_t cells = members.front()->surface_pairs.size();
  std::vector<std::uint64_t> contacts(cells, 0), pairs(cells, 0);
  for (const RunSummary* s : members) {
    if (s->delta_bucket != width || s->surface_pairs.size() != cells) {
      throw std::invalid_argument("interaction_surface: runs use different delta buckets");
    }
    for (std::size_t c = 0; c < cells; ++c) {
      contacts[c] += s->surface_contacts[c];
      pairs[c] += s->surface_pairs[c];
    }
  }
  std::vector<Fig8Row> rows;
  const std::size_t buckets = cells / kRelatednessLevels;
  for (std::size_t b = 0; b < buckets; ++b) {
    const double lo = static_cast<double>(b) * width;
    const double hi = std::min(180.0, static_cast<double>(b + 1) * width);
    for (int v = 0; v < kRelatednessLevels; ++v) {
      const std::size_t c = b * kRelatednessLevels + static_cast<std::size_t>(v);
      Fig8Row row{lo, hi, v, std::nullopt, pairs[c]};
      if (pairs[c] > 0) {
        row.mean_shared_contacts = static_cast<double>(contacts[c]) / static_cast<double>(pairs[c]);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<Fig9Row> predictive_power(std::span<const RunSummary> runs) {
  std::vector<Fig9Row> rows;
  rows.reserve(runs.size());
  for (const RunSummary& s : runs) {
    rows.push_back({s.run_id, s.kappa_target, s.kin_fit.adj_r2, s.similarity_fit.adj_r2,
                    s.regression_pairs, s.kin_fit.effective_degree,
                    s.similarity_fit.effective_degree});
  }
  return rows;
}

std::vector<double> crossover_profile(std::span<const Fig9Row> rows,
                                      std::span<const FertilityBand> bands) {
  std::vector<double> out;
  for (const FertilityBand& band : bands) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const Fig9Row& row : rows) {
      if (!band.contains(row.kappa_target)) continue;
      sum += row.adj_r2_kinship - row.adj_r2_similarity;
      ++count;
    }
    if (count == 0) throw EmptyBand("no fig9 rows in band [" + band_label(band) + "]");
    out.push_back(sum / static_cast<double>(count));
  }
  return out;
}

std::optional<double> pooled_surface_mean(std::span<const Fig8Row> rows, int shared_gggp) {
  double contacts = 0.0;
  std::uint64_t pairs = 0;
  for (const Fig8Row& row : rows) {
    if (row.shared_gggp != shared_gggp || !row.mean_shared_contacts) continue;
    contacts += *row.mean_shared_contacts * static_cast<double>(row.n_pairs);
    pairs += row.n_pairs;
  }
  if (pairs == 0) return std::nullopt;
  return contacts / static_cast<double>(pairs);
}

void write_fig5(std::ostream& out, std::span<const Fig5Row> rows) {
  out << "band_lo,band_hi,shared_gggp,fraction\n";
  for (const auto& r : rows) {
    out << format_number(r.band_lo) << ',' << format_number(r.band_hi) << ',' << r.shared_gggp
        << ',' << format_number(r.fraction) << '\n';
  }
}

void write_fig6(std::ostream& out, std::span<const Fig6Row> rows) {
  out << "run_id,kappa_target,kappa_realized,mean_shared_gggp\n";
  for (const auto& r : rows) {
    out << r.run_id << ',' << format_number(r.kappa_target) << ','
        << format_number(r.kappa_realized) << ',' << format_number(r.mean_shared_gggp) << '\n';
  }
}

void write_fig7(std::ostream& out, std::span<const Fig7Row> rows) {
  out << "band_lo,band_hi,shared_gggp,mean_shared_contacts,n_pairs\n";
  for (const auto& r : rows) {
    out << format_number(r.band_lo) << ',' << format_number(r.band_hi) << ',' << r.shared_gggp
        << ',' << format_number(r.mean_shared_contacts) << ',' << r.n_pairs << '\n';
  }
}

void write_fig8(std::ostream& out, std::span<const Fig8Row> rows) {
  out << "delta_lo,delta_hi,shared_gggp,mean_shared_contacts,n_pairs\n";
  for (const auto& r : rows) {
    out << format_number(r.delta_lo) << ',' << format_number(r.delta_hi) << ',' << r.shared_gggp
        << ',' << (r.mean_shared_contacts ? format_number(*r.mean_shared_contacts) : "NA") << ','
        << r.n_pairs << '\n';
  }
}

void write_fig9(std::ostream& out, std::span<const Fig9Row> rows) {
  out << "run_id,kappa_target,adj_r2_kinship,adj_r2_similarity,n_pairs,effective_degree_kin,"
         "effective_degree_sim\n";
  for (const auto& r : rows) {
    out << r.run_id << ',' << format_number(r.kappa_target) << ','
        << format_number(r.adj_r2_kinship) << ',' << format_number(r.adj_r2_similarity) << ','
        << r.n_pairs << ',' << r.effective_degree_kin << ',' << r.effective_degree_sim << '\n';
  }
}

}  // namespace kinsim
