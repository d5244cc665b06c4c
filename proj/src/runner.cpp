#include "kinsim/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "kinsim/errors.hpp"
#include "kinsim/history_io.hpp"
#include "kinsim/parallel.hpp"

namespace kinsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string run_dir_name(int run_id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%04d", run_id);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  writer(out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaMismatch(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

json band_json(const FertilityBand& b) { return json::array({b.lower, b.upper}); }

FertilityBand band_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("band must be [lower, upper]");
  return {j[0].get<double>(), j[1].get<double>(), true};
}

json record_json(const RunRecord& r) {
  return {{"run_id", r.run_id},
          {"kappa_target", r.kappa_target},
          {"kappa_realized", r.kappa_realized},
          {"seed", r.seed},
          {"history_seed", r.history_seed},
          {"attempts", r.attempts},
          {"n_final", r.n_final},
          {"cohort_size", r.cohort_size},
          {"generations", r.generations}};
}

RunRecord record_from_json(const json& j, const std::string& file) {
  try {
    RunRecord r;
    r.run_id = j.at("run_id").get<int>();
    r.kappa_target = j.at("kappa_target").get<double>();
    r.kappa_realized = j.at("kappa_realized").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.history_seed = j.at("history_seed").get<std::uint64_t>();
    r.attempts = j.at("attempts").get<int>();
    r.n_final = j.at("n_final").get<std::size_t>();
    r.cohort_size = j.at("cohort_size").get<std::size_t>();
    r.generations = j.at("generations").get<int>();
    return r;
  } catch (const json::exception& e) {
    throw SchemaMismatch(file, std::string("bad run record: ") + e.what());
  }
}

template <class T>
void dump_matrix(const fs::path& path, const SymmetricMatrix<T>& m, const Cohort& cohort) {
  write_file(path, [&](std::ostream& out) {
    out << "i,j,value\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        const auto v = m(i, j);
        if (v != 0) out << cohort.members[i] << ',' << cohort.members[j] << ',' << +v << '\n';
      }
    }
  });
}

void dump_run(const fs::path& dir, const Cohort& cohort, const RunArtifacts& art) {
  dump_matrix(dir / "relatedness.csv", art.relatedness, cohort);
  write_file(dir / "kin_adjacency.csv", [&](std::ostream& out) {
    out << "i,j,value\n";
    for (std::size_t i = 0; i < cohort.size(); ++i) {
      for (std::size_t j = i + 1; j < cohort.size(); ++j) {
        if (art.kin_network.has_edge(i, j)) {
          out << cohort.members[i] << ',' << cohort.members[j] << ",1\n";
        }
      }
    }
  });
  dump_matrix(dir / "kin_contacts.csv", art.kin_contacts, cohort);
  write_file(dir / "network_edges.csv", [&](std::ostream& out) {
    out << "i,j,provenance\n";
    for (const TaggedEdge& e : art.standard.edges) {
      out << cohort.members[e.edge.i] << ',' << cohort.members[e.edge.j] << ','
          << to_string(e.provenance) << '\n';
    }
  });
  write_file(dir / "network_nodes.csv", [&](std::ostream& out) {
    out << "id,phi_degrees\n";
    for (std::size_t i = 0; i < cohort.size(); ++i) {
      out << cohort.members[i] << ',' << format_number(art.traits[i]) << '\n';
    }
  });
}

Cohort load_cohort(const fs::path& path, Pedigree pedigree, int generations) {
  const std::vector<Agent> rows = read_agents_csv(path);
  Cohort cohort;
  cohort.generation = generations;
  for (const Agent& a : rows) {
    if (a.id < 0 || static_cast<std::size_t>(a.id) >= pedigree.size() ||
        pedigree[static_cast<std::size_t>(a.id)] != a) {
      throw SchemaMismatch(path.string(),
                           "cohort member " + std::to_string(a.id) + " does not match history");
    }
    if (a.generation != generations) {
      throw SchemaMismatch(path.string(), "cohort member outside the final generation");
    }
    if (!cohort.members.empty() && a.id <= cohort.members.back()) {
      throw SchemaMismatch(path.string(), "cohort members must be in ascending id order");
    }
    cohort.members.push_back(a.id);
  }
  return cohort;
}

void write_figures(const fs::path& dir, const AnalyzeResult& r) {
  write_file(dir / "fig5.csv", [&](std::ostream& o) { write_fig5(o, r.fig5); });
  write_file(dir / "fig6.csv", [&](std::ostream& o) { write_fig6(o, r.fig6); });
  write_file(dir / "fig7.csv", [&](std::ostream& o) { write_fig7(o, r.fig7); });
  write_file(dir / "fig8_high.csv", [&](std::ostream& o) { write_fig8(o, r.fig8_high); });
  write_file(dir / "fig8_low.csv", [&](std::ostream& o) { write_fig8(o, r.fig8_low); });
  write_file(dir / "fig9.csv", [&](std::ostream& o) { write_fig9(o, r.fig9); });
}

}  // namespace

void PipelineConfig::resolve() {
  library.validate();
  if (band_count < 1) throw ConfigError("band count must be >= 1");
  analysis.bands = partition_bands(library.fertility_min, library.fertility_max, band_count);
  caps.validate();
  analysis.validate();
  if (workers < 1) throw ConfigError("worker count must be >= 1");
}

PipelineConfig preset_config(std::string_view name) {
  PipelineConfig config;
  config.preset = std::string(name);
  if (name == "full") {
    config.library.runs = 400;
    config.library.target_size = 2000;
    config.analysis.pair_sample = 0;
  } else if (name == "desk") {
    config.library.runs = 60;
    config.library.target_size = 500;
    config.analysis.pair_sample = 200000;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected desk or full)");
  }
  return config;
}

void apply_settings(PipelineConfig& c, const json& s) {
  static const std::set<std::string> known = {
      "preset",      "runs",        "pop_size",     "generations", "fertility_min",
      "fertility_max", "relative_cap", "total_cap", "delta_bucket", "pair_sample",
      "seed",        "workers",     "out",          "dump_matrices", "band_count",
      "high_band",   "low_band",    "buffer"};
  if (!s.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : s.items()) {
    if (!known.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }
  try {
    if (s.contains("runs")) c.library.runs = s["runs"].get<int>();
    if (s.contains("pop_size")) c.library.target_size = s["pop_size"].get<int>();
    if (s.contains("generations")) c.library.generations = s["generations"].get<int>();
    if (s.contains("fertility_min")) c.library.fertility_min = s["fertility_min"].get<double>();
    if (s.contains("fertility_max")) c.library.fertility_max = s["fertility_max"].get<double>();
    if (s.contains("buffer")) c.library.buffer = s["buffer"].get<double>();
    if (s.contains("seed")) c.library.master_seed = s["seed"].get<std::uint64_t>();
    if (s.contains("relative_cap")) c.caps.relative_cap = s["relative_cap"].get<int>();
    if (s.contains("total_cap")) c.caps.total_cap = s["total_cap"].get<int>();
    if (s.contains("delta_bucket")) c.analysis.delta_bucket = s["delta_bucket"].get<double>();
    if (s.contains("pair_sample")) c.analysis.pair_sample = s["pair_sample"].get<std::size_t>();
    if (s.contains("band_count")) c.band_count = s["band_count"].get<int>();
    if (s.contains("high_band")) c.analysis.high_band = band_from_json(s["high_band"]);
    if (s.contains("low_band")) c.analysis.low_band = band_from_json(s["low_band"]);
    if (s.contains("workers")) c.workers = s["workers"].get<int>();
    if (s.contains("out")) c.out_dir = s["out"].get<std::string>();
    if (s.contains("dump_matrices")) c.dump_matrices = s["dump_matrices"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
}

json to_json(const PipelineConfig& c) {
  return {{"preset", c.preset},
          {"runs", c.library.runs},
          {"pop_size", c.library.target_size},
          {"generations", c.library.generations},
          {"fertility_min", c.library.fertility_min},
          {"fertility_max", c.library.fertility_max},
          {"buffer", c.library.buffer},
          {"seed", c.library.master_seed},
          {"relative_cap", c.caps.relative_cap},
          {"total_cap", c.caps.total_cap},
          {"delta_bucket", c.analysis.delta_bucket},
          {"pair_sample", c.analysis.pair_sample},
          {"band_count", c.band_count},
          {"high_band", band_json(c.analysis.high_band)},
          {"low_band", band_json(c.analysis.low_band)},
          {"dump_matrices", c.dump_matrices}};
}

RunArtifacts build_run_artifacts(const Cohort& cohort, Pedigree pedigree, std::uint64_t run_seed,
                                 const NetworkCaps& caps) {
  RunArtifacts art;
  Rng trait_rng(derive_seed(run_seed, "traits"));
  art.traits = assign_traits(cohort.size(), trait_rng);
  art.relatedness = relatedness_matrix(cohort, pedigree);
  art.kin_network = build_primary_kin_network(art.relatedness);
  art.kin_contacts = shared_contacts(art.kin_network);
  Rng cousin_rng(derive_seed(run_seed, "cousins"));
  art.standard = build_standard_network(cohort, pedigree, art.traits, caps, cousin_rng);
  art.standard_contacts = shared_contacts(art.standard.adjacency);
  return art;
}

GenerateResult cmd_generate(const PipelineConfig& input) {
  PipelineConfig config = input;
  config.resolve();
  const auto start = std::chrono::steady_clock::now();
  const fs::path runs_dir = config.out_dir / "runs";
  ensure_dir(runs_dir);

  GenerateResult result;
  result.runs.resize(static_cast<std::size_t>(config.library.runs));
  parallel_for(result.runs.size(), config.workers, [&](std::size_t i) {
    const int run_id = static_cast<int>(i);
    const LibraryRun run = build_library_run(config.library, run_id);
    RunRecord& rec = result.runs[i];
    rec.run_id = run_id;
    rec.seed = run.seed;
    rec.history_seed = run.history.seed;
    rec.attempts = run.history.attempts;
    rec.kappa_target = run.kappa_target;
    rec.kappa_realized = run.kappa_realized;
    rec.n_final = run.history.final_size();
    rec.cohort_size = run.cohort.size();
    rec.generations = run.history.generations;

    const fs::path dir = runs_dir / run_dir_name(run_id);
    ensure_dir(dir);
    write_file(dir / "history.csv",
               [&](std::ostream& out) { write_agents_csv(out, run.history.agents); });
    write_file(dir / "cohort.csv",
               [&](std::ostream& out) { write_cohort_csv(out, run.cohort, run.history.agents); });
    write_json(dir / "run.json", {{"run_id", rec.run_id},
                                  {"kappa_target", rec.kappa_target},
                                  {"kappa_realized", rec.kappa_realized},
                                  {"seed", rec.seed},
                                  {"n_final", rec.n_final},
                                  {"generations", rec.generations}});
  });
  result.seconds = seconds_since(start);

  json runs = json::array();
  for (const RunRecord& r : result.runs) runs.push_back(record_json(r));
  json manifest = {{"tool_version", kToolVersion},
                   {"config", to_json(config)},
                   {"master_seed", config.library.master_seed},
                   {"runs", runs},
                   {"complete", true},
                   {"timing", {{"generate_seconds", result.seconds}}}};
  write_json(config.out_dir / "manifest.json", manifest);
  return result;
}

AnalyzeResult cmd_analyze(const PipelineConfig& input, const fs::path& library_dir) {
  PipelineConfig config = input;
  const auto start = std::chrono::steady_clock::now();
  const fs::path manifest_path = library_dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw ManifestMissing("no manifest.json in " + library_dir.string());
  }
  json manifest = read_json(manifest_path);
  if (!manifest.value("complete", false) || !manifest.contains("runs") ||
      !manifest.contains("config")) {
    throw ManifestMissing(manifest_path.string() + " is incomplete");
  }
  // Library parameters come from the manifest; analysis options from `input`.
  try {
    const json& lib = manifest["config"];
    config.library.runs = lib.at("runs").get<int>();
    config.library.target_size = lib.at("pop_size").get<int>();
    config.library.generations = lib.at("generations").get<int>();
    config.library.fertility_min = lib.at("fertility_min").get<double>();
    config.library.fertility_max = lib.at("fertility_max").get<double>();
    config.library.buffer = lib.at("buffer").get<double>();
    config.library.master_seed = lib.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw SchemaMismatch(manifest_path.string(), std::string("bad config block: ") + e.what());
  }
  config.resolve();

  std::vector<RunRecord> records;
  for (const json& j : manifest["runs"]) records.push_back(record_from_json(j, manifest_path.string()));
  if (records.size() != static_cast<std::size_t>(config.library.runs)) {
    throw SchemaMismatch(manifest_path.string(), "run list does not match configured run count");
  }

  AnalyzeResult result;
  result.summaries.resize(records.size());
  parallel_for(records.size(), config.workers, [&](std::size_t i) {
    const RunRecord& rec = records[i];
    const fs::path dir = library_dir / "runs" / run_dir_name(rec.run_id);
    const std::vector<Agent> pedigree = read_pedigree_csv(dir / "history.csv");
    const Cohort cohort = load_cohort(dir / "cohort.csv", pedigree, rec.generations);
    if (cohort.size() != rec.cohort_size) {
      throw SchemaMismatch((dir / "cohort.csv").string(), "cohort size differs from manifest");
    }
    const RunArtifacts art = build_run_artifacts(cohort, pedigree, rec.seed, config.caps);
    if (config.dump_matrices) dump_run(dir, cohort, art);

    RunInputs in;
    in.run_id = rec.run_id;
    in.kappa_target = rec.kappa_target;
    in.kappa_realized = rec.kappa_realized;
    in.seed = rec.seed;
    in.relatedness = &art.relatedness;
    in.kin_contacts = &art.kin_contacts;
    in.standard_contacts = &art.standard_contacts;
    in.traits = &art.traits;
    result.summaries[i] = summarize_run(in, config.analysis);
  });

  // Small libraries can leave bands empty. Those are skipped and listed in the
  // manifest instead of failing the whole analysis.
  json empty_bands = json::array();
  const auto occupied = [&](const FertilityBand& band) {
    for (const RunSummary& s : result.summaries) {
      if (band.contains(s.kappa_target)) return true;
    }
    empty_bands.push_back({band.lower, band.upper});
    return false;
  };
  std::vector<FertilityBand> bands;
  for (const FertilityBand& band : config.analysis.bands) {
    if (occupied(band)) bands.push_back(band);
  }
  if (!bands.empty()) {
    result.fig5 = relatedness_histogram(result.summaries, bands);
    result.fig7 = contacts_by_relatedness(result.summaries, bands);
  }
  result.fig6 = mean_relatedness_by_fertility(result.summaries);
  if (occupied(config.analysis.high_band)) {
    result.fig8_high = interaction_surface(result.summaries, config.analysis.high_band);
  }
  if (occupied(config.analysis.low_band)) {
    result.fig8_low = interaction_surface(result.summaries, config.analysis.low_band);
  }
  result.fig9 = predictive_power(result.summaries);
  write_figures(library_dir, result);
  result.seconds = seconds_since(start);

  json analysis_config = to_json(config);
  manifest["analysis"] = {{"config", analysis_config}, {"empty_bands", empty_bands}};
  manifest["timing"]["analyze_seconds"] = result.seconds;
  write_json(manifest_path, manifest);
  return result;
}

AnalyzeResult cmd_all(const PipelineConfig& config) {
  cmd_generate(config);
  return cmd_analyze(config, config.out_dir);
}

}  // namespace kinsim
