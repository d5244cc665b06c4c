// kinsim: generate population libraries, build kin and homophily networks,
// and write the figure tables.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kinsim/errors.hpp"
#include "kinsim/runner.hpp"

namespace {

struct Flags {
  std::optional<std::string> config_file;
  std::optional<std::string> preset;
  std::optional<int> runs, pop_size, generations, relative_cap, total_cap, workers;
  std::optional<double> fertility_min, fertility_max, delta_bucket;
  std::optional<std::size_t> pair_sample;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool dump_matrices = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", f.preset, "Named configuration")
      ->check(CLI::IsMember({"desk", "full"}));
  cmd->add_option("--runs", f.runs, "Number of population histories");
  cmd->add_option("--pop-size", f.pop_size, "Final cohort size");
  cmd->add_option("--generations", f.generations, "Generations per history");
  cmd->add_option("--fertility-min", f.fertility_min, "Lowest fertility target");
  cmd->add_option("--fertility-max", f.fertility_max, "Highest fertility target");
  cmd->add_option("--relative-cap", f.relative_cap, "Sibling plus cousin edges per member");
  cmd->add_option("--total-cap", f.total_cap, "Total edges per member");
  cmd->add_option("--delta-bucket", f.delta_bucket, "Trait-distance bucket width (degrees)");
  cmd->add_option("--pair-sample", f.pair_sample, "Pairs per regression (0 = all)");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--workers", f.workers, "Worker threads");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_flag("--dump-matrices", f.dump_matrices, "Write per-run matrix and network dumps");
}

kinsim::PipelineConfig resolve_config(const Flags& f) {
  nlohmann::json file_settings = nlohmann::json::object();
  if (f.config_file) {
    std::ifstream in(*f.config_file);
    try {
      file_settings = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw kinsim::ConfigError(*f.config_file + ": " + e.what());
    }
    if (!file_settings.is_object()) throw kinsim::ConfigError(*f.config_file + ": expected object");
  }
  std::string preset = "full";
  if (file_settings.contains("preset")) preset = file_settings["preset"].get<std::string>();
  if (f.preset) preset = *f.preset;

  kinsim::PipelineConfig config = kinsim::preset_config(preset);
  kinsim::apply_settings(config, file_settings);

  nlohmann::json cli = nlohmann::json::object();
  if (f.runs) cli["runs"] = *f.runs;
  if (f.pop_size) cli["pop_size"] = *f.pop_size;
  if (f.generations) cli["generations"] = *f.generations;
  if (f.fertility_min) cli["fertility_min"] = *f.fertility_min;
  if (f.fertility_max) cli["fertility_max"] = *f.fertility_max;
  if (f.relative_cap) cli["relative_cap"] = *f.relative_cap;
  if (f.total_cap) cli["total_cap"] = *f.total_cap;
  if (f.delta_bucket) cli["delta_bucket"] = *f.delta_bucket;
  if (f.pair_sample) cli["pair_sample"] = *f.pair_sample;
  if (f.seed) cli["seed"] = *f.seed;
  if (f.workers) cli["workers"] = *f.workers;
  if (f.out) cli["out"] = *f.out;
  if (f.dump_matrices) cli["dump_matrices"] = true;
  kinsim::apply_settings(config, cli);
  config.resolve();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinsim: kinship and homophily network simulator"};
  app.require_subcommand(1);
  Flags flags;
  auto* generate = app.add_subcommand("generate", "Simulate the population library");
  auto* analyze = app.add_subcommand("analyze", "Build networks and write figure tables");
  auto* all = app.add_subcommand("all", "generate followed by analyze");
  for (auto* cmd : {generate, analyze, all}) add_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  kinsim::PipelineConfig config;
  try {
    config = resolve_config(flags);
  } catch (const kinsim::ConfigError& e) {
    std::cerr << "kinsim: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "kinsim: bad configuration: " << e.what() << '\n';
    return 1;
  }

  try {
    if (generate->parsed()) {
      const auto r = kinsim::cmd_generate(config);
      std::cout << "generated " << r.runs.size() << " runs in " << config.out_dir.string() << " ("
                << r.seconds << " s)\n";
    } else {
      const auto r = analyze->parsed() ? kinsim::cmd_analyze(config, config.out_dir)
                                       : kinsim::cmd_all(config);
      std::cout << "analyzed " << r.summaries.size() << " runs, figure tables in "
                << config.out_dir.string() << " (" << r.seconds << " s)\n";
    }
  } catch (const kinsim::Error& e) {
    std::cerr << "kinsim: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kinsim: unexpected failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
