#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>

#include "json.hpp"
#include "kinsim/errors.hpp"
#include "kinsim/runner.hpp"

using namespace kinsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p =
      fs::temp_directory_path() / ("kinsim_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json manifest_without_timing(const fs::path& dir) {
  nlohmann::json m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  m.erase("timing");
  m["config"].erase("out");
  return m;
}

// Relative path -> contents for every file except the manifest.
std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
    out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

std::map<std::string, std::string> figures(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const char* f : kFigureFiles) out[f] = slurp(dir / f);
  return out;
}

PipelineConfig small_config(const fs::path& out, int runs = 2) {
  PipelineConfig c = preset_config("desk");
  c.library.runs = runs;
  c.library.target_size = 300;
  c.library.master_seed = 7;
  c.out_dir = out;
  c.resolve();
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KINSIM_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("presets and settings") {
  const PipelineConfig full = preset_config("full");
  CHECK(full.library.runs == 400);
  CHECK(full.library.target_size == 2000);
  CHECK(full.analysis.pair_sample == 0);
  const PipelineConfig desk = preset_config("desk");
  CHECK(desk.library.runs == 60);
  CHECK(desk.library.target_size == 500);
  CHECK(desk.analysis.pair_sample == 200000);
  CHECK_THROWS_AS(preset_config("huge"), ConfigError);

  PipelineConfig c = preset_config("desk");
  apply_settings(c, {{"runs", 5}, {"relative_cap", 40}, {"seed", 3}, {"delta_bucket", 15.0}});
  c.resolve();
  CHECK(c.library.runs == 5);
  CHECK(c.caps.relative_cap == 40);
  CHECK(c.library.master_seed == 3);
  CHECK(c.analysis.delta_bucket_count() == 12);
  CHECK_THROWS_AS(apply_settings(c, {{"bogus", 1}}), ConfigError);

  PipelineConfig bad = preset_config("desk");
  apply_settings(bad, {{"workers", 0}});
  CHECK_THROWS_AS(bad.resolve(), ConfigError);
  PipelineConfig inverted = preset_config("desk");
  apply_settings(inverted, {{"fertility_min", 5.0}, {"fertility_max", 2.0}});
  CHECK_THROWS_AS(inverted.resolve(), ConfigError);

  // The echoed config reproduces itself.
  PipelineConfig echoed = preset_config(c.preset);
  apply_settings(echoed, to_json(c));
  echoed.resolve();
  CHECK(to_json(echoed) == to_json(c));
}

TEST_CASE("generate is deterministic and creates its output directory") {
  const fs::path a = scratch("gen_a") / "nested", b = scratch("gen_b");
  const GenerateResult ra = cmd_generate(small_config(a));
  cmd_generate(small_config(b));
  REQUIRE(fs::exists(a / "manifest.json"));
  CHECK(ra.runs.size() == 2);
  CHECK(fs::exists(a / "runs" / "run_0000" / "history.csv"));
  CHECK(fs::exists(a / "runs" / "run_0001" / "cohort.csv"));
  CHECK(tree(a) == tree(b));
  CHECK(manifest_without_timing(a) == manifest_without_timing(b));

  const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(m["tool_version"] == kToolVersion);
  CHECK(m["complete"] == true);
  CHECK(m["master_seed"] == 7);
  CHECK(m["runs"].size() == 2);
  CHECK(m["timing"].contains("generate_seconds"));
}

TEST_CASE("unwritable output is an I/O error") {
  const fs::path base = scratch("blocked");
  fs::create_directories(base);
  std::ofstream(base / "file") << "x";
  CHECK_THROWS_AS(cmd_generate(small_config(base / "file" / "out")), IoError);
}

TEST_CASE("analyze") {
  const fs::path dir = scratch("analyze");
  const PipelineConfig config = small_config(dir, 3);
  cmd_generate(config);

  SUBCASE("repeat runs give identical tables") {
    const AnalyzeResult r = cmd_analyze(config, dir);
    CHECK(r.summaries.size() == 3);
    const auto first = figures(dir);
    cmd_analyze(config, dir);
    CHECK(figures(dir) == first);
    for (const auto& [name, text] : first) CHECK_MESSAGE(text.find('\n') != std::string::npos, name);
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["timing"].contains("analyze_seconds"));
  }
  SUBCASE("truncated history is reported with its file name") {
    const fs::path victim = dir / "runs" / "run_0001" / "history.csv";
    const std::string text = slurp(victim);
    std::ofstream(victim, std::ios::trunc) << text.substr(0, text.size() / 2);
    try {
      cmd_analyze(config, dir);
      FAIL("expected SchemaMismatch");
    } catch (const SchemaMismatch& e) {
      CHECK(e.file().find("run_0001") != std::string::npos);
      CHECK(e.file().find("history.csv") != std::string::npos);
    }
  }
  SUBCASE("missing sentinel is reported") {
    const fs::path victim = dir / "runs" / "run_0000" / "cohort.csv";
    std::string text = slurp(victim);
    text = text.substr(0, text.rfind("#end"));
    std::ofstream(victim, std::ios::trunc) << text;
    CHECK_THROWS_AS(cmd_analyze(config, dir), SchemaMismatch);
  }
  SUBCASE("missing manifest") {
    fs::remove(dir / "manifest.json");
    CHECK_THROWS_AS(cmd_analyze(config, dir), ManifestMissing);
  }
}

TEST_CASE("all equals generate plus analyze and ignores worker count") {
  const fs::path split = scratch("split"), one = scratch("all1"), four = scratch("all4");
  PipelineConfig c = small_config(split, 4);
  cmd_generate(c);
  cmd_analyze(c, split);

  c.out_dir = one;
  cmd_all(c);
  c.out_dir = four;
  c.workers = 4;
  cmd_all(c);

  CHECK(figures(split) == figures(one));
  CHECK(figures(one) == figures(four));
  CHECK(tree(one) == tree(four));
}

TEST_CASE("matrix dumps are opt-in") {
  const fs::path plain = scratch("nodump"), dumped = scratch("dump");
  PipelineConfig c = small_config(plain, 1);
  cmd_all(c);
  CHECK_FALSE(fs::exists(plain / "runs" / "run_0000" / "relatedness.csv"));
  c.out_dir = dumped;
  c.dump_matrices = true;
  cmd_all(c);
  for (const char* f : {"relatedness.csv", "kin_adjacency.csv", "kin_contacts.csv",
                        "network_edges.csv", "network_nodes.csv"}) {
    CHECK_MESSAGE(fs::exists(dumped / "runs" / "run_0000" / f), f);
  }
  CHECK(figures(plain) == figures(dumped));
}

TEST_CASE("desk preset produces every table") {
  const fs::path dir = scratch("desk");
  PipelineConfig c = preset_config("desk");
  c.library.master_seed = 7;
  c.out_dir = dir;
  c.resolve();
  const AnalyzeResult r = cmd_all(c);
  CHECK(r.summaries.size() == 60);
  CHECK(r.fig5.size() == 5 * 17);
  CHECK(r.fig6.size() == 60);
  CHECK_FALSE(r.fig7.empty());
  CHECK(r.fig8_high.size() == 18 * 17);
  CHECK(r.fig8_low.size() == 18 * 17);
  CHECK(r.fig9.size() == 60);
  for (const char* f : kFigureFiles) CHECK_MESSAGE(fs::file_size(dir / f) > 100, f);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  const std::string out = " --out " + dir.string();
  CHECK(run_cli("generate --preset desk --runs 2 --pop-size 200 --seed 7" + out) == 0);
  CHECK(run_cli("analyze --preset desk --runs 2 --pop-size 200" + out) == 0);
  CHECK(fs::exists(dir / "fig9.csv"));

  CHECK(run_cli("") == 1);
  CHECK(run_cli("generate --runs banana" + out) == 1);
  CHECK(run_cli("generate --preset huge" + out) == 1);
  CHECK(run_cli("generate --runs 0" + out) == 1);

  const fs::path settings = scratch("cli_cfg") / "c.json";
  fs::create_directories(settings.parent_path());
  std::ofstream(settings) << R"({"preset": "desk", "runs": 1, "pop_size": 150, "seed": 3})";
  CHECK(run_cli("all --config " + settings.string() + " --out " + (dir / "cfg").string()) == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "cfg" / "manifest.json"));
  CHECK(m["runs"].size() == 1);
  CHECK(m["master_seed"] == 3);

  CHECK(run_cli("analyze --out " + (dir / "nothing").string()) == 2);
  CHECK(run_cli("generate --runs 1 --fertility-min 0.2 --fertility-max 0.3" + out + "_fail") == 2);
}

TEST_CASE("cleanup") {
  fs::remove_all(fs::temp_directory_path() / ("kinsim_test_" + std::to_string(::getpid())));
}
