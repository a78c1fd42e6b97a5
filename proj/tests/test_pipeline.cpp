#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scriptmix/errors.hpp"
#include "scriptmix/pipeline.hpp"
#include "synthlang.hpp"

using namespace scriptmix;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRepoDir = SCRIPTMIX_REPO_DIR;

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  for (const auto& line : lines) out << line << "\n";
}

// Writes a small three-language fixture tree and returns a ready config.
ExperimentConfig tiny_fixture(const fs::path& dir, std::uint64_t seed) {
  const Transliterator translit = Transliterator::load_dir(kRepoDir / "data" / "translit");
  fs::create_directories(dir / "datasets");
  fs::create_directories(dir / "abstracts");

  ExperimentConfig config;
  config.seed = seed;
  config.translit_dir = kRepoDir / "data" / "translit";
  config.output_dir = dir / "out";
  config.vocab_cap = 1200;
  config.profile_k = 200;
  config.train.epochs = 2;
  config.train.batch_size = 16;
  config.train.eval_every = 10;

  std::vector<synth::SynthLang> langs;
  for (Lang lang : {Lang::ENG, Lang::GUJ, Lang::TCY}) {
    const auto sl = synth::make_lang(lang, seed);
    langs.push_back(sl);

    synth::DatasetSpec spec;
    spec.n = 120;
    spec.p_homo = 0.25;
    spec.p_trans = is_binary_condition(lang) ? 0.0 : 0.15;
    spec.switch_frac = native_script(lang) == Script::Latin ? 0.0 : 0.4;
    const auto examples = synth::make_dataset(sl, spec, seed, translit);

    std::vector<std::string> lines = {"id\ttext\tlabel"};
    for (const auto& ex : examples)
      lines.push_back(ex.id + "\t" + ex.text + "\t" + std::string(label_name(ex.label)));
    const std::string code(lang_code(lang));
    write_lines(dir / "datasets" / (code + ".tsv"), lines);
    write_lines(dir / "abstracts" / (code + ".txt"), synth::make_abstracts(sl, 50, seed));

    config.datasets[lang] = dir / "datasets" / (code + ".tsv");
    config.abstracts[lang] = dir / "abstracts" / (code + ".txt");
    config.languages.push_back(lang);
  }
  write_lines(dir / "stream.txt", synth::make_stream(langs, 250, 0.5, 0.1, seed, translit));
  config.stream_path = dir / "stream.txt";
  return config;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("load_config resolves paths and validates fields") {
  const auto dir = fresh_dir("scriptmix_cfg");
  fs::create_directories(dir / "data");
  {
    std::ofstream out(dir / "config.json");
    out << R"({
      "seed": 3,
      "data_dir": "data",
      "datasets": {"eng": "eng.tsv"},
      "abstracts": {"eng": "eng.txt"},
      "stream": "stream.txt",
      "output_dir": "out",
      "split": [0.8, 0.1, 0.1],
      "train": {"epochs": 2}
    })";
  }
  const auto config = load_config(dir / "config.json");
  CHECK(config.seed == 3);
  CHECK(config.datasets.at(Lang::ENG) == dir / "data" / "eng.tsv");
  CHECK(config.abstracts.at(Lang::ENG) == dir / "data" / "eng.txt");
  CHECK(config.translit_dir == dir / "data" / "translit");
  CHECK(config.languages == std::vector<Lang>{Lang::ENG});
  CHECK(config.train.epochs == 2);
  CHECK(config.train.batch_size == 32);  // untouched default

  // a config addressed by a relative path resolves against its own directory
  {
    const auto cwd = fs::current_path();
    fs::current_path(dir);
    const auto relative = load_config("config.json");
    fs::current_path(cwd);
    CHECK(relative.datasets.at(Lang::ENG) == fs::path("data") / "eng.tsv");
  }

  // SCRIPTMIX_DATA_DIR provides the default data directory
  {
    std::ofstream out(dir / "nodatadir.json");
    out << R"({"seed": 9, "datasets": {"eng": "eng.tsv"}})";
  }
  setenv("SCRIPTMIX_DATA_DIR", "/srv/shared", 1);
  const auto env_config = load_config(dir / "nodatadir.json");
  unsetenv("SCRIPTMIX_DATA_DIR");
  CHECK(env_config.datasets.at(Lang::ENG) == fs::path("/srv/shared") / "eng.tsv");

  {
    std::ofstream out(dir / "noseed.json");
    out << R"({"datasets": {"eng": "eng.tsv"}})";
  }
  CHECK_THROWS_WITH_AS(load_config(dir / "noseed.json"), doctest::Contains("seed"), ConfigError);

  {
    std::ofstream out(dir / "badlang.json");
    out << R"({"seed": 1, "datasets": {"zzz": "x.tsv"}})";
  }
  CHECK_THROWS_AS(load_config(dir / "badlang.json"), ConfigError);

  {
    std::ofstream out(dir / "badsplit.json");
    out << R"({"seed": 1, "split": [0.9, 0.1]})";
  }
  CHECK_THROWS_AS(load_config(dir / "badsplit.json"), ConfigError);

  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("run_stats emits the three report families") {
  const auto dir = fresh_dir("scriptmix_stats");
  auto config = tiny_fixture(dir, 31);
  run_stats(config);
  for (const char* name :
       {"corpus_summary.txt", "corpus_summary.jsonl", "class_distribution.txt",
        "class_distribution.jsonl", "script_mix.txt", "script_mix.jsonl"})
    CHECK(fs::exists(config.output_dir / "reports" / name));

  // missing dataset path names the language
  config.datasets.erase(Lang::GUJ);
  CHECK_THROWS_WITH_AS(run_stats(config), doctest::Contains("guj"), ConfigError);
}

TEST_CASE("full experiment: grid shape, determinism, stage isolation") {
  const auto dir_a = fresh_dir("scriptmix_run_a");
  auto config_a = tiny_fixture(dir_a, 13);
  const auto result_a = run_experiment(config_a);

  const json grid = json::parse(slurp(config_a.output_dir / "reports" / "grid.json"));
  CHECK(grid.at("cells").size() == 3 * 2 * 3);  // variants x scopes x languages
  CHECK(fs::exists(config_a.output_dir / "manifest"));
  CHECK(fs::exists(config_a.output_dir / "reports" / "selection.json"));
  CHECK(fs::exists(config_a.output_dir / "reports" / "grid.txt"));

  SUBCASE("identical config reproduces byte-identical reports and manifest") {
    const auto dir_b = fresh_dir("scriptmix_run_b");
    auto config_b = tiny_fixture(dir_b, 13);
    run_experiment(config_b);
    for (const char* rel :
         {"manifest", "reports/grid.json", "reports/selection.json", "reports/grid.txt",
          "reports/corpus_summary.txt", "reports/class_distribution.jsonl",
          "reports/script_mix.jsonl"})
      CHECK(slurp(config_a.output_dir / rel) == slurp(config_b.output_dir / rel));
  }

  SUBCASE("later stages re-run from cached outputs reproduce the reports") {
    const std::string grid_before = slurp(config_a.output_dir / "reports" / "grid.json");
    const std::string selection_before = slurp(config_a.output_dir / "reports" / "selection.json");
    fs::remove(config_a.output_dir / "reports" / "grid.json");
    fs::remove(config_a.output_dir / "reports" / "selection.json");
    stage_evaluate(config_a);
    const auto result2 = stage_select(config_a);
    CHECK(slurp(config_a.output_dir / "reports" / "grid.json") == grid_before);
    CHECK(slurp(config_a.output_dir / "reports" / "selection.json") == selection_before);
    CHECK(result2.nominated == result_a.nominated);
  }

  SUBCASE("restricting variants to baseline trivially nominates baseline") {
    const auto dir_c = fresh_dir("scriptmix_run_c");
    auto config_c = tiny_fixture(dir_c, 13);
    config_c.variants = {Provenance::BASELINE};
    const auto result_c = run_experiment(config_c);
    CHECK(result_c.nominated.variant == Provenance::BASELINE);
    const json grid_c = json::parse(slurp(config_c.output_dir / "reports" / "grid.json"));
    CHECK(grid_c.at("cells").size() == 1 * 2 * 3);
  }
}

TEST_CASE("failed stages abort with a stage-named error and clean up") {
  const auto dir = fresh_dir("scriptmix_fail");
  auto config = tiny_fixture(dir, 5);
  config.stream_path = dir / "does_not_exist.txt";
  CHECK_THROWS_WITH_AS(stage_mine(config), doctest::Contains("stage mine"), DataError);
  CHECK(!fs::exists(config.output_dir / "corpora" / "organic.txt"));

  // adapt without corpora in the cache fails with the stage name
  const auto dir2 = fresh_dir("scriptmix_fail2");
  auto config2 = tiny_fixture(dir2, 5);
  CHECK_THROWS_WITH_AS(stage_adapt(config2), doctest::Contains("stage adapt"), DataError);
}

namespace {

int cli_exit(const std::string& args) {
  const std::string command =
      std::string(SCRIPTMIX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli exit codes distinguish config, data and training errors") {
  const auto dir = fresh_dir("scriptmix_exit");
  const auto config = tiny_fixture(dir, 41);
  // tiny_fixture builds the config in memory; the CLI needs it on disk
  {
    std::ofstream out(dir / "cli.json");
    nlohmann::json datasets, abstracts;
    for (const auto& [lang, path] : config.datasets)
      datasets[std::string(lang_code(lang))] = path.string();
    for (const auto& [lang, path] : config.abstracts)
      abstracts[std::string(lang_code(lang))] = path.string();
    out << nlohmann::json{{"seed", 41},
                          {"datasets", datasets},
                          {"abstracts", abstracts},
                          {"stream", config.stream_path.string()},
                          {"translit_tables", config.translit_dir.string()},
                          {"vocab_cap", 800},
                          {"train", {{"epochs", 1}, {"eval_every", 10}}}}
               .dump();
  }
  const std::string base = "-c " + (dir / "cli.json").string() + " -o " + (dir / "out").string();

  CHECK(cli_exit("stats " + base) == 0);
  CHECK(cli_exit("stats -c " + (dir / "nope.json").string()) == 1);          // config error
  CHECK(cli_exit("stats " + base + " --languages tel") == 1);                // no dataset path
  CHECK(cli_exit("predict -m " + (dir / "no_model.json").string() + " -i " +
                 (dir / "cli.json").string()) == 2);                         // data error
  CHECK(cli_exit("run " + base + " --variants baseline --epochs 0") == 3);   // training error
}

TEST_CASE("run_predict streams one record per line and round-trips the model") {
  const auto dir = fresh_dir("scriptmix_predict");
  auto config = tiny_fixture(dir, 23);
  config.variants = {Provenance::BASELINE};
  config.scopes = {Scope::MONO};
  run_experiment(config);

  const fs::path model_path = config.output_dir / "models" / "clf_baseline_mono_eng.json";
  REQUIRE(fs::exists(model_path));
  const auto model = load_classifier(model_path);

  SUBCASE("empty input produces empty output") {
    write_lines(dir / "empty.txt", {});
    std::ostringstream out;
    run_predict(model_path, dir / "empty.txt", out);
    CHECK(out.str().empty());
  }

  SUBCASE("predictions match the in-memory model and flag oov lines") {
    const std::vector<std::string> inputs = {"batada kamino weso", "@@@ 999", "gando helota"};
    write_lines(dir / "inputs.txt", inputs);
    std::ostringstream out;
    run_predict(model_path, dir / "inputs.txt", out);

    std::istringstream lines(out.str());
    std::string line;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
      const json rec = json::parse(line);
      const auto expected = predict(model, inputs[i]);
      CHECK(rec.at("label").get<std::string>() == std::string(label_name(expected.label)));
      CHECK(rec.at("oov").get<bool>() == expected.oov);
      for (std::size_t l = 0; l < model.labels.size(); ++l)
        CHECK(rec.at("probabilities").at(std::string(label_name(model.labels[l]))).get<double>() ==
              expected.probabilities[static_cast<Eigen::Index>(l)]);
      ++i;
    }
    CHECK(i == inputs.size());
    // the all-symbols line featurizes to nothing
    std::istringstream reread(out.str());
    std::getline(reread, line);
    std::getline(reread, line);
    CHECK(json::parse(line).at("oov").get<bool>());
  }

  SUBCASE("corrupt model files give a versioned-format error") {
    write_lines(dir / "bad_model.json", {"{\"format\": \"bogus/9\"}"});
    std::ostringstream out;
    CHECK_THROWS_AS(run_predict(dir / "bad_model.json", dir / "inputs.txt", out), DataError);
  }
}
