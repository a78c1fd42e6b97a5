// Regenerates the desk-scale fixture tree under data/fixtures: labelled
// datasets whose sizes and class balances mirror the shipped summary tables,
// abstracts per language, a raw document stream, and a ready-to-run config.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "../tests/support/synthlang.hpp"
#include "scriptmix/corpus.hpp"
#include "scriptmix/translit.hpp"

namespace fs = std::filesystem;
using namespace scriptmix;
using nlohmann::json;

namespace {

struct LangSpec {
  std::size_t n;
  double p_homo;
  double p_trans;
  double switch_frac;
};

const std::map<Lang, LangSpec> kSpecs = {
    {Lang::ENG, {396, 0.06, 0.003, 0.0}}, {Lang::ESP, {159, 0.22, 0.22, 0.0}},
    {Lang::GUJ, {986, 0.28, 0.25, 0.06}}, {Lang::HIN, {288, 0.02, 0.04, 0.55}},
    {Lang::KAN, {1222, 0.27, 0.28, 0.08}}, {Lang::MAL, {433, 0.16, 0.06, 0.35}},
    {Lang::MAR, {425, 0.16, 0.11, 0.25}}, {Lang::TAM, {333, 0.17, 0.06, 0.10}},
    {Lang::TCY, {73, 0.26, 0.0, 0.45}},   {Lang::TEL, {1099, 0.32, 0.30, 0.08}},
};

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(2);
  }
  for (const auto& line : lines) out << line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate the scriptmix fixture tree"};
  std::string out_dir = "data/fixtures";
  std::string tables_dir = "data/translit";
  std::uint64_t seed = 20240501;
  app.add_option("out", out_dir, "output directory");
  app.add_option("--tables", tables_dir, "transliteration table directory");
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  const Transliterator translit = Transliterator::load_dir(tables_dir);
  fs::create_directories(fs::path(out_dir) / "datasets");
  fs::create_directories(fs::path(out_dir) / "abstracts");

  json dataset_paths = json::object();
  json abstract_paths = json::object();
  std::vector<synth::SynthLang> langs;
  for (Lang lang : all_langs()) {
    const LangSpec& spec = kSpecs.at(lang);
    const synth::SynthLang sl = synth::make_lang(lang, seed);
    langs.push_back(sl);

    synth::DatasetSpec ds;
    ds.n = spec.n;
    ds.p_homo = spec.p_homo;
    ds.p_trans = spec.p_trans;
    ds.switch_frac = spec.switch_frac;
    const auto examples = synth::make_dataset(sl, ds, seed, translit);

    std::vector<std::string> lines = {"id\ttext\tlabel"};
    for (const auto& ex : examples)
      lines.push_back(ex.id + "\t" + ex.text + "\t" + std::string(label_name(ex.label)));
    const std::string code(lang_code(lang));
    write_lines(fs::path(out_dir) / "datasets" / (code + ".tsv"), lines);
    dataset_paths[code] = "datasets/" + code + ".tsv";

    write_lines(fs::path(out_dir) / "abstracts" / (code + ".txt"),
                synth::make_abstracts(sl, 150, seed));
    abstract_paths[code] = "abstracts/" + code + ".txt";
  }

  write_lines(fs::path(out_dir) / "stream.txt",
              synth::make_stream(langs, 1200, 0.5, 0.1, seed, translit));

  const json config = {
      {"seed", 7},
      {"datasets", dataset_paths},
      {"abstracts", abstract_paths},
      {"stream", "stream.txt"},
      {"translit_tables", "../translit"},
      {"output_dir", "out"},
      {"sample_fraction", 0.5},
      {"profile_k", 300},
      {"min_margin", 0.0},
      {"min_length", 20},
      {"vocab_cap", 3000},
      {"split", {0.8, 0.1, 0.1}},
      {"train",
       {{"epochs", 4},
        {"eval_every", 50},
        {"batch_size", 32},
        {"learning_rate", 0.01},
        {"weight_decay", 0.01}}},
  };
  std::ofstream cfg(fs::path(out_dir) / "config.json", std::ios::binary);
  cfg << config.dump(2) << "\n";

  std::cout << "fixtures written to " << out_dir << "\n";
  return 0;
}
