#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scriptmix/corpus.hpp"
#include "scriptmix/eval.hpp"
#include "scriptmix/langid.hpp"
#include "scriptmix/model.hpp"
#include "scriptmix/translit.hpp"

namespace scriptmix {

// Full experiment description. Loaded from a JSON config file; every CLI
// flag overrides the corresponding field. All randomness flows from `seed`
// through named substreams.
struct ExperimentConfig {
  std::map<Lang, std::filesystem::path> datasets;
  std::map<Lang, std::filesystem::path> abstracts;
  std::filesystem::path stream_path;
  std::filesystem::path translit_dir;
  std::filesystem::path output_dir = "out";

  std::vector<Lang> languages;
  std::vector<Provenance> variants = {Provenance::BASELINE, Provenance::SYNTHETIC,
                                      Provenance::ORGANIC};
  std::vector<Scope> scopes = {Scope::MONO, Scope::MULTI};

  double sample_fraction = 0.5;
  std::size_t profile_k = 300;
  double min_margin = 0.0;
  std::size_t min_length = 20;
  std::size_t max_docs_per_language = 0;  // 0 = unlimited
  std::size_t vocab_cap = 4096;
  SplitRatios ratios;
  TrainConfig train;
  std::uint64_t seed = 0;
};

// Reads the config file, resolving relative data paths against `data_dir`
// (field, else $SCRIPTMIX_DATA_DIR, else the config file's directory).
ExperimentConfig load_config(const std::filesystem::path& config_file);
void validate_config(const ExperimentConfig& config);

// Deterministic per-language splits shared by every stage.
std::map<Lang, DatasetSplit> load_splits(const ExperimentConfig& config);

// Pipeline stages. Each stage reads its predecessors' outputs from
// output_dir, so later stages can be re-run from cached earlier ones.
void stage_stats(const ExperimentConfig& config);
void stage_augment(const ExperimentConfig& config);
void stage_mine(const ExperimentConfig& config);
void stage_adapt(const ExperimentConfig& config);
void stage_train(const ExperimentConfig& config);
void stage_evaluate(const ExperimentConfig& config);
SelectionResult stage_select(const ExperimentConfig& config);

void run_stats(const ExperimentConfig& config);

// stats + augment + mine + adapt + train + evaluate + select + manifest.
SelectionResult run_experiment(const ExperimentConfig& config);

// One JSON record per input line: label, per-label probabilities, oov flag.
void run_predict(const std::filesystem::path& model_path,
                 const std::filesystem::path& input_path, std::ostream& out);

// FNV-1a 64-bit file hash, used by the manifest.
std::string hash_file(const std::filesystem::path& path);

}  // namespace scriptmix
