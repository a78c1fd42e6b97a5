#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scriptmix {

// The ten language conditions.
enum class Lang { ENG, ESP, GUJ, HIN, KAN, MAL, MAR, TAM, TCY, TEL };

enum class LangFamily { IndoEuropean, Dravidian };

// Word-level script classes. Neutral is reserved for tokens with no
// alphabetic code points (digits, punctuation, emoji).
enum class Script {
  Latin,
  Devanagari,
  Gujarati,
  Kannada,
  Malayalam,
  Tamil,
  Telugu,
  Other,
  Neutral,
};

enum class Label { NONE, HOMO, TRANS };

const std::array<Lang, 10>& all_langs();
std::string_view lang_code(Lang lang);          // "eng", "esp", ...
Lang parse_lang(std::string_view code);         // throws ConfigError on unknown code
LangFamily lang_family(Lang lang);
Script native_script(Lang lang);                // Tulu is written in Kannada script
bool is_binary_condition(Lang lang);            // TCY has no TRANS class
std::vector<Label> label_set(Lang lang);

std::string_view label_name(Label label);       // "none", "homo", "trans"
std::string_view script_name(Script script);
Script parse_script(std::string_view name);

// Maps a raw label string onto a Label via the alias table
// ("Homophobic", "Transphobic", "None-of-the-above", ...), case-insensitive.
// Throws DataError on unknown strings.
Label parse_label(std::string_view raw);

struct LabeledExample {
  std::string id;
  std::string text;
  Lang language = Lang::ENG;
  Label label = Label::NONE;
};

// Reads a tab-separated dataset with header `id<TAB>text<TAB>label` (the id
// column is optional). Rows keep file order; synthetic ids `<lang>-<row>` are
// assigned when the file has no id column.
std::vector<LabeledExample> load_dataset(const std::filesystem::path& path, Lang lang);

// Label -> proportion, summing to 1. Labels absent from the collection map
// to 0. Throws DataError on an empty collection.
std::map<Label, double> class_distribution(const std::vector<LabeledExample>& examples);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
  std::uint64_t seed = 0;
  SplitRatios ratios;
};

// Seeded uniform shuffle followed by contiguous slicing. Part sizes are
// floor-allocated with the remainder going to train.
DatasetSplit resample_splits(const std::vector<LabeledExample>& examples, SplitRatios ratios,
                             std::uint64_t seed);

struct LanguageCount {
  Lang language;
  std::size_t total = 0;
  std::map<Label, std::size_t> by_label;
};

// Per-language observation counts, sorted descending by total; ties broken
// by language code.
std::vector<LanguageCount> corpus_summary(
    const std::map<Lang, std::vector<LabeledExample>>& datasets);

}  // namespace scriptmix
