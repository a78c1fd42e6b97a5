#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scriptmix/corpus.hpp"

namespace scriptmix {

enum class Provenance { BASELINE, SYNTHETIC, ORGANIC };

std::string_view provenance_name(Provenance p);  // "baseline", "synthetic", "organic"
Provenance parse_provenance(std::string_view name);

struct AdaptationDoc {
  std::string text;
  std::string source;  // e.g. "abstract:guj", "translit:guj", "labelled:eng", "mined:tam"
  bool eval = false;
};

// A provenance-tagged document collection used to fit feature models.
struct AdaptationCorpus {
  Provenance provenance = Provenance::BASELINE;
  std::uint64_t seed = 0;
  double sample_fraction = 0;
  std::vector<AdaptationDoc> documents;

  std::size_t eval_count() const;
  std::size_t train_count() const { return documents.size() - eval_count(); }
};

// Ordered romanization rules for one script, loaded from a
// `source<TAB>replacement` file. Application is greedy longest-match.
class TranslitTable {
 public:
  static TranslitTable load(const std::filesystem::path& path);

  Script script() const { return script_; }
  const std::string& version() const { return version_; }
  std::size_t rule_count() const { return rule_count_; }

  // Greedy left-to-right longest-match application. Code points outside this
  // table's script pass through unchanged; in-script code points without a
  // rule are dropped so the output never contains source-script characters.
  std::string apply(std::string_view text) const;

 private:
  Script script_ = Script::Devanagari;
  std::string version_;
  std::size_t rule_count_ = 0;
  // first code point -> candidate rules, longest source first
  std::unordered_map<char32_t, std::vector<std::pair<std::u32string, std::string>>> rules_;
};

// The six script tables as one unit.
class Transliterator {
 public:
  static Transliterator load_dir(const std::filesystem::path& dir);

  bool has(Script script) const { return tables_.count(script) > 0; }
  const TranslitTable& table(Script script) const;  // throws ConfigError when unsupported
  std::string romanize(std::string_view text, Script script) const;
  std::map<Script, std::string> versions() const;

 private:
  std::map<Script, TranslitTable> tables_;
};

std::string transliterate(std::string_view text, const TranslitTable& table);

// Marks a seeded eval subset of floor(eval_fraction * n) documents.
void mark_partition(AdaptationCorpus& corpus, double eval_fraction, std::uint64_t seed);

// Builds the synthetic script-switched adaptation corpus: all abstracts, a
// seeded sample of floor(fraction * n) transliterated copies per non-Latin
// language, and every labelled text, followed by a seeded 95/5 partition.
AdaptationCorpus synthesize_augmented_corpus(
    const std::map<Lang, std::vector<std::string>>& abstracts,
    const std::vector<LabeledExample>& labelled, double sample_fraction, std::uint64_t seed,
    const Transliterator& translit);

// One document per line plus a JSON sidecar with provenance, seed, fraction,
// source-tag counts and the eval partition.
void save_corpus(const AdaptationCorpus& corpus, const std::filesystem::path& doc_file,
                 const std::filesystem::path& manifest_file);
AdaptationCorpus load_corpus(const std::filesystem::path& doc_file,
                             const std::filesystem::path& manifest_file);

}  // namespace scriptmix
