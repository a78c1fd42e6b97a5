#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "scriptmix/corpus.hpp"

namespace scriptmix {

// True for code points we treat as letters. Unknown ranges default to
// non-alphabetic, so emoji and symbols never make a token alphabetic.
bool is_alphabetic(char32_t cp);

// Script of a single code point; Neutral for non-alphabetic ones.
Script script_of(char32_t cp);

// Majority vote over the word's alphabetic code points. Latin wins ties it
// is involved in; remaining ties go to the lower Script enum value. A word
// with no alphabetic code point is Neutral.
Script classify_word_script(std::string_view word);

// Tokenizes on whitespace, strips edge punctuation, drops Neutral tokens and
// returns (#Latin tokens) / (#non-Neutral tokens). Empty optional when the
// text has no countable token.
std::optional<double> latin_proportion(std::string_view text);

struct ScriptMixSummary {
  Lang language = Lang::ENG;
  double median = 0;
  double lower_quartile = 0;
  double upper_quartile = 0;
  double lower_whisker = 0;
  double upper_whisker = 0;
  double any_latin = 0;  // fraction of documents with latin_proportion > 0
  std::size_t n = 0;     // documents with a defined proportion
};

struct ScriptMixReport {
  std::vector<ScriptMixSummary> summaries;  // in Lang enum order
  std::vector<Lang> skipped;                // languages with no defined document
};

ScriptMixReport script_switch_summary(const std::vector<LabeledExample>& examples);

// Quantile by linear interpolation over (n-1)*q positions (inclusive method).
// `values` need not be sorted; q in [0, 1].
double quantile_linear(std::vector<double> values, double q);

}  // namespace scriptmix
