#include "scriptmix/script.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "scriptmix/errors.hpp"
#include "scriptmix/text.hpp"

namespace scriptmix {

namespace {

struct Range {
  char32_t lo, hi;
};

// Common Latin-letter ranges (script property, pragmatic subset).
constexpr std::array<Range, 8> kLatinRanges = {{
    {0x0041, 0x005A}, {0x0061, 0x007A}, {0x00C0, 0x00FF},  // minus x00D7/x00F7 below
    {0x0100, 0x024F}, {0x1E00, 0x1EFF}, {0x2C60, 0x2C7F},
    {0xA720, 0xA7FF}, {0xAB30, 0xAB6F},
}};

// Alphabetic ranges for scripts outside the nine named classes. Anything not
// listed here or above is treated as non-alphabetic.
constexpr std::array<Range, 24> kOtherAlphabetic = {{
    {0x0370, 0x03FF},  // Greek
    {0x0400, 0x052F},  // Cyrillic (+ supplement)
    {0x0530, 0x058F},  // Armenian
    {0x0590, 0x05FF},  // Hebrew
    {0x0600, 0x06FF},  // Arabic
    {0x0750, 0x077F},  // Arabic supplement
    {0x0980, 0x09FF},  // Bengali
    {0x0A00, 0x0A7F},  // Gurmukhi
    {0x0B00, 0x0B7F},  // Oriya
    {0x0D80, 0x0DFF},  // Sinhala
    {0x0E00, 0x0E7F},  // Thai
    {0x0E80, 0x0EFF},  // Lao
    {0x0F00, 0x0FFF},  // Tibetan
    {0x1000, 0x109F},  // Myanmar
    {0x10A0, 0x10FF},  // Georgian
    {0x1100, 0x11FF},  // Hangul jamo
    {0x1200, 0x137F},  // Ethiopic
    {0x3040, 0x309F},  // Hiragana
    {0x30A0, 0x30FF},  // Katakana
    {0x3400, 0x4DBF},  // CJK ext A
    {0x4E00, 0x9FFF},  // CJK
    {0xAC00, 0xD7AF},  // Hangul syllables
    {0xF900, 0xFAFF},  // CJK compatibility
    {0x0780, 0x07BF},  // Thaana
}};

bool in_ranges(char32_t cp, const Range* ranges, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (cp >= ranges[i].lo && cp <= ranges[i].hi) return true;
  return false;
}

bool is_latin_letter(char32_t cp) {
  if (cp == 0x00D7 || cp == 0x00F7) return false;  // multiplication/division signs
  return in_ranges(cp, kLatinRanges.data(), kLatinRanges.size());
}

struct BrahmicBlock {
  Script script;
  char32_t base;
};

constexpr std::array<BrahmicBlock, 6> kBrahmicBlocks = {{
    {Script::Devanagari, 0x0900},
    {Script::Gujarati, 0x0A80},
    {Script::Tamil, 0x0B80},
    {Script::Telugu, 0x0C00},
    {Script::Kannada, 0x0C80},
    {Script::Malayalam, 0x0D00},
}};

// Within a Brahmic block: letters and combining vowel signs are alphabetic of
// that script; digits, dandas and fraction signs are not.
Script brahmic_script(char32_t cp, bool& alphabetic) {
  for (const auto& block : kBrahmicBlocks) {
    if (cp < block.base || cp > block.base + 0x7F) continue;
    const char32_t off = cp - block.base;
    if (off >= 0x66 && off <= 0x6F) {  // digits
      alphabetic = false;
      return Script::Neutral;
    }
    if (block.script == Script::Devanagari && (cp == 0x0964 || cp == 0x0965)) {  // dandas
      alphabetic = false;
      return Script::Neutral;
    }
    alphabetic = true;
    return block.script;
  }
  alphabetic = false;
  return Script::Neutral;
}

bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

}  // namespace

bool is_alphabetic(char32_t cp) {
  if (cp < 0x80) return (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z');
  if (is_latin_letter(cp)) return true;
  bool alpha = false;
  if (brahmic_script(cp, alpha) != Script::Neutral) return alpha;
  return in_ranges(cp, kOtherAlphabetic.data(), kOtherAlphabetic.size());
}

Script script_of(char32_t cp) {
  if (!is_alphabetic(cp)) return Script::Neutral;
  if (cp < 0x80 || is_latin_letter(cp)) return Script::Latin;
  bool alpha = false;
  const Script s = brahmic_script(cp, alpha);
  if (s != Script::Neutral) return s;
  return Script::Other;
}

Script classify_word_script(std::string_view word) {
  std::array<std::size_t, 9> votes{};
  bool any = false;
  for (char32_t cp : decode_utf8(word)) {
    const Script s = script_of(cp);
    if (s == Script::Neutral) continue;
    ++votes[static_cast<std::size_t>(s)];
    any = true;
  }
  if (!any) return Script::Neutral;

  std::size_t best = 0;
  for (std::size_t i = 1; i < votes.size(); ++i)
    if (votes[i] > votes[best]) best = i;
  // Latin wins any tie it participates in.
  const auto latin = static_cast<std::size_t>(Script::Latin);
  if (votes[latin] == votes[best]) best = latin;
  return static_cast<Script>(best);
}

std::optional<double> latin_proportion(std::string_view text) {
  std::size_t counted = 0, latin = 0;
  for (const std::string& raw : split_whitespace(text)) {
    auto cps = decode_utf8(raw);
    // Strip leading/trailing code points that are neither alphabetic nor digits.
    std::size_t b = 0, e = cps.size();
    while (b < e && !is_alphabetic(cps[b]) && !is_ascii_digit(cps[b])) ++b;
    while (e > b && !is_alphabetic(cps[e - 1]) && !is_ascii_digit(cps[e - 1])) --e;
    if (b >= e) continue;
    const Script s =
        classify_word_script(encode_utf8(std::vector<char32_t>(cps.begin() + b, cps.begin() + e)));
    if (s == Script::Neutral) continue;
    ++counted;
    if (s == Script::Latin) ++latin;
  }
  if (counted == 0) return std::nullopt;
  return static_cast<double>(latin) / static_cast<double>(counted);
}

double quantile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("quantile_linear: empty input");
  std::sort(values.begin(), values.end());
  if (q <= 0) return values.front();
  if (q >= 1) return values.back();
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

ScriptMixReport script_switch_summary(const std::vector<LabeledExample>& examples) {
  std::map<Lang, std::vector<double>> per_lang;
  std::map<Lang, bool> seen;
  for (const auto& ex : examples) {
    seen[ex.language] = true;
    if (auto p = latin_proportion(ex.text)) per_lang[ex.language].push_back(*p);
  }

  ScriptMixReport report;
  for (const auto& [lang, present] : seen) {
    auto it = per_lang.find(lang);
    if (it == per_lang.end() || it->second.empty()) {
      report.skipped.push_back(lang);
      continue;
    }
    const auto& props = it->second;
    ScriptMixSummary s;
    s.language = lang;
    s.n = props.size();
    s.median = quantile_linear(props, 0.5);
    s.lower_quartile = quantile_linear(props, 0.25);
    s.upper_quartile = quantile_linear(props, 0.75);
    s.lower_whisker = *std::min_element(props.begin(), props.end());
    s.upper_whisker = *std::max_element(props.begin(), props.end());
    std::size_t with_latin = 0;
    for (double p : props)
      if (p > 0) ++with_latin;
    s.any_latin = static_cast<double>(with_latin) / static_cast<double>(props.size());
    report.summaries.push_back(s);
  }
  return report;
}

}  // namespace scriptmix
