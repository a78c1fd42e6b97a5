#include "scriptmix/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "scriptmix/errors.hpp"
#include "scriptmix/rng.hpp"
#include "scriptmix/text.hpp"

namespace scriptmix {

namespace {

struct LangInfo {
  Lang lang;
  std::string_view code;
  LangFamily family;
  Script script;
};

constexpr std::array<LangInfo, 10> kLangs = {{
    {Lang::ENG, "eng", LangFamily::IndoEuropean, Script::Latin},
    {Lang::ESP, "esp", LangFamily::IndoEuropean, Script::Latin},
    {Lang::GUJ, "guj", LangFamily::IndoEuropean, Script::Gujarati},
    {Lang::HIN, "hin", LangFamily::IndoEuropean, Script::Devanagari},
    {Lang::KAN, "kan", LangFamily::Dravidian, Script::Kannada},
    {Lang::MAL, "mal", LangFamily::Dravidian, Script::Malayalam},
    {Lang::MAR, "mar", LangFamily::IndoEuropean, Script::Devanagari},
    {Lang::TAM, "tam", LangFamily::Dravidian, Script::Tamil},
    {Lang::TCY, "tcy", LangFamily::Dravidian, Script::Kannada},
    {Lang::TEL, "tel", LangFamily::Dravidian, Script::Telugu},
}};

const LangInfo& info(Lang lang) { return kLangs[static_cast<std::size_t>(lang)]; }

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 32;
  return out;
}

}  // namespace

const std::array<Lang, 10>& all_langs() {
  static const std::array<Lang, 10> langs = {Lang::ENG, Lang::ESP, Lang::GUJ, Lang::HIN,
                                             Lang::KAN, Lang::MAL, Lang::MAR, Lang::TAM,
                                             Lang::TCY, Lang::TEL};
  return langs;
}

std::string_view lang_code(Lang lang) { return info(lang).code; }

Lang parse_lang(std::string_view code) {
  const std::string lowered = lower_ascii(code);
  for (const auto& li : kLangs)
    if (li.code == lowered) return li.lang;
  throw ConfigError("unknown language code: " + std::string(code));
}

LangFamily lang_family(Lang lang) { return info(lang).family; }

Script native_script(Lang lang) { return info(lang).script; }

bool is_binary_condition(Lang lang) { return lang == Lang::TCY; }

std::vector<Label> label_set(Lang lang) {
  if (is_binary_condition(lang)) return {Label::NONE, Label::HOMO};
  return {Label::NONE, Label::HOMO, Label::TRANS};
}

std::string_view label_name(Label label) {
  switch (label) {
    case Label::NONE: return "none";
    case Label::HOMO: return "homo";
    case Label::TRANS: return "trans";
  }
  return "?";
}

std::string_view script_name(Script script) {
  switch (script) {
    case Script::Latin: return "latin";
    case Script::Devanagari: return "devanagari";
    case Script::Gujarati: return "gujarati";
    case Script::Kannada: return "kannada";
    case Script::Malayalam: return "malayalam";
    case Script::Tamil: return "tamil";
    case Script::Telugu: return "telugu";
    case Script::Other: return "other";
    case Script::Neutral: return "neutral";
  }
  return "?";
}

Script parse_script(std::string_view name) {
  const std::string lowered = lower_ascii(name);
  for (Script s : {Script::Latin, Script::Devanagari, Script::Gujarati, Script::Kannada,
                   Script::Malayalam, Script::Tamil, Script::Telugu, Script::Other,
                   Script::Neutral})
    if (script_name(s) == lowered) return s;
  throw ConfigError("unknown script name: " + std::string(name));
}

Label parse_label(std::string_view raw) {
  const std::string s = lower_ascii(trim(raw));
  if (s == "homo" || s == "homophobic" || s == "homophobia") return Label::HOMO;
  if (s == "trans" || s == "transphobic" || s == "transphobia") return Label::TRANS;
  if (s == "none" || s == "none-of-the-above" || s == "non-anti-lgbt+ content" ||
      s == "non-anti-lgbtq+ content" || s == "not-homophobic" || s == "non-anti-lgbt+content")
    return Label::NONE;
  throw DataError("unknown label string: \"" + std::string(raw) + "\"");
}

std::vector<LabeledExample> load_dataset(const std::filesystem::path& path, Lang lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty dataset file: " + path.string());
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
    line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) header.push_back(lower_ascii(trim(col)));
  }
  int id_col = -1, text_col = -1, label_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "id") id_col = static_cast<int>(i);
    else if (header[i] == "text") text_col = static_cast<int>(i);
    else if (header[i] == "label") label_col = static_cast<int>(i);
  }
  if (text_col < 0 || label_col < 0)
    throw DataError("dataset header must name `text` and `label` columns: " + path.string());

  std::vector<LabeledExample> examples;
  std::size_t row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() != header.size())
      throw DataError("malformed row " + std::to_string(row) + " in " + path.string() +
                      ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));

    LabeledExample ex;
    ex.language = lang;
    ex.text = trim(fields[static_cast<std::size_t>(text_col)]);
    if (ex.text.empty())
      throw DataError("malformed row " + std::to_string(row) + " in " + path.string() +
                      ": empty text");
    try {
      ex.label = parse_label(fields[static_cast<std::size_t>(label_col)]);
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(row) + " in " + path.string() + ": " + e.what());
    }
    if (ex.label == Label::TRANS && is_binary_condition(lang))
      throw DataError("row " + std::to_string(row) + " in " + path.string() +
                      ": label not permitted for binary condition " + std::string(lang_code(lang)));
    ex.id = id_col >= 0 ? trim(fields[static_cast<std::size_t>(id_col)])
                        : std::string(lang_code(lang)) + "-" + std::to_string(row - 2);
    examples.push_back(std::move(ex));
  }
  return examples;
}

std::map<Label, double> class_distribution(const std::vector<LabeledExample>& examples) {
  if (examples.empty()) throw DataError("class_distribution: empty collection");
  std::map<Label, double> dist = {{Label::NONE, 0.0}, {Label::HOMO, 0.0}, {Label::TRANS, 0.0}};
  for (const auto& ex : examples) dist[ex.label] += 1.0;
  const double n = static_cast<double>(examples.size());
  for (auto& [label, v] : dist) v /= n;
  return dist;
}

DatasetSplit resample_splits(const std::vector<LabeledExample>& examples, SplitRatios ratios,
                             std::uint64_t seed) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0)
    throw DataError("resample_splits: ratios must be non-negative");
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9)
    throw DataError("resample_splits: ratios must sum to 1, got " + std::to_string(sum));
  if (examples.size() < 3) throw DataError("resample_splits: need at least 3 examples");

  const std::size_t n = examples.size();
  auto n_val = static_cast<std::size_t>(std::floor(ratios.validation * static_cast<double>(n)));
  auto n_test = static_cast<std::size_t>(std::floor(ratios.test * static_cast<double>(n)));
  const std::size_t n_train = n - n_val - n_test;  // floor(train*n) plus the remainder

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(substream_seed(seed, "split"));
  seeded_shuffle(order, rng);

  DatasetSplit split;
  split.seed = seed;
  split.ratios = ratios;
  split.train.reserve(n_train);
  split.validation.reserve(n_val);
  split.test.reserve(n_test);
  for (std::size_t i = 0; i < n; ++i) {
    const LabeledExample& ex = examples[order[i]];
    if (i < n_train) split.train.push_back(ex);
    else if (i < n_train + n_val) split.validation.push_back(ex);
    else split.test.push_back(ex);
  }
  return split;
}

std::vector<LanguageCount> corpus_summary(
    const std::map<Lang, std::vector<LabeledExample>>& datasets) {
  std::vector<LanguageCount> counts;
  counts.reserve(datasets.size());
  for (const auto& [lang, examples] : datasets) {
    LanguageCount lc;
    lc.language = lang;
    lc.total = examples.size();
    for (const auto& ex : examples) ++lc.by_label[ex.label];
    counts.push_back(std::move(lc));
  }
  std::sort(counts.begin(), counts.end(), [](const LanguageCount& a, const LanguageCount& b) {
    if (a.total != b.total) return a.total > b.total;
    return lang_code(a.language) < lang_code(b.language);
  });
  return counts;
}

}  // namespace scriptmix
