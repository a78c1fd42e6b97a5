#include "scriptmix/translit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "scriptmix/errors.hpp"
#include "scriptmix/rng.hpp"
#include "scriptmix/script.hpp"
#include "scriptmix/text.hpp"

namespace scriptmix {

using nlohmann::json;

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::BASELINE: return "baseline";
    case Provenance::SYNTHETIC: return "synthetic";
    case Provenance::ORGANIC: return "organic";
  }
  return "?";
}

Provenance parse_provenance(std::string_view name) {
  for (Provenance p : {Provenance::BASELINE, Provenance::SYNTHETIC, Provenance::ORGANIC})
    if (provenance_name(p) == name) return p;
  throw ConfigError("unknown corpus provenance: " + std::string(name));
}

std::size_t AdaptationCorpus::eval_count() const {
  return static_cast<std::size_t>(
      std::count_if(documents.begin(), documents.end(), [](const auto& d) { return d.eval; }));
}

TranslitTable TranslitTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open transliteration table: " + path.string());

  TranslitTable table;
  bool script_seen = false;
  std::set<std::u32string> sources;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string meta = trim(line.substr(1));
      if (meta.rfind("script:", 0) == 0) {
        table.script_ = parse_script(trim(meta.substr(7)));
        script_seen = true;
      } else if (meta.rfind("version:", 0) == 0) {
        table.version_ = trim(meta.substr(8));
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": missing tab separator");
    const std::string source_utf8 = line.substr(0, tab);
    const std::string replacement = line.substr(tab + 1);
    if (source_utf8.empty())
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": empty rule source");
    const auto cps = decode_utf8(source_utf8);
    std::u32string source(cps.begin(), cps.end());
    if (!sources.insert(source).second)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": duplicate rule source");
    table.rules_[source[0]].emplace_back(std::move(source), replacement);
    ++table.rule_count_;
  }
  if (!script_seen) throw DataError("table missing `# script:` header: " + path.string());
  if (table.version_.empty()) throw DataError("table missing `# version:` header: " + path.string());

  for (auto& [first, candidates] : table.rules_)
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
      return a.first < b.first;
    });
  return table;
}

std::string TranslitTable::apply(std::string_view text) const {
  const auto cps = decode_utf8(text);
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    const auto it = rules_.find(cps[i]);
    bool matched = false;
    if (it != rules_.end()) {
      for (const auto& [source, replacement] : it->second) {
        if (source.size() > cps.size() - i) continue;
        if (std::equal(source.begin(), source.end(), cps.begin() + static_cast<long>(i))) {
          out += replacement;
          i += source.size();
          matched = true;
          break;
        }
      }
    }
    if (matched) continue;
    // Unmatched in-script code points are dropped; everything else passes.
    if (script_of(cps[i]) != script_) append_utf8(out, cps[i]);
    ++i;
  }
  return out;
}

Transliterator Transliterator::load_dir(const std::filesystem::path& dir) {
  Transliterator tr;
  for (const char* name :
       {"devanagari.tsv", "gujarati.tsv", "kannada.tsv", "malayalam.tsv", "tamil.tsv",
        "telugu.tsv"}) {
    const auto path = dir / name;
    if (!std::filesystem::exists(path))
      throw DataError("missing transliteration table: " + path.string());
    TranslitTable table = TranslitTable::load(path);
    tr.tables_.emplace(table.script(), std::move(table));
  }
  return tr;
}

const TranslitTable& Transliterator::table(Script script) const {
  const auto it = tables_.find(script);
  if (it == tables_.end())
    throw ConfigError("unsupported transliteration script: " + std::string(script_name(script)));
  return it->second;
}

std::string Transliterator::romanize(std::string_view text, Script script) const {
  return table(script).apply(text);
}

std::map<Script, std::string> Transliterator::versions() const {
  std::map<Script, std::string> out;
  for (const auto& [script, table] : tables_) out[script] = table.version();
  return out;
}

std::string transliterate(std::string_view text, const TranslitTable& table) {
  return table.apply(text);
}

void mark_partition(AdaptationCorpus& corpus, double eval_fraction, std::uint64_t seed) {
  for (auto& doc : corpus.documents) doc.eval = false;
  const std::size_t n = corpus.documents.size();
  const auto n_eval = static_cast<std::size_t>(std::floor(eval_fraction * static_cast<double>(n)));
  SplitMix64 rng(seed);
  for (std::size_t i : sample_indices(n, n_eval, rng)) corpus.documents[i].eval = true;
}

AdaptationCorpus synthesize_augmented_corpus(
    const std::map<Lang, std::vector<std::string>>& abstracts,
    const std::vector<LabeledExample>& labelled, double sample_fraction, std::uint64_t seed,
    const Transliterator& translit) {
  if (sample_fraction < 0.0 || sample_fraction > 1.0)
    throw ConfigError("sample_fraction must be in [0, 1], got " + std::to_string(sample_fraction));

  AdaptationCorpus corpus;
  corpus.provenance = Provenance::SYNTHETIC;
  corpus.seed = seed;
  corpus.sample_fraction = sample_fraction;

  for (Lang lang : all_langs()) {
    const auto it = abstracts.find(lang);
    if (it == abstracts.end()) continue;
    const auto& docs = it->second;
    const std::string code(lang_code(lang));
    for (const auto& doc : docs) corpus.documents.push_back({doc, "abstract:" + code, false});

    const Script script = native_script(lang);
    if (script == Script::Latin) continue;  // eng/esp stay untransliterated

    const auto k =
        static_cast<std::size_t>(std::floor(sample_fraction * static_cast<double>(docs.size())));
    SplitMix64 rng(substream_seed(seed, "sample/" + code));
    for (std::size_t i : sample_indices(docs.size(), k, rng))
      corpus.documents.push_back({translit.romanize(docs[i], script), "translit:" + code, false});
  }

  for (const auto& ex : labelled)
    corpus.documents.push_back(
        {ex.text, "labelled:" + std::string(lang_code(ex.language)), false});

  mark_partition(corpus, 0.05, substream_seed(seed, "partition/synthetic"));
  return corpus;
}

void save_corpus(const AdaptationCorpus& corpus, const std::filesystem::path& doc_file,
                 const std::filesystem::path& manifest_file) {
  std::ofstream docs(doc_file, std::ios::binary);
  if (!docs) throw DataError("cannot write corpus file: " + doc_file.string());
  json eval_indices = json::array();
  json source_runs = json::array();
  std::map<std::string, std::size_t> source_counts;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& doc = corpus.documents[i];
    std::string text = doc.text;
    for (char& c : text)
      if (c == '\n' || c == '\r') c = ' ';
    docs << text << "\n";
    if (doc.eval) eval_indices.push_back(i);
    ++source_counts[doc.source];
    if (source_runs.empty() || source_runs.back()[0].get<std::string>() != doc.source)
      source_runs.push_back(json::array({doc.source, 1}));
    else
      source_runs.back()[1] = source_runs.back()[1].get<std::size_t>() + 1;
  }
  docs.close();

  json manifest = {
      {"format", "scriptmix.corpus/1"},
      {"provenance", provenance_name(corpus.provenance)},
      {"seed", corpus.seed},
      {"sample_fraction", corpus.sample_fraction},
      {"documents", corpus.documents.size()},
      {"train_count", corpus.train_count()},
      {"eval_count", corpus.eval_count()},
      {"sources", source_counts},
      {"source_runs", source_runs},
      {"eval_indices", eval_indices},
  };
  std::ofstream mf(manifest_file, std::ios::binary);
  if (!mf) throw DataError("cannot write corpus manifest: " + manifest_file.string());
  mf << manifest.dump(2) << "\n";
}

AdaptationCorpus load_corpus(const std::filesystem::path& doc_file,
                             const std::filesystem::path& manifest_file) {
  std::ifstream mf(manifest_file, std::ios::binary);
  if (!mf) throw DataError("cannot open corpus manifest: " + manifest_file.string());
  json manifest;
  try {
    mf >> manifest;
  } catch (const json::exception& e) {
    throw DataError("corrupt corpus manifest " + manifest_file.string() + ": " + e.what());
  }
  if (manifest.value("format", "") != "scriptmix.corpus/1")
    throw DataError("unsupported corpus manifest format in " + manifest_file.string());

  AdaptationCorpus corpus;
  corpus.provenance = parse_provenance(manifest.at("provenance").get<std::string>());
  corpus.seed = manifest.at("seed").get<std::uint64_t>();
  corpus.sample_fraction = manifest.value("sample_fraction", 0.0);

  std::ifstream docs(doc_file, std::ios::binary);
  if (!docs) throw DataError("cannot open corpus file: " + doc_file.string());
  std::string line;
  while (std::getline(docs, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    AdaptationDoc doc;
    doc.text = line;
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.size() != manifest.at("documents").get<std::size_t>())
    throw DataError("corpus file does not match manifest document count: " + doc_file.string());
  std::size_t pos = 0;
  for (const auto& run : manifest.value("source_runs", json::array())) {
    const auto tag = run.at(0).get<std::string>();
    const auto count = run.at(1).get<std::size_t>();
    for (std::size_t i = 0; i < count && pos < corpus.documents.size(); ++i, ++pos)
      corpus.documents[pos].source = tag;
  }
  for (const auto& idx : manifest.at("eval_indices")) {
    const auto i = idx.get<std::size_t>();
    if (i >= corpus.documents.size())
      throw DataError("eval index out of range in " + manifest_file.string());
    corpus.documents[i].eval = true;
  }
  return corpus;
}

}  // namespace scriptmix
