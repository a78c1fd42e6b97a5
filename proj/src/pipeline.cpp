#include "scriptmix/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scriptmix/errors.hpp"
#include "scriptmix/rng.hpp"
#include "scriptmix/script.hpp"
#include "scriptmix/text.hpp"

namespace scriptmix {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Adaptation corpora carry a fixed 95/5 train/eval partition.
constexpr double kAdaptEvalFraction = 0.05;

// Tracks files a stage writes so a failing stage leaves no partial outputs.
class StageGuard {
 public:
  StageGuard() = default;
  ~StageGuard() {
    if (!committed_)
      for (const auto& path : written_) {
        std::error_code ec;
        fs::remove(path, ec);
      }
  }
  StageGuard(const StageGuard&) = delete;
  StageGuard& operator=(const StageGuard&) = delete;

  fs::path track(const fs::path& path) {
    written_.push_back(path);
    return path;
  }
  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> written_;
  bool committed_ = false;
};

template <typename Fn>
auto with_stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError("stage " + name + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError("stage " + name + ": " + e.what());
  } catch (const TrainError& e) {
    throw TrainError("stage " + name + ": " + e.what());
  }
}

fs::path reports_dir(const ExperimentConfig& c) { return c.output_dir / "reports"; }
fs::path models_dir(const ExperimentConfig& c) { return c.output_dir / "models"; }
fs::path corpora_dir(const ExperimentConfig& c) { return c.output_dir / "corpora"; }

fs::path corpus_doc_file(const ExperimentConfig& c, Provenance p) {
  return corpora_dir(c) / (std::string(provenance_name(p)) + ".txt");
}
fs::path corpus_manifest_file(const ExperimentConfig& c, Provenance p) {
  return corpora_dir(c) / (std::string(provenance_name(p)) + ".manifest.json");
}
fs::path feature_model_file(const ExperimentConfig& c, Provenance p) {
  return models_dir(c) / ("fm_" + std::string(provenance_name(p)) + ".json");
}
fs::path profile_file(const ExperimentConfig& c, Lang lang) {
  return models_dir(c) / ("profile_" + std::string(lang_code(lang)) + ".json");
}
fs::path classifier_file(const ExperimentConfig& c, Provenance p, Scope scope, Lang lang) {
  std::string name = "clf_" + std::string(provenance_name(p)) + "_" +
                     std::string(scope_name(scope));
  if (scope == Scope::MONO) name += "_" + std::string(lang_code(lang));
  return models_dir(c) / (name + ".json");
}

void ensure_dirs(const ExperimentConfig& c) {
  fs::create_directories(reports_dir(c));
  fs::create_directories(models_dir(c));
  fs::create_directories(corpora_dir(c));
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json load_json(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string("cannot open ") + what + ": " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("corrupt " + std::string(what) + " " + path.string() + ": " + e.what());
  }
  return j;
}

std::string fmt(double v, int precision = 4) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::map<Lang, std::vector<LabeledExample>> load_datasets(const ExperimentConfig& config) {
  std::map<Lang, std::vector<LabeledExample>> datasets;
  for (Lang lang : config.languages) {
    const auto it = config.datasets.find(lang);
    if (it == config.datasets.end())
      throw ConfigError("no dataset path configured for language " +
                        std::string(lang_code(lang)));
    datasets[lang] = load_dataset(it->second, lang);
  }
  return datasets;
}

std::map<Lang, std::vector<std::string>> load_abstracts(const ExperimentConfig& config) {
  std::map<Lang, std::vector<std::string>> abstracts;
  for (Lang lang : config.languages) {
    const auto it = config.abstracts.find(lang);
    if (it == config.abstracts.end())
      throw ConfigError("no abstracts path configured for language " +
                        std::string(lang_code(lang)));
    LineFileStream stream(it->second);
    auto& docs = abstracts[lang];
    while (auto doc = stream.next()) docs.push_back(std::move(*doc));
  }
  return abstracts;
}

std::vector<LabeledExample> pooled_train(const std::map<Lang, DatasetSplit>& splits) {
  std::vector<LabeledExample> pooled;
  for (const auto& [lang, split] : splits)
    pooled.insert(pooled.end(), split.train.begin(), split.train.end());
  return pooled;
}

// --- report emission ------------------------------------------------------

void emit_corpus_summary(const ExperimentConfig& config,
                         const std::map<Lang, std::vector<LabeledExample>>& datasets,
                         StageGuard& guard) {
  const auto counts = corpus_summary(datasets);
  json records = json::array();
  std::ostringstream table;
  table << "lang     total     none     homo    trans\n";
  for (const auto& lc : counts) {
    json rec = {{"lang", lang_code(lc.language)}, {"total", lc.total}};
    json by_label;
    for (Label l : {Label::NONE, Label::HOMO, Label::TRANS}) {
      const auto it = lc.by_label.find(l);
      by_label[std::string(label_name(l))] = it == lc.by_label.end() ? 0 : it->second;
    }
    rec["by_label"] = by_label;
    records.push_back(rec);
    char line[128];
    std::snprintf(line, sizeof(line), "%-5s %9zu %8zu %8zu %8zu\n",
                  std::string(lang_code(lc.language)).c_str(), lc.total,
                  by_label["none"].get<std::size_t>(), by_label["homo"].get<std::size_t>(),
                  by_label["trans"].get<std::size_t>());
    table << line;
  }
  std::string jsonl;
  for (const auto& rec : records) jsonl += rec.dump() + "\n";
  write_text(guard.track(reports_dir(config) / "corpus_summary.jsonl"), jsonl);
  write_text(guard.track(reports_dir(config) / "corpus_summary.txt"), table.str());
}

void emit_class_distribution(const ExperimentConfig& config,
                             const std::map<Lang, std::vector<LabeledExample>>& datasets,
                             StageGuard& guard) {
  json records = json::array();
  std::ostringstream table;
  table << "lang    none   homo  trans      n\n";
  for (const auto& [lang, examples] : datasets) {
    const auto dist = class_distribution(examples);
    json rec = {{"lang", lang_code(lang)}, {"n", examples.size()}};
    for (const auto& [label, p] : dist) rec[std::string(label_name(label))] = p;
    records.push_back(rec);
    const bool binary = is_binary_condition(lang);
    table << std::string(lang_code(lang)) << "    " << fmt(dist.at(Label::NONE), 2) << "   "
          << fmt(dist.at(Label::HOMO), 2) << "   "
          << (binary ? std::string("   -") : fmt(dist.at(Label::TRANS), 2)) << "  "
          << std::to_string(examples.size()) << "\n";
  }
  std::string jsonl;
  for (const auto& rec : records) jsonl += rec.dump() + "\n";
  write_text(guard.track(reports_dir(config) / "class_distribution.jsonl"), jsonl);
  write_text(guard.track(reports_dir(config) / "class_distribution.txt"), table.str());
}

void emit_script_mix(const ExperimentConfig& config,
                     const std::map<Lang, std::vector<LabeledExample>>& datasets,
                     StageGuard& guard) {
  std::vector<LabeledExample> all;
  for (const auto& [lang, examples] : datasets)
    all.insert(all.end(), examples.begin(), examples.end());
  const ScriptMixReport report = script_switch_summary(all);

  json records = json::array();
  std::ostringstream table;
  table << "lang       n     min      q1  median      q3     max  any_latin\n";
  for (const auto& s : report.summaries) {
    records.push_back({{"lang", lang_code(s.language)},
                       {"n", s.n},
                       {"min", s.lower_whisker},
                       {"q1", s.lower_quartile},
                       {"median", s.median},
                       {"q3", s.upper_quartile},
                       {"max", s.upper_whisker},
                       {"any_latin", s.any_latin}});
    char line[160];
    std::snprintf(line, sizeof(line), "%-5s %6zu  %s  %s  %s  %s  %s     %s\n",
                  std::string(lang_code(s.language)).c_str(), s.n, fmt(s.lower_whisker).c_str(),
                  fmt(s.lower_quartile).c_str(), fmt(s.median).c_str(),
                  fmt(s.upper_quartile).c_str(), fmt(s.upper_whisker).c_str(),
                  fmt(s.any_latin).c_str());
    table << line;
  }
  for (Lang lang : report.skipped)
    records.push_back({{"lang", lang_code(lang)},
                       {"warning", "no document with a defined latin proportion"}});
  std::string jsonl;
  for (const auto& rec : records) jsonl += rec.dump() + "\n";
  write_text(guard.track(reports_dir(config) / "script_mix.jsonl"), jsonl);
  write_text(guard.track(reports_dir(config) / "script_mix.txt"), table.str());
}

json report_to_json(const EvaluationReport& report) {
  json confusion = json::array();
  for (Eigen::Index r = 0; r < report.cm.counts.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < report.cm.counts.cols(); ++c)
      row.push_back(report.cm.counts(r, c));
    confusion.push_back(std::move(row));
  }
  json per_label;
  for (std::size_t i = 0; i < report.cm.labels.size(); ++i) {
    const auto& s = report.per_label[i];
    per_label[std::string(label_name(report.cm.labels[i]))] = {{"precision", s.precision},
                                                               {"recall", s.recall},
                                                               {"f1", s.f1},
                                                               {"support", s.support}};
  }
  std::vector<std::string> label_names;
  for (Label l : report.cm.labels) label_names.emplace_back(label_name(l));
  return {{"language", lang_code(report.language)},
          {"variant", provenance_name(report.variant)},
          {"scope", scope_name(report.scope)},
          {"seed", report.seed},
          {"model_version", report.model_version},
          {"labels", label_names},
          {"confusion", confusion},
          {"per_label", per_label},
          {"macro_f1", report.macro},
          {"weighted_macro_f1", report.weighted}};
}

}  // namespace

ExperimentConfig load_config(const fs::path& config_file) {
  const json j = [&] {
    std::ifstream in(config_file, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + config_file.string());
    try {
      json parsed;
      in >> parsed;
      return parsed;
    } catch (const json::exception& e) {
      throw ConfigError("config parse error in " + config_file.string() + ": " + e.what());
    }
  }();

  ExperimentConfig config;
  const fs::path config_dir = config_file.has_parent_path() ? config_file.parent_path() : ".";

  fs::path data_dir;
  if (j.contains("data_dir")) {
    data_dir = j.at("data_dir").get<std::string>();
  } else if (const char* env = std::getenv("SCRIPTMIX_DATA_DIR")) {
    data_dir = env;
  }
  if (data_dir.empty()) data_dir = config_dir;
  else if (data_dir.is_relative()) data_dir = config_dir / data_dir;

  auto resolve = [&](const fs::path& p) {
    return (p.is_relative() ? data_dir / p : p).lexically_normal();
  };

  try {
    if (!j.contains("seed")) throw ConfigError("config field `seed` is mandatory");
    config.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("datasets"))
      for (const auto& [code, path] : j.at("datasets").items())
        config.datasets[parse_lang(code)] = resolve(path.get<std::string>());
    if (j.contains("abstracts"))
      for (const auto& [code, path] : j.at("abstracts").items())
        config.abstracts[parse_lang(code)] = resolve(path.get<std::string>());
    if (j.contains("stream")) config.stream_path = resolve(j.at("stream").get<std::string>());
    config.translit_dir =
        j.contains("translit_tables")
            ? resolve(j.at("translit_tables").get<std::string>())
            : data_dir / "translit";
    if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();

    if (j.contains("languages")) {
      for (const auto& code : j.at("languages")) config.languages.push_back(parse_lang(code.get<std::string>()));
    } else {
      for (const auto& [lang, path] : config.datasets) config.languages.push_back(lang);
    }
    if (j.contains("variants")) {
      config.variants.clear();
      for (const auto& name : j.at("variants"))
        config.variants.push_back(parse_provenance(name.get<std::string>()));
    }
    if (j.contains("scopes")) {
      config.scopes.clear();
      for (const auto& name : j.at("scopes")) config.scopes.push_back(parse_scope(name.get<std::string>()));
    }

    config.sample_fraction = j.value("sample_fraction", config.sample_fraction);
    config.profile_k = j.value("profile_k", config.profile_k);
    config.min_margin = j.value("min_margin", config.min_margin);
    config.min_length = j.value("min_length", config.min_length);
    config.max_docs_per_language = j.value("max_docs_per_language", config.max_docs_per_language);
    config.vocab_cap = j.value("vocab_cap", config.vocab_cap);
    if (j.contains("split")) {
      const auto ratios = j.at("split").get<std::vector<double>>();
      if (ratios.size() != 3) throw ConfigError("config field `split` must have 3 ratios");
      config.ratios = {ratios[0], ratios[1], ratios[2]};
    }
    if (j.contains("train")) {
      const auto& t = j.at("train");
      config.train.epochs = t.value("epochs", config.train.epochs);
      config.train.eval_every = t.value("eval_every", config.train.eval_every);
      config.train.batch_size = t.value("batch_size", config.train.batch_size);
      config.train.learning_rate = t.value("learning_rate", config.train.learning_rate);
      config.train.beta1 = t.value("beta1", config.train.beta1);
      config.train.beta2 = t.value("beta2", config.train.beta2);
      config.train.epsilon = t.value("epsilon", config.train.epsilon);
      config.train.weight_decay = t.value("weight_decay", config.train.weight_decay);
      config.train.class_weights = t.value("class_weights", config.train.class_weights);
    }
  } catch (const json::exception& e) {
    throw ConfigError("config error in " + config_file.string() + ": " + e.what());
  }
  return config;
}

void validate_config(const ExperimentConfig& config) {
  if (config.languages.empty()) throw ConfigError("no languages enabled");
  if (config.variants.empty()) throw ConfigError("no corpus variants enabled");
  if (config.scopes.empty()) throw ConfigError("no scopes enabled");
  for (Lang lang : config.languages)
    if (!config.datasets.count(lang))
      throw ConfigError("enabled language " + std::string(lang_code(lang)) +
                        " has no dataset path");
}

std::map<Lang, DatasetSplit> load_splits(const ExperimentConfig& config) {
  const auto datasets = load_datasets(config);
  std::map<Lang, DatasetSplit> splits;
  for (const auto& [lang, examples] : datasets)
    splits[lang] = resample_splits(
        examples, config.ratios,
        substream_seed(config.seed, "resample/" + std::string(lang_code(lang))));
  return splits;
}

void stage_stats(const ExperimentConfig& config) {
  with_stage("stats", [&] {
    validate_config(config);
    ensure_dirs(config);
    StageGuard guard;
    const auto datasets = load_datasets(config);
    emit_corpus_summary(config, datasets, guard);
    emit_class_distribution(config, datasets, guard);
    emit_script_mix(config, datasets, guard);
    guard.commit();
  });
}

void run_stats(const ExperimentConfig& config) { stage_stats(config); }

void stage_augment(const ExperimentConfig& config) {
  with_stage("augment", [&] {
    validate_config(config);
    ensure_dirs(config);
    StageGuard guard;

    const bool want_baseline =
        std::count(config.variants.begin(), config.variants.end(), Provenance::BASELINE) > 0;
    const bool want_synthetic =
        std::count(config.variants.begin(), config.variants.end(), Provenance::SYNTHETIC) > 0;
    if (!want_baseline && !want_synthetic) {
      guard.commit();
      return;
    }

    const auto abstracts = load_abstracts(config);

    if (want_baseline) {
      AdaptationCorpus baseline;
      baseline.provenance = Provenance::BASELINE;
      baseline.seed = substream_seed(config.seed, "corpus/baseline");
      for (Lang lang : config.languages) {
        const std::string tag = "abstract:" + std::string(lang_code(lang));
        for (const auto& doc : abstracts.at(lang)) baseline.documents.push_back({doc, tag, false});
      }
      mark_partition(baseline, kAdaptEvalFraction,
                     substream_seed(baseline.seed, "partition/baseline"));
      save_corpus(baseline, guard.track(corpus_doc_file(config, Provenance::BASELINE)),
                  guard.track(corpus_manifest_file(config, Provenance::BASELINE)));
    }

    if (want_synthetic) {
      const Transliterator translit = Transliterator::load_dir(config.translit_dir);
      const auto splits = load_splits(config);
      AdaptationCorpus synthetic = synthesize_augmented_corpus(
          abstracts, pooled_train(splits), config.sample_fraction,
          substream_seed(config.seed, "corpus/synthetic"), translit);
      save_corpus(synthetic, guard.track(corpus_doc_file(config, Provenance::SYNTHETIC)),
                  guard.track(corpus_manifest_file(config, Provenance::SYNTHETIC)));
    }
    guard.commit();
  });
}

void stage_mine(const ExperimentConfig& config) {
  with_stage("mine", [&] {
    validate_config(config);
    ensure_dirs(config);
    StageGuard guard;

    if (!std::count(config.variants.begin(), config.variants.end(), Provenance::ORGANIC)) {
      guard.commit();
      return;
    }
    if (config.stream_path.empty())
      throw ConfigError("organic variant enabled but no `stream` path configured");

    const auto splits = load_splits(config);
    std::vector<LanguageProfile> profiles;
    for (const auto& [lang, split] : splits) {
      std::vector<std::string> texts;
      texts.reserve(split.train.size());
      for (const auto& ex : split.train) texts.push_back(ex.text);
      profiles.push_back(build_profile(texts, lang, config.profile_k));
      save_profile(profiles.back(), guard.track(profile_file(config, lang)));
    }

    AdaptationCorpus organic;
    organic.provenance = Provenance::ORGANIC;
    organic.seed = substream_seed(config.seed, "corpus/organic");
    MineOptions options{config.min_margin, config.min_length, config.max_docs_per_language};
    json mine_stats = json::object();
    for (Lang lang : config.languages) {
      LineFileStream stream(config.stream_path);
      MineStats stats;
      AdaptationCorpus mined = mine_organic(stream, lang, profiles, options, organic.seed, &stats);
      for (auto& doc : mined.documents) organic.documents.push_back(std::move(doc));
      mine_stats[std::string(lang_code(lang))] = {{"scanned", stats.scanned},
                                                  {"retained", stats.retained},
                                                  {"rejected_short", stats.rejected_short},
                                                  {"rejected_language", stats.rejected_language},
                                                  {"rejected_margin", stats.rejected_margin}};
    }
    mark_partition(organic, kAdaptEvalFraction,
                   substream_seed(organic.seed, "partition/organic"));
    save_corpus(organic, guard.track(corpus_doc_file(config, Provenance::ORGANIC)),
                guard.track(corpus_manifest_file(config, Provenance::ORGANIC)));

    // Mining manifest: thresholds, profile versions, per-language counts.
    json profile_versions = json::object();
    for (const auto& p : profiles) profile_versions[std::string(lang_code(p.language))] = p.version;
    write_json(guard.track(corpora_dir(config) / "organic.mining.json"),
               {{"format", "scriptmix.mining/1"},
                {"min_margin", config.min_margin},
                {"min_length", config.min_length},
                {"max_docs_per_language", config.max_docs_per_language},
                {"profile_versions", profile_versions},
                {"per_language", mine_stats}});
    guard.commit();
  });
}

void stage_adapt(const ExperimentConfig& config) {
  with_stage("adapt", [&] {
    validate_config(config);
    ensure_dirs(config);
    StageGuard guard;
    for (Provenance variant : config.variants) {
      const AdaptationCorpus corpus =
          load_corpus(corpus_doc_file(config, variant), corpus_manifest_file(config, variant));
      const FeatureModel fm = fit_feature_model(corpus, config.vocab_cap);
      save_feature_model(fm, guard.track(feature_model_file(config, variant)));
    }
    guard.commit();
  });
}

void stage_train(const ExperimentConfig& config) {
  with_stage("train", [&] {
    validate_config(config);
    ensure_dirs(config);
    StageGuard guard;
    const auto splits = load_splits(config);

    for (Provenance variant : config.variants) {
      const FeatureModel fm = load_feature_model(feature_model_file(config, variant));
      const std::string variant_name(provenance_name(variant));

      if (std::count(config.scopes.begin(), config.scopes.end(), Scope::MONO)) {
        for (const auto& [lang, split] : splits) {
          TrainConfig tc = config.train;
          tc.seed = substream_seed(config.seed, "train/" + variant_name + "/mono/" +
                                                    std::string(lang_code(lang)));
          const ClassifierModel model = train_classifier(split, fm, label_set(lang), tc);
          save_classifier(model, guard.track(classifier_file(config, variant, Scope::MONO, lang)));
        }
      }
      if (std::count(config.scopes.begin(), config.scopes.end(), Scope::MULTI)) {
        DatasetSplit pooled;
        pooled.ratios = config.ratios;
        for (const auto& [lang, split] : splits) {
          pooled.train.insert(pooled.train.end(), split.train.begin(), split.train.end());
          pooled.validation.insert(pooled.validation.end(), split.validation.begin(),
                                   split.validation.end());
          pooled.test.insert(pooled.test.end(), split.test.begin(), split.test.end());
        }
        TrainConfig tc = config.train;
        tc.seed = substream_seed(config.seed, "train/" + variant_name + "/multi");
        pooled.seed = tc.seed;
        const ClassifierModel model = train_classifier(
            pooled, fm, {Label::NONE, Label::HOMO, Label::TRANS}, tc);
        save_classifier(model,
                        guard.track(classifier_file(config, variant, Scope::MULTI, Lang::ENG)));
      }
    }
    guard.commit();
  });
}

void stage_evaluate(const ExperimentConfig& config) {
  with_stage("evaluate", [&] {
    validate_config(config);
    ensure_dirs(config);
    StageGuard guard;
    const auto splits = load_splits(config);

    json cells = json::array();
    for (Provenance variant : config.variants) {
      for (Scope scope : config.scopes) {
        ClassifierModel multi_model;
        if (scope == Scope::MULTI)
          multi_model = load_classifier(classifier_file(config, variant, Scope::MULTI, Lang::ENG));
        for (const auto& [lang, split] : splits) {
          const ClassifierModel model =
              scope == Scope::MULTI
                  ? multi_model
                  : load_classifier(classifier_file(config, variant, Scope::MONO, lang));
          if (split.test.empty()) throw DataError("empty test part for " + std::string(lang_code(lang)));

          std::vector<Label> gold, pred;
          gold.reserve(split.test.size());
          pred.reserve(split.test.size());
          for (const auto& ex : split.test) {
            gold.push_back(ex.label);
            pred.push_back(predict(model, ex.text).label);
          }
          EvaluationReport report;
          report.language = lang;
          report.variant = variant;
          report.scope = scope;
          report.seed = model.config.seed;
          report.model_version = model.version + "@" + model.feature_model.version;
          report.cm = confusion_matrix(gold, pred, model.labels);
          report.per_label = per_label_scores(report.cm);
          report.macro = macro_f1(report.cm);
          report.weighted = weighted_macro_f1(report.cm);
          cells.push_back(report_to_json(report));
        }
      }
    }

    std::vector<std::string> langs, variants, scopes;
    for (Lang lang : config.languages) langs.emplace_back(lang_code(lang));
    for (Provenance v : config.variants) variants.emplace_back(provenance_name(v));
    for (Scope s : config.scopes) scopes.emplace_back(scope_name(s));
    write_json(guard.track(reports_dir(config) / "grid.json"),
               {{"format", "scriptmix.grid/1"},
                {"languages", langs},
                {"variants", variants},
                {"scopes", scopes},
                {"cells", cells}});
    guard.commit();
  });
}

SelectionResult stage_select(const ExperimentConfig& config) {
  return with_stage("select", [&] {
    ensure_dirs(config);
    StageGuard guard;
    const json grid_json = load_json(reports_dir(config) / "grid.json", "grid report");
    if (grid_json.value("format", "") != "scriptmix.grid/1")
      throw DataError("unsupported grid report format");

    SelectionGrid grid;
    for (const auto& code : grid_json.at("languages"))
      grid.languages.push_back(parse_lang(code.get<std::string>()));
    for (const auto& name : grid_json.at("variants"))
      grid.variants.push_back(parse_provenance(name.get<std::string>()));
    for (const auto& name : grid_json.at("scopes"))
      grid.scopes.push_back(parse_scope(name.get<std::string>()));
    for (const auto& cell : grid_json.at("cells")) {
      EvaluationReport report;
      report.language = parse_lang(cell.at("language").get<std::string>());
      report.variant = parse_provenance(cell.at("variant").get<std::string>());
      report.scope = parse_scope(cell.at("scope").get<std::string>());
      report.macro = cell.at("macro_f1").get<double>();
      report.weighted = cell.at("weighted_macro_f1").get<double>();
      report.seed = cell.value("seed", 0ULL);
      report.model_version = cell.value("model_version", "");
      grid.cells[{report.variant, report.scope, report.language}] = report;
    }

    const SelectionResult result = select_best(grid);

    // Aligned grid table, winners flagged with '*'.
    std::ostringstream table;
    auto row_label = [&](std::string_view label) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "%-5s", std::string(label).c_str());
      table << buf;
    };
    row_label("lang");
    for (Provenance v : grid.variants)
      for (Scope s : grid.scopes) {
        char head[40];
        std::snprintf(head, sizeof(head), " %16s", (std::string(provenance_name(v)) + "/" +
                                                    std::string(scope_name(s))).c_str());
        table << head;
      }
    table << "\n";
    for (Lang lang : grid.languages) {
      row_label(lang_code(lang));
      for (Provenance v : grid.variants)
        for (Scope s : grid.scopes) {
          const auto& cell = grid.cells.at({v, s, lang});
          const auto& winners = result.winners.at(lang);
          const bool won = std::count(winners.begin(), winners.end(), ConfigKey{v, s}) > 0;
          char buf[40];
          std::snprintf(buf, sizeof(buf), " %15s%c", fmt(cell.macro).c_str(), won ? '*' : ' ');
          table << buf;
        }
      table << "\n";
    }
    row_label("mean");
    for (Provenance v : grid.variants)
      for (Scope s : grid.scopes) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), " %15s ", fmt(result.mean_macro.at({v, s})).c_str());
        table << buf;
      }
    table << "\nnominated: " << provenance_name(result.nominated.variant) << "/"
          << scope_name(result.nominated.scope) << "\n";
    write_text(guard.track(reports_dir(config) / "grid.txt"), table.str());

    json winners = json::object();
    for (const auto& [lang, configs] : result.winners) {
      json arr = json::array();
      for (const auto& c : configs)
        arr.push_back(json::array({provenance_name(c.variant), scope_name(c.scope)}));
      winners[std::string(lang_code(lang))] = arr;
    }
    json means = json::object();
    json wins = json::object();
    for (const auto& [c, mean] : result.mean_macro) {
      const std::string key =
          std::string(provenance_name(c.variant)) + "/" + std::string(scope_name(c.scope));
      means[key] = mean;
      wins[key] = result.win_counts.at(c);
    }
    write_json(guard.track(reports_dir(config) / "selection.json"),
               {{"format", "scriptmix.selection/1"},
                {"winners", winners},
                {"mean_macro", means},
                {"win_counts", wins},
                {"nominated",
                 {{"variant", provenance_name(result.nominated.variant)},
                  {"scope", scope_name(result.nominated.scope)}}}});
    guard.commit();
    return result;
  });
}

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot hash missing file: " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char out[24];
  std::snprintf(out, sizeof(out), "fnv64:%016llx", static_cast<unsigned long long>(h));
  return out;
}

SelectionResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  stage_stats(config);
  stage_augment(config);
  stage_mine(config);
  stage_adapt(config);
  stage_train(config);
  stage_evaluate(config);
  SelectionResult result = stage_select(config);

  // Manifest: config echo, substream seeds, corpus/model versions and counts,
  // and a hash of every artifact. No timestamps; two runs with equal config
  // produce byte-identical manifests.
  json counts = json::object();
  for (Provenance variant : config.variants) {
    const fs::path manifest_path = corpus_manifest_file(config, variant);
    if (fs::exists(manifest_path)) {
      const json m = load_json(manifest_path, "corpus manifest");
      counts[std::string(provenance_name(variant))] = {{"documents", m.at("documents")},
                                                       {"train", m.at("train_count")},
                                                       {"eval", m.at("eval_count")}};
    }
  }
  json versions = json::object();
  for (Provenance variant : config.variants) {
    const json fm = load_json(feature_model_file(config, variant), "feature model");
    versions["fm_" + std::string(provenance_name(variant))] = fm.at("version");
  }

  json files = json::object();
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(config.output_dir))
    if (entry.is_regular_file() && entry.path().filename() != "manifest")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths)
    files[fs::relative(path, config.output_dir).generic_string()] = hash_file(path);

  json config_echo = {
      {"seed", config.seed},
      {"sample_fraction", config.sample_fraction},
      {"profile_k", config.profile_k},
      {"min_margin", config.min_margin},
      {"min_length", config.min_length},
      {"max_docs_per_language", config.max_docs_per_language},
      {"vocab_cap", config.vocab_cap},
      {"split", {config.ratios.train, config.ratios.validation, config.ratios.test}},
      {"train",
       {{"epochs", config.train.epochs},
        {"eval_every", config.train.eval_every},
        {"batch_size", config.train.batch_size},
        {"learning_rate", config.train.learning_rate},
        {"beta1", config.train.beta1},
        {"beta2", config.train.beta2},
        {"epsilon", config.train.epsilon},
        {"weight_decay", config.train.weight_decay},
        {"class_weights", config.train.class_weights}}},
  };
  std::vector<std::string> langs;
  for (Lang lang : config.languages) langs.emplace_back(lang_code(lang));
  config_echo["languages"] = langs;

  write_json(config.output_dir / "manifest", {{"format", "scriptmix.manifest/1"},
                                              {"config", config_echo},
                                              {"corpus_counts", counts},
                                              {"versions", versions},
                                              {"files", files}});
  return result;
}

void run_predict(const fs::path& model_path, const fs::path& input_path, std::ostream& out) {
  const ClassifierModel model = load_classifier(model_path);
  std::ifstream in(input_path, std::ios::binary);
  if (!in) throw DataError("cannot open input file: " + input_path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const Prediction pred = predict(model, line);
    json probs = json::object();
    for (std::size_t i = 0; i < model.labels.size(); ++i)
      probs[std::string(label_name(model.labels[i]))] =
          pred.probabilities[static_cast<Eigen::Index>(i)];
    const json rec = {{"line", lineno},
                      {"label", label_name(pred.label)},
                      {"probabilities", probs},
                      {"oov", pred.oov}};
    out << rec.dump() << "\n";
    ++lineno;
  }
}

}  // namespace scriptmix
