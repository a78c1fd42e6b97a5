// Acceptance suite: one check per release criterion, each printed as a
// single PASS/FAIL line with its runtime. Exits nonzero if any criterion
// fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scriptmix/corpus.hpp"
#include "scriptmix/eval.hpp"
#include "scriptmix/langid.hpp"
#include "scriptmix/model.hpp"
#include "scriptmix/pipeline.hpp"
#include "scriptmix/rng.hpp"
#include "scriptmix/script.hpp"
#include "scriptmix/text.hpp"
#include "scriptmix/translit.hpp"
#include "synthlang.hpp"

using namespace scriptmix;
namespace fs = std::filesystem;

namespace {

const fs::path kRepoDir = SCRIPTMIX_REPO_DIR;

struct Check {
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Shared {
  fs::path run_a_dir;  // populated by criterion 6, reused by criterion 7
};

const Transliterator& tables() {
  static const Transliterator tr = Transliterator::load_dir(kRepoDir / "data" / "translit");
  return tr;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
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

// ---------------------------------------------------------------------------
// 1. Metric oracle equivalence

double oracle_f1_sum(const Eigen::MatrixXi& m, bool weighted) {
  const Eigen::Index L = m.rows();
  const double total = m.sum();
  double sum = 0;
  for (Eigen::Index l = 0; l < L; ++l) {
    double tp = m(l, l), fp = 0, fn = 0;
    for (Eigen::Index o = 0; o < L; ++o) {
      if (o == l) continue;
      fp += m(o, l);
      fn += m(l, o);
    }
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0;
    const double r = tp + fn > 0 ? tp / (tp + fn) : 0;
    const double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0;
    sum += weighted ? ((tp + fn) / total) * f1 : f1 / static_cast<double>(L);
  }
  return sum;
}

void criterion_metric_oracle(Check& check, Shared&) {
  // every 2-label matrix with cells <= 6
  ConfusionMatrix cm2;
  cm2.labels = {Label::NONE, Label::HOMO};
  cm2.counts = Eigen::MatrixXi(2, 2);
  double worst = 0;
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int c = 0; c <= 6; ++c)
        for (int d = 0; d <= 6; ++d) {
          if (a + b + c + d == 0) continue;
          cm2.counts << a, b, c, d;
          worst = std::max(worst, std::abs(macro_f1(cm2) - oracle_f1_sum(cm2.counts, false)));
          worst = std::max(worst,
                           std::abs(weighted_macro_f1(cm2) - oracle_f1_sum(cm2.counts, true)));
        }
  check.require(worst <= 1e-12, "2-label worst deviation " + std::to_string(worst));

  // every 3-label matrix with cells <= 6 (7^9 cases)
  ConfusionMatrix cm3;
  cm3.labels = {Label::NONE, Label::HOMO, Label::TRANS};
  cm3.counts = Eigen::MatrixXi::Zero(3, 3);
  int cells[9] = {0};
  worst = 0;
  for (;;) {
    int total = 0;
    for (int i = 0; i < 9; ++i) {
      cm3.counts(i / 3, i % 3) = cells[i];
      total += cells[i];
    }
    if (total > 0) {
      worst = std::max(worst, std::abs(macro_f1(cm3) - oracle_f1_sum(cm3.counts, false)));
      worst = std::max(worst,
                       std::abs(weighted_macro_f1(cm3) - oracle_f1_sum(cm3.counts, true)));
    }
    int pos = 0;
    while (pos < 9 && ++cells[pos] > 6) cells[pos++] = 0;
    if (pos == 9) break;
  }
  check.require(worst <= 1e-12, "3-label worst deviation " + std::to_string(worst));
}

// ---------------------------------------------------------------------------
// 2. Table 2 selection replay

void criterion_selection_replay(Check& check, Shared&) {
  // Published macro F1 grid: {baseline, synthetic, organic} x {mono, multi}.
  const std::map<Lang, std::array<double, 6>> published = {
      {Lang::ENG, {0.32, 0.35, 0.32, 0.32, 0.32, 0.32}},
      {Lang::ESP, {0.80, 0.82, 0.87, 0.84, 0.76, 0.82}},
      {Lang::GUJ, {0.94, 0.94, 0.95, 0.95, 0.95, 0.95}},
      {Lang::HIN, {0.32, 0.32, 0.32, 0.32, 0.32, 0.32}},
      {Lang::KAN, {0.92, 0.93, 0.94, 0.94, 0.94, 0.94}},
      {Lang::MAL, {0.51, 0.53, 0.73, 0.58, 0.78, 0.61}},
      {Lang::MAR, {0.44, 0.45, 0.44, 0.41, 0.42, 0.46}},
      {Lang::TAM, {0.48, 0.42, 0.54, 0.49, 0.48, 0.56}},
      {Lang::TCY, {0.72, 0.43, 0.43, 0.43, 0.43, 0.43}},
      {Lang::TEL, {0.98, 0.97, 0.98, 0.97, 0.97, 0.98}},
  };

  SelectionGrid grid;
  grid.variants = {Provenance::BASELINE, Provenance::SYNTHETIC, Provenance::ORGANIC};
  grid.scopes = {Scope::MONO, Scope::MULTI};
  for (const auto& [lang, values] : published) {
    grid.languages.push_back(lang);
    std::size_t i = 0;
    for (Provenance v : grid.variants)
      for (Scope s : grid.scopes) {
        EvaluationReport r;
        r.language = lang;
        r.variant = v;
        r.scope = s;
        r.macro = values[i++];
        grid.cells[{v, s, lang}] = r;
      }
  }

  const SelectionResult result = select_best(grid);

  const ConfigKey bm{Provenance::BASELINE, Scope::MONO};
  const ConfigKey bM{Provenance::BASELINE, Scope::MULTI};
  const ConfigKey sm{Provenance::SYNTHETIC, Scope::MONO};
  const ConfigKey sM{Provenance::SYNTHETIC, Scope::MULTI};
  const ConfigKey om{Provenance::ORGANIC, Scope::MONO};
  const ConfigKey oM{Provenance::ORGANIC, Scope::MULTI};
  const std::map<Lang, std::set<std::pair<Provenance, Scope>>> expected = {
      {Lang::ENG, {{bM.variant, bM.scope}}},
      {Lang::ESP, {{sm.variant, sm.scope}}},
      {Lang::GUJ,
       {{sm.variant, sm.scope}, {sM.variant, sM.scope}, {om.variant, om.scope},
        {oM.variant, oM.scope}}},
      {Lang::HIN,
       {{bm.variant, bm.scope}, {bM.variant, bM.scope}, {sm.variant, sm.scope},
        {sM.variant, sM.scope}, {om.variant, om.scope}, {oM.variant, oM.scope}}},
      {Lang::KAN,
       {{sm.variant, sm.scope}, {sM.variant, sM.scope}, {om.variant, om.scope},
        {oM.variant, oM.scope}}},
      {Lang::MAL, {{om.variant, om.scope}}},
      {Lang::MAR, {{oM.variant, oM.scope}}},
      {Lang::TAM, {{oM.variant, oM.scope}}},
      {Lang::TCY, {{bm.variant, bm.scope}}},
      {Lang::TEL, {{bm.variant, bm.scope}, {sm.variant, sm.scope}, {oM.variant, oM.scope}}},
  };

  for (const auto& [lang, want] : expected) {
    std::set<std::pair<Provenance, Scope>> got;
    for (const ConfigKey& c : result.winners.at(lang)) got.insert({c.variant, c.scope});
    check.require(got == want, "winner set mismatch for " + std::string(lang_code(lang)));
  }
  check.require(result.nominated == sm,
                "nominated " + std::string(provenance_name(result.nominated.variant)) + "/" +
                    std::string(scope_name(result.nominated.scope)) + ", expected synthetic/mono");
}

// ---------------------------------------------------------------------------
// 3. Optimizer correctness

void criterion_optimizer(Check& check, Shared&) {
  SplitMix64 rng(424242);
  double worst = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    TrainConfig config;
    config.learning_rate = 1e-4 + 0.1 * rng.unit();
    config.beta1 = 0.5 + 0.49 * rng.unit();
    config.beta2 = 0.9 + 0.0999 * rng.unit();
    config.weight_decay = 0;

    double theta_ref = 2.0 * rng.unit() - 1.0;
    Eigen::ArrayXd params(1);
    params << theta_ref;
    AdamWState state = AdamWState::zeros(1);
    double m = 0, v = 0;
    const int steps = 5 + static_cast<int>(rng.below(20));
    for (int t = 1; t <= steps; ++t) {
      const double g = 4.0 * rng.unit() - 2.0;
      Eigen::ArrayXd grad(1);
      grad << g;
      adamw_step(params, grad, state, config);

      m = config.beta1 * m + (1 - config.beta1) * g;
      v = config.beta2 * v + (1 - config.beta2) * g * g;
      const double m_hat = m / (1 - std::pow(config.beta1, t));
      const double v_hat = v / (1 - std::pow(config.beta2, t));
      theta_ref -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
      worst = std::max(worst, std::abs(params[0] - theta_ref));
    }
  }
  check.require(worst <= 1e-12,
                "adamw(lambda=0) vs adam worst deviation " + std::to_string(worst));

  // analytic cross-entropy gradient vs central differences
  double worst_rel = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const int L = 2 + static_cast<int>(rng.below(2));  // 2..3 labels
    const int V = 1 + static_cast<int>(rng.below(5));  // 1..5 features
    Eigen::MatrixXd w(L, V);
    Eigen::VectorXd b(L);
    for (int i = 0; i < L; ++i) {
      b[i] = 2.0 * rng.unit() - 1.0;
      for (int j = 0; j < V; ++j) w(i, j) = 2.0 * rng.unit() - 1.0;
    }
    std::vector<SparseVector> xs;
    std::vector<int> ys;
    const int batch = 1 + static_cast<int>(rng.below(4));
    for (int e = 0; e < batch; ++e) {
      SparseVector x;
      for (int j = 0; j < V; ++j)
        if (rng.unit() < 0.7) x.entries.emplace_back(j, 2.0 * rng.unit() - 1.0);
      xs.push_back(x);
      ys.push_back(static_cast<int>(rng.below(L)));
    }
    Eigen::MatrixXd grad_w(L, V);
    Eigen::VectorXd grad_b(L);
    softmax_xent_batch(w, b, xs, ys, &grad_w, &grad_b);

    const double h = 1e-5;
    auto numeric = [&](double* param) {
      const double saved = *param;
      *param = saved + h;
      const double up = softmax_xent_batch(w, b, xs, ys, nullptr, nullptr);
      *param = saved - h;
      const double down = softmax_xent_batch(w, b, xs, ys, nullptr, nullptr);
      *param = saved;
      return (up - down) / (2 * h);
    };
    for (int i = 0; i < L; ++i) {
      const double nb = numeric(&b[i]);
      worst_rel = std::max(worst_rel, std::abs(grad_b[i] - nb) /
                                          std::max({1.0, std::abs(grad_b[i]), std::abs(nb)}));
      for (int j = 0; j < V; ++j) {
        const double nw = numeric(&w(i, j));
        worst_rel = std::max(worst_rel, std::abs(grad_w(i, j) - nw) /
                                            std::max({1.0, std::abs(grad_w(i, j)), std::abs(nw)}));
      }
    }
  }
  check.require(worst_rel <= 1e-5,
                "gradient check worst relative error " + std::to_string(worst_rel));
}

// ---------------------------------------------------------------------------
// 4. Script / transliteration invariants

void criterion_script_invariants(Check& check, Shared&) {
  const std::pair<Lang, Script> brahmic[] = {
      {Lang::HIN, Script::Devanagari}, {Lang::GUJ, Script::Gujarati},
      {Lang::KAN, Script::Kannada},    {Lang::MAL, Script::Malayalam},
      {Lang::TAM, Script::Tamil},      {Lang::TEL, Script::Telugu},
  };
  for (const auto& [lang, script] : brahmic) {
    SplitMix64 rng(substream_seed(9090, std::string("crit4/") + std::string(lang_code(lang))));
    std::size_t bad_before = 0, bad_after = 0, bad_idem = 0, bad_det = 0;
    for (int i = 0; i < 1000; ++i) {
      std::string sentence;
      const int words = 4 + static_cast<int>(rng.below(6));
      for (int w = 0; w < words; ++w) {
        if (w) sentence += ' ';
        sentence += synth::make_word(script, rng);
      }
      const auto before = latin_proportion(sentence);
      if (!before || *before != 0.0) ++bad_before;
      const std::string once = tables().romanize(sentence, script);
      const auto after = latin_proportion(once);
      if (!after || *after != 1.0) ++bad_after;
      if (tables().romanize(once, script) != once) ++bad_idem;
      if (tables().romanize(sentence, script) != once) ++bad_det;
    }
    const std::string code(lang_code(lang));
    check.require(bad_before == 0, code + ": " + std::to_string(bad_before) +
                                       " sentences not fully native before transliteration");
    check.require(bad_after == 0, code + ": " + std::to_string(bad_after) +
                                      " sentences not fully latin after transliteration");
    check.require(bad_idem == 0, code + ": transliteration not idempotent");
    check.require(bad_det == 0, code + ": transliteration not deterministic");
  }
}

// ---------------------------------------------------------------------------
// 5. Language-profile fidelity

void criterion_langid_fidelity(Check& check, Shared&) {
  const std::uint64_t seed = 555;
  std::vector<LanguageProfile> profiles;
  std::map<Lang, synth::SynthLang> langs;
  for (Lang lang : all_langs()) {
    langs.emplace(lang, synth::make_lang(lang, seed));
    SplitMix64 rng(substream_seed(seed, "train/" + std::string(lang_code(lang))));
    std::vector<std::string> texts;
    for (int i = 0; i < 400; ++i)
      texts.push_back(synth::make_sentence(langs.at(lang).words, rng, 6, 10));
    profiles.push_back(build_profile(texts, lang, 300));
  }

  std::size_t correct = 0, total = 0, cross_script_errors = 0;
  for (Lang lang : all_langs()) {
    SplitMix64 rng(substream_seed(seed, "heldout/" + std::string(lang_code(lang))));
    for (int i = 0; i < 500; ++i) {
      std::string sentence;
      do {
        sentence = synth::make_sentence(langs.at(lang).words, rng, 8, 12);
      } while (count_code_points(sentence) < 40);
      const Lang top = detect_language(sentence, profiles).top();
      ++total;
      if (top == lang) ++correct;
      else if (native_script(top) != native_script(lang)) ++cross_script_errors;
    }
  }
  const double accuracy = static_cast<double>(correct) / static_cast<double>(total);
  check.require(accuracy >= 0.95, "top-1 accuracy " + std::to_string(accuracy) + " < 0.95");
  check.require(cross_script_errors == 0,
                std::to_string(cross_script_errors) +
                    " held-out sentences were assigned a different-script language");
}

// ---------------------------------------------------------------------------
// 6. Directional augmentation effect + full fixture run under 5 minutes

double mono_macro(const DatasetSplit& split, const FeatureModel& fm, const std::vector<Label>& labels,
                  std::uint64_t seed) {
  TrainConfig config;
  config.epochs = 4;
  config.batch_size = 16;
  config.eval_every = 20;
  config.learning_rate = 0.01;
  config.seed = seed;
  const ClassifierModel model = train_classifier(split, fm, labels, config);
  std::vector<Label> gold, pred;
  for (const auto& ex : split.test) {
    gold.push_back(ex.label);
    pred.push_back(predict(model, ex.text).label);
  }
  return macro_f1(confusion_matrix(gold, pred, labels));
}

void criterion_augmentation_effect(Check& check, Shared& shared) {
  const std::vector<Lang> langs = {Lang::GUJ, Lang::KAN, Lang::MAL, Lang::TAM};
  std::vector<double> diffs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::map<Lang, std::vector<std::string>> abstracts;
    std::map<Lang, DatasetSplit> splits;
    std::vector<LabeledExample> pooled_train;
    for (Lang lang : langs) {
      const auto sl = synth::make_lang(lang, seed);
      abstracts[lang] = synth::make_abstracts(sl, 120, seed);
      synth::DatasetSpec spec;
      spec.n = 240;
      spec.p_homo = 0.25;
      spec.p_trans = 0.15;
      spec.switch_frac = 0.5;  // minority signal appears half the time romanized
      const auto examples = synth::make_dataset(sl, spec, seed, tables());
      splits[lang] = resample_splits(examples, {0.8, 0.1, 0.1}, substream_seed(seed, "crit6"));
      for (const auto& ex : splits[lang].train) pooled_train.push_back(ex);
    }

    AdaptationCorpus baseline;
    baseline.provenance = Provenance::BASELINE;
    for (const auto& [lang, docs] : abstracts) {
      const std::string tag = "abstract:" + std::string(lang_code(lang));
      for (const auto& doc : docs) baseline.documents.push_back({doc, tag, false});
    }
    mark_partition(baseline, 0.05, substream_seed(seed, "crit6/baseline"));
    const FeatureModel fm_base = fit_feature_model(baseline, 6000);

    const AdaptationCorpus synthetic = synthesize_augmented_corpus(
        abstracts, pooled_train, 0.5, substream_seed(seed, "crit6/synthetic"), tables());
    const FeatureModel fm_syn = fit_feature_model(synthetic, 6000);

    double diff = 0;
    for (Lang lang : langs) {
      const auto labels = label_set(lang);
      const double base = mono_macro(splits[lang], fm_base, labels, seed * 100 + 1);
      const double syn = mono_macro(splits[lang], fm_syn, labels, seed * 100 + 2);
      diff += (syn - base) / static_cast<double>(langs.size());
    }
    diffs.push_back(diff);
  }
  std::sort(diffs.begin(), diffs.end());
  const double median = diffs[diffs.size() / 2];
  check.require(median >= 0.0, "median macro-F1 gain " + std::to_string(median) + " < 0");

  // full fixture pipeline run, timed; its output doubles as run A of criterion 7
  const auto started = std::chrono::steady_clock::now();
  ExperimentConfig config = load_config(kRepoDir / "data" / "fixtures" / "config.json");
  shared.run_a_dir = fresh_dir("scriptmix_accept_run_a");
  config.output_dir = shared.run_a_dir;
  run_experiment(config);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  check.require(elapsed < 300.0,
                "full fixture run took " + std::to_string(elapsed) + "s (limit 300s)");
}

// ---------------------------------------------------------------------------
// 7. Determinism of the full pipeline

void criterion_determinism(Check& check, Shared& shared) {
  ExperimentConfig config = load_config(kRepoDir / "data" / "fixtures" / "config.json");

  if (shared.run_a_dir.empty() || !fs::exists(shared.run_a_dir / "manifest")) {
    shared.run_a_dir = fresh_dir("scriptmix_accept_run_a");
    config.output_dir = shared.run_a_dir;
    run_experiment(config);
  }
  const fs::path run_b = fresh_dir("scriptmix_accept_run_b");
  config.output_dir = run_b;
  run_experiment(config);

  std::vector<fs::path> rel_paths;
  for (const auto& entry : fs::recursive_directory_iterator(shared.run_a_dir))
    if (entry.is_regular_file())
      rel_paths.push_back(fs::relative(entry.path(), shared.run_a_dir));
  std::sort(rel_paths.begin(), rel_paths.end());
  check.require(!rel_paths.empty(), "run A produced no files");

  for (const auto& rel : rel_paths) {
    if (!fs::exists(run_b / rel)) {
      check.require(false, "run B missing " + rel.string());
      continue;
    }
    if (slurp(shared.run_a_dir / rel) != slurp(run_b / rel))
      check.require(false, "byte difference in " + rel.string());
  }
}

// ---------------------------------------------------------------------------
// 8. Statistics replication on the published counts

void criterion_statistics(Check& check, Shared&) {
  std::vector<LabeledExample> eng;
  auto add = [&](std::size_t n, Label label) {
    for (std::size_t i = 0; i < n; ++i)
      eng.push_back({"e" + std::to_string(eng.size()), "text", Lang::ENG, label});
  };
  add(3496, Label::NONE);
  add(221, Label::HOMO);
  add(9, Label::TRANS);
  const auto dist = class_distribution(eng);
  auto round2 = [](double v) { return std::round(v * 100.0) / 100.0; };
  check.require(round2(dist.at(Label::NONE)) == 0.94,
                "none proportion " + std::to_string(dist.at(Label::NONE)));
  check.require(round2(dist.at(Label::HOMO)) == 0.06,
                "homo proportion " + std::to_string(dist.at(Label::HOMO)));
  check.require(round2(dist.at(Label::TRANS)) == 0.00,
                "trans proportion " + std::to_string(dist.at(Label::TRANS)));

  const std::vector<std::pair<Lang, std::size_t>> figure1 = {
      {Lang::KAN, 12220}, {Lang::TEL, 10990}, {Lang::GUJ, 9859}, {Lang::MAL, 4327},
      {Lang::MAR, 4250},  {Lang::ENG, 3956},  {Lang::TAM, 3328}, {Lang::HIN, 2880},
      {Lang::ESP, 1586},  {Lang::TCY, 730},
  };
  std::map<Lang, std::vector<LabeledExample>> datasets;
  for (const auto& [lang, n] : figure1) {
    auto& docs = datasets[lang];
    for (std::size_t i = 0; i < n; ++i)
      docs.push_back({std::string(lang_code(lang)) + std::to_string(i), "x", lang, Label::NONE});
  }
  const auto summary = corpus_summary(datasets);
  check.require(summary.size() == figure1.size(), "summary row count mismatch");
  for (std::size_t i = 0; i < figure1.size() && i < summary.size(); ++i) {
    check.require(summary[i].language == figure1[i].first,
                  "row " + std::to_string(i) + " is " +
                      std::string(lang_code(summary[i].language)) + ", expected " +
                      std::string(lang_code(figure1[i].first)));
    check.require(summary[i].total == figure1[i].second,
                  "count mismatch at row " + std::to_string(i));
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<void(Check&, Shared&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "metric oracle equivalence", 10.0, criterion_metric_oracle},
      {2, "table-2 selection replay", 0.0, criterion_selection_replay},
      {3, "optimizer correctness", 30.0, criterion_optimizer},
      {4, "script/transliteration invariants", 10.0, criterion_script_invariants},
      {5, "language-profile fidelity", 60.0, criterion_langid_fidelity},
      {6, "directional augmentation effect", 0.0, criterion_augmentation_effect},
      {7, "pipeline determinism", 0.0, criterion_determinism},
      {8, "statistics replication", 0.0, criterion_statistics},
  };

  Shared shared;
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto started = std::chrono::steady_clock::now();
    try {
      criterion.fn(check, shared);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (criterion.limit_seconds > 0 && elapsed >= criterion.limit_seconds)
      check.failures.push_back("runtime " + std::to_string(elapsed) + "s exceeds limit " +
                               std::to_string(criterion.limit_seconds) + "s");

    if (check.failures.empty()) {
      std::printf("criterion %d (%s): PASS (%.2fs)\n", criterion.id, criterion.name, elapsed);
    } else {
      ++failed;
      std::printf("criterion %d (%s): FAIL (%.2fs)\n", criterion.id, criterion.name, elapsed);
      for (const auto& failure : check.failures)
        std::printf("    - %s\n", failure.c_str());
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
