#include "scriptmix/eval.hpp"

#include <algorithm>
#include <set>

#include "scriptmix/errors.hpp"

namespace scriptmix {

std::string_view scope_name(Scope scope) { return scope == Scope::MONO ? "mono" : "multi"; }

Scope parse_scope(std::string_view name) {
  if (name == "mono") return Scope::MONO;
  if (name == "multi") return Scope::MULTI;
  throw ConfigError("unknown scope: " + std::string(name));
}

ConfusionMatrix confusion_matrix(const std::vector<Label>& gold, const std::vector<Label>& pred,
                                 const std::vector<Label>& labels) {
  if (gold.size() != pred.size())
    throw DataError("confusion_matrix: gold and predicted lengths differ");
  if (gold.empty()) throw DataError("confusion_matrix: empty inputs");

  ConfusionMatrix cm;
  cm.labels = labels;
  const auto L = static_cast<Eigen::Index>(labels.size());
  cm.counts = Eigen::MatrixXi::Zero(L, L);
  std::map<Label, Eigen::Index> index;
  for (Eigen::Index i = 0; i < L; ++i) index[labels[static_cast<std::size_t>(i)]] = i;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = index.find(gold[i]);
    const auto p = index.find(pred[i]);
    if (g == index.end() || p == index.end())
      throw DataError("confusion_matrix: label outside the declared label set");
    cm.counts(g->second, p->second) += 1;
  }
  return cm;
}

ConfusionMatrix confusion_matrix(const std::vector<Label>& gold, const std::vector<Label>& pred) {
  std::set<Label> seen(gold.begin(), gold.end());
  seen.insert(pred.begin(), pred.end());
  return confusion_matrix(gold, pred, std::vector<Label>(seen.begin(), seen.end()));
}

std::vector<LabelScores> per_label_scores(const ConfusionMatrix& cm) {
  const Eigen::Index L = cm.counts.rows();
  std::vector<LabelScores> scores(static_cast<std::size_t>(L));
  for (Eigen::Index i = 0; i < L; ++i) {
    const double tp = cm.counts(i, i);
    const double gold_total = cm.counts.row(i).sum();
    const double pred_total = cm.counts.col(i).sum();
    LabelScores& s = scores[static_cast<std::size_t>(i)];
    s.support = static_cast<std::size_t>(gold_total);
    s.precision = pred_total > 0 ? tp / pred_total : 0.0;
    s.recall = gold_total > 0 ? tp / gold_total : 0.0;
    s.f1 = (s.precision + s.recall) > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                                        : 0.0;
  }
  return scores;
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("macro_f1: empty confusion matrix");
  const Eigen::Index L = cm.counts.rows();
  double sum = 0;
  for (Eigen::Index i = 0; i < L; ++i) {
    const double tp = cm.counts(i, i);
    const double gold_total = cm.counts.row(i).sum();
    const double pred_total = cm.counts.col(i).sum();
    const double p = pred_total > 0 ? tp / pred_total : 0.0;
    const double r = gold_total > 0 ? tp / gold_total : 0.0;
    sum += (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  return sum / static_cast<double>(L);
}

double weighted_macro_f1(const ConfusionMatrix& cm) {
  const auto total = static_cast<double>(cm.total());
  if (total == 0) throw DataError("weighted_macro_f1: empty confusion matrix");
  const Eigen::Index L = cm.counts.rows();
  double sum = 0;
  for (Eigen::Index i = 0; i < L; ++i) {
    const double tp = cm.counts(i, i);
    const double gold_total = cm.counts.row(i).sum();
    const double pred_total = cm.counts.col(i).sum();
    const double p = pred_total > 0 ? tp / pred_total : 0.0;
    const double r = gold_total > 0 ? tp / gold_total : 0.0;
    const double f1 = (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
    sum += (gold_total / total) * f1;
  }
  return sum;
}

SelectionResult select_best(const SelectionGrid& grid) {
  std::vector<ConfigKey> configs;
  for (Provenance variant : grid.variants)
    for (Scope scope : grid.scopes) configs.push_back({variant, scope});
  if (configs.empty()) throw ConfigError("select_best: no variants/scopes declared");
  if (grid.languages.empty()) throw ConfigError("select_best: no languages declared");

  for (Lang lang : grid.languages)
    for (const ConfigKey& config : configs)
      if (!grid.cells.count({config.variant, config.scope, lang}))
        throw DataError("select_best: missing grid cell " +
                        std::string(provenance_name(config.variant)) + "/" +
                        std::string(scope_name(config.scope)) + "/" +
                        std::string(lang_code(lang)));

  SelectionResult result;
  for (const ConfigKey& config : configs) {
    result.mean_macro[config] = 0;
    result.win_counts[config] = 0;
  }

  for (Lang lang : grid.languages) {
    double best = -1;
    for (const ConfigKey& config : configs) {
      const double macro = grid.cells.at({config.variant, config.scope, lang}).macro;
      result.mean_macro[config] += macro;
      best = std::max(best, macro);
    }
    for (const ConfigKey& config : configs)
      if (grid.cells.at({config.variant, config.scope, lang}).macro == best) {
        result.winners[lang].push_back(config);
        ++result.win_counts[config];
      }
  }
  const auto n_langs = static_cast<double>(grid.languages.size());
  for (auto& [config, mean] : result.mean_macro) mean /= n_langs;

  // Nomination: highest mean macro F1 across languages, then most per-language
  // wins, then the fixed variant/scope order.
  result.nominated = configs.front();
  for (const ConfigKey& config : configs) {
    const double mean = result.mean_macro[config];
    const double best_mean = result.mean_macro[result.nominated];
    if (mean > best_mean ||
        (mean == best_mean && result.win_counts[config] > result.win_counts[result.nominated]))
      result.nominated = config;
  }
  return result;
}

}  // namespace scriptmix
