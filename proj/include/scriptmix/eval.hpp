#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "scriptmix/corpus.hpp"
#include "scriptmix/translit.hpp"

namespace scriptmix {

enum class Scope { MONO, MULTI };

std::string_view scope_name(Scope scope);  // "mono", "multi"
Scope parse_scope(std::string_view name);

struct ConfusionMatrix {
  std::vector<Label> labels;
  Eigen::MatrixXi counts;  // rows = gold, columns = predicted

  std::size_t total() const { return static_cast<std::size_t>(counts.sum()); }
};

// counts[g][p] = #{i : gold_i = g, pred_i = p} over the given label set.
ConfusionMatrix confusion_matrix(const std::vector<Label>& gold, const std::vector<Label>& pred,
                                 const std::vector<Label>& labels);
// Label set inferred from the union of gold and pred, in Label enum order.
ConfusionMatrix confusion_matrix(const std::vector<Label>& gold, const std::vector<Label>& pred);

struct LabelScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;
};

std::vector<LabelScores> per_label_scores(const ConfusionMatrix& cm);

// Unweighted mean of per-label F1. Labels with a zero denominator anywhere
// contribute F1 = 0 and zero-support labels stay in the mean.
double macro_f1(const ConfusionMatrix& cm);

// Per-label F1 weighted by gold support / total.
double weighted_macro_f1(const ConfusionMatrix& cm);

struct EvaluationReport {
  Lang language = Lang::ENG;
  Provenance variant = Provenance::BASELINE;
  Scope scope = Scope::MONO;
  std::uint64_t seed = 0;
  std::string model_version;
  ConfusionMatrix cm;
  std::vector<LabelScores> per_label;
  double macro = 0;
  double weighted = 0;
};

struct CellKey {
  Provenance variant;
  Scope scope;
  Lang language;
  auto operator<=>(const CellKey&) const = default;
};

struct SelectionGrid {
  std::vector<Lang> languages;
  std::vector<Provenance> variants;
  std::vector<Scope> scopes;
  std::map<CellKey, EvaluationReport> cells;
};

struct ConfigKey {
  Provenance variant;
  Scope scope;
  auto operator<=>(const ConfigKey&) const = default;
};

struct SelectionResult {
  std::map<Lang, std::vector<ConfigKey>> winners;  // cells achieving the row max
  std::map<ConfigKey, double> mean_macro;          // mean macro F1 across languages
  std::map<ConfigKey, std::size_t> win_counts;
  ConfigKey nominated{Provenance::BASELINE, Scope::MONO};
};

// Per-language winners are the argmax cells by macro F1 (ties preserved).
// The nominated configuration maximizes mean macro F1 across languages,
// breaking ties by win count, then by fixed variant/scope order.
SelectionResult select_best(const SelectionGrid& grid);

}  // namespace scriptmix
