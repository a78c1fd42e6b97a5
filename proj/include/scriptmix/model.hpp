#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scriptmix/corpus.hpp"
#include "scriptmix/translit.hpp"

namespace scriptmix {

// TF-IDF character n-gram (n = 2..4) vocabulary fitted on an adaptation
// corpus. idf = ln((1 + N) / (1 + df)) + 1 over the corpus's train partition.
struct FeatureModel {
  Provenance provenance = Provenance::BASELINE;
  std::string version;
  int n_min = 2;
  int n_max = 4;
  std::vector<std::string> vocab;  // index = position
  std::unordered_map<std::string, int> index;
  Eigen::VectorXd idf;
  std::size_t corpus_train_size = 0;
};

FeatureModel fit_feature_model(const AdaptationCorpus& corpus, std::size_t vocab_cap);

// Sorted by index, L2-normalized when nonzero.
struct SparseVector {
  std::vector<std::pair<int, double>> entries;
  bool empty() const { return entries.empty(); }
};

SparseVector featurize(std::string_view text, const FeatureModel& fm);

struct TrainConfig {
  int epochs = 4;
  int eval_every = 500;
  int batch_size = 32;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
  std::uint64_t seed = 0;
  bool class_weights = false;  // off by default: no imbalance countermeasures
};

void validate(const TrainConfig& config);

struct AdamWState {
  Eigen::ArrayXd m;
  Eigen::ArrayXd v;
  long t = 0;

  static AdamWState zeros(Eigen::Index n) { return {Eigen::ArrayXd::Zero(n), Eigen::ArrayXd::Zero(n), 0}; }
};

// One decoupled-weight-decay Adam update:
//   t <- t+1;  m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
//   theta <- theta - lr (m_hat / (sqrt(v_hat) + eps) + lambda theta)
void adamw_step(Eigen::Ref<Eigen::ArrayXd> params, const Eigen::Ref<const Eigen::ArrayXd>& grads,
                AdamWState& state, const TrainConfig& config);

struct ClassifierModel {
  FeatureModel feature_model;
  Eigen::MatrixXd weights;  // L x V
  Eigen::VectorXd bias;     // L
  std::vector<Label> labels;
  std::vector<std::pair<long, double>> training_log;  // (step, eval_loss)
  long best_step = 0;
  std::vector<std::string> warnings;
  TrainConfig config;
  std::string version;
};

// Softmax probabilities and mean cross-entropy gradient for one mini-batch.
// Exposed so tests can check the analytic gradient against finite differences.
double softmax_xent_batch(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                          const std::vector<SparseVector>& xs, const std::vector<int>& ys,
                          Eigen::MatrixXd* grad_w, Eigen::VectorXd* grad_b);

// Mini-batch AdamW training with periodic validation evaluation; returns the
// parameters recorded at the step with the lowest validation loss.
ClassifierModel train_classifier(const DatasetSplit& split, const FeatureModel& fm,
                                 const std::vector<Label>& labels, const TrainConfig& config);

struct Prediction {
  Label label = Label::NONE;
  Eigen::VectorXd probabilities;  // aligned with model.labels
  bool oov = false;               // text featurized to an empty vector
};

Prediction predict(const ClassifierModel& model, std::string_view text);

void save_feature_model(const FeatureModel& fm, const std::filesystem::path& path);
FeatureModel load_feature_model(const std::filesystem::path& path);
void save_classifier(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel load_classifier(const std::filesystem::path& path);

}  // namespace scriptmix
