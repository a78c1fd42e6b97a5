#include "scriptmix/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "scriptmix/errors.hpp"
#include "scriptmix/rng.hpp"
#include "scriptmix/text.hpp"

namespace scriptmix {

using nlohmann::json;

namespace {

// Sliding-window character n-grams (code points, spaces included) of the
// normalized text, for n in [n_min, n_max].
void for_each_ngram(std::string_view text, int n_min, int n_max,
                    const std::function<void(std::string&&)>& fn) {
  const std::string normalized = normalize_text(text);
  const auto cps = decode_utf8(normalized);
  for (int n = n_min; n <= n_max; ++n) {
    if (cps.size() < static_cast<std::size_t>(n)) continue;
    for (std::size_t i = 0; i + n <= cps.size(); ++i) {
      std::string gram;
      for (int j = 0; j < n; ++j) append_utf8(gram, cps[i + static_cast<std::size_t>(j)]);
      fn(std::move(gram));
    }
  }
}

Eigen::VectorXd stable_softmax(const Eigen::VectorXd& logits) {
  const double shift = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - shift).exp();
  return p / p.sum();
}

json train_config_to_json(const TrainConfig& c) {
  return {
      {"epochs", c.epochs},       {"eval_every", c.eval_every},
      {"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
      {"beta1", c.beta1},         {"beta2", c.beta2},
      {"epsilon", c.epsilon},     {"weight_decay", c.weight_decay},
      {"seed", c.seed},           {"class_weights", c.class_weights},
  };
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.eval_every = j.value("eval_every", c.eval_every);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.weight_decay = j.value("weight_decay", c.weight_decay);
  c.seed = j.value("seed", c.seed);
  c.class_weights = j.value("class_weights", c.class_weights);
  return c;
}

json feature_model_to_json(const FeatureModel& fm) {
  return {
      {"format", "scriptmix.fm/1"},
      {"provenance", provenance_name(fm.provenance)},
      {"version", fm.version},
      {"n_min", fm.n_min},
      {"n_max", fm.n_max},
      {"vocab", fm.vocab},
      {"idf", std::vector<double>(fm.idf.data(), fm.idf.data() + fm.idf.size())},
      {"corpus_train_size", fm.corpus_train_size},
  };
}

FeatureModel feature_model_from_json(const json& j) {
  if (j.value("format", "") != "scriptmix.fm/1")
    throw DataError("unsupported feature model format");
  FeatureModel fm;
  fm.provenance = parse_provenance(j.at("provenance").get<std::string>());
  fm.version = j.at("version").get<std::string>();
  fm.n_min = j.at("n_min").get<int>();
  fm.n_max = j.at("n_max").get<int>();
  fm.vocab = j.at("vocab").get<std::vector<std::string>>();
  const auto idf = j.at("idf").get<std::vector<double>>();
  if (idf.size() != fm.vocab.size()) throw DataError("feature model idf/vocab size mismatch");
  fm.idf = Eigen::Map<const Eigen::VectorXd>(idf.data(), static_cast<Eigen::Index>(idf.size()));
  fm.corpus_train_size = j.at("corpus_train_size").get<std::size_t>();
  fm.index.reserve(fm.vocab.size());
  for (std::size_t i = 0; i < fm.vocab.size(); ++i) fm.index[fm.vocab[i]] = static_cast<int>(i);
  return fm;
}

}  // namespace

FeatureModel fit_feature_model(const AdaptationCorpus& corpus, std::size_t vocab_cap) {
  if (corpus.documents.empty()) throw DataError("fit_feature_model: empty corpus");

  FeatureModel fm;
  fm.provenance = corpus.provenance;

  std::unordered_map<std::string, std::size_t> df;
  std::size_t n_train = 0;
  for (const auto& doc : corpus.documents) {
    if (doc.eval) continue;
    ++n_train;
    std::unordered_set<std::string> seen;
    for_each_ngram(doc.text, fm.n_min, fm.n_max,
                   [&](std::string&& gram) { seen.insert(std::move(gram)); });
    for (const auto& gram : seen) ++df[gram];
  }
  if (n_train == 0) throw DataError("fit_feature_model: corpus has no train documents");
  fm.corpus_train_size = n_train;

  std::vector<std::pair<std::string, std::size_t>> items(df.begin(), df.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (items.size() > vocab_cap) items.resize(vocab_cap);

  fm.vocab.reserve(items.size());
  fm.idf.resize(static_cast<Eigen::Index>(items.size()));
  const double n = static_cast<double>(n_train);
  for (std::size_t i = 0; i < items.size(); ++i) {
    fm.vocab.push_back(items[i].first);
    fm.index[items[i].first] = static_cast<int>(i);
    fm.idf[static_cast<Eigen::Index>(i)] =
        std::log((1.0 + n) / (1.0 + static_cast<double>(items[i].second))) + 1.0;
  }
  fm.version = "tfidf-c" + std::to_string(fm.n_min) + std::to_string(fm.n_max) + "-v" +
               std::to_string(vocab_cap) + "/" + std::string(provenance_name(fm.provenance));
  return fm;
}

SparseVector featurize(std::string_view text, const FeatureModel& fm) {
  std::unordered_map<int, double> tf;
  for_each_ngram(text, fm.n_min, fm.n_max, [&](std::string&& gram) {
    const auto it = fm.index.find(gram);
    if (it != fm.index.end()) tf[it->second] += 1.0;
  });

  SparseVector x;
  x.entries.reserve(tf.size());
  for (const auto& [idx, count] : tf)
    x.entries.emplace_back(idx, count * fm.idf[static_cast<Eigen::Index>(idx)]);
  std::sort(x.entries.begin(), x.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double norm_sq = 0;
  for (const auto& [idx, w] : x.entries) norm_sq += w * w;
  if (norm_sq > 0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [idx, w] : x.entries) w *= inv;
  }
  return x;
}

void validate(const TrainConfig& config) {
  if (config.epochs <= 0 || config.eval_every <= 0 || config.batch_size <= 0 ||
      config.learning_rate <= 0 || config.epsilon <= 0)
    throw TrainError("train config fields must be positive");
  if (config.beta1 <= 0 || config.beta1 >= 1 || config.beta2 <= 0 || config.beta2 >= 1)
    throw TrainError("beta1 and beta2 must lie in (0, 1)");
  if (config.weight_decay < 0) throw TrainError("weight_decay must be non-negative");
}

void adamw_step(Eigen::Ref<Eigen::ArrayXd> params, const Eigen::Ref<const Eigen::ArrayXd>& grads,
                AdamWState& state, const TrainConfig& config) {
  if (params.size() != grads.size() || params.size() != state.m.size() ||
      params.size() != state.v.size())
    throw TrainError("adamw_step: parameter/gradient/state shape mismatch");

  state.t += 1;
  state.m = config.beta1 * state.m + (1.0 - config.beta1) * grads;
  state.v = config.beta2 * state.v + (1.0 - config.beta2) * grads.square();
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
  const Eigen::ArrayXd m_hat = state.m / bc1;
  const Eigen::ArrayXd v_hat = state.v / bc2;
  params -= config.learning_rate *
            (m_hat / (v_hat.sqrt() + config.epsilon) + config.weight_decay * params);
}

double softmax_xent_batch(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                          const std::vector<SparseVector>& xs, const std::vector<int>& ys,
                          Eigen::MatrixXd* grad_w, Eigen::VectorXd* grad_b) {
  if (xs.size() != ys.size() || xs.empty())
    throw TrainError("softmax_xent_batch: batch inputs misaligned or empty");
  const auto L = weights.rows();
  if (grad_w) grad_w->setZero(weights.rows(), weights.cols());
  if (grad_b) grad_b->setZero(L);

  double loss = 0;
  const double inv_batch = 1.0 / static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Eigen::VectorXd logits = bias;
    for (const auto& [idx, w] : xs[i].entries) logits += weights.col(idx) * w;
    const Eigen::VectorXd p = stable_softmax(logits);
    loss -= std::log(std::max(p[ys[i]], 1e-300));
    if (grad_w || grad_b) {
      Eigen::VectorXd d = p;
      d[ys[i]] -= 1.0;
      d *= inv_batch;
      if (grad_b) *grad_b += d;
      if (grad_w)
        for (const auto& [idx, w] : xs[i].entries) grad_w->col(idx) += d * w;
    }
  }
  return loss * inv_batch;
}

ClassifierModel train_classifier(const DatasetSplit& split, const FeatureModel& fm,
                                 const std::vector<Label>& labels, const TrainConfig& config) {
  validate(config);
  if (split.train.empty() || split.validation.empty())
    throw TrainError("train_classifier: train and validation parts must be nonempty");

  std::unordered_map<int, int> label_index;
  for (std::size_t i = 0; i < labels.size(); ++i)
    label_index[static_cast<int>(labels[i])] = static_cast<int>(i);
  auto index_of = [&](const LabeledExample& ex) {
    const auto it = label_index.find(static_cast<int>(ex.label));
    if (it == label_index.end())
      throw TrainError("train_classifier: example label outside the model label set");
    return it->second;
  };

  const auto L = static_cast<Eigen::Index>(labels.size());
  const auto V = static_cast<Eigen::Index>(fm.vocab.size());

  std::vector<SparseVector> train_x, val_x;
  std::vector<int> train_y, val_y;
  train_x.reserve(split.train.size());
  train_y.reserve(split.train.size());
  for (const auto& ex : split.train) {
    train_x.push_back(featurize(ex.text, fm));
    train_y.push_back(index_of(ex));
  }
  val_x.reserve(split.validation.size());
  val_y.reserve(split.validation.size());
  for (const auto& ex : split.validation) {
    val_x.push_back(featurize(ex.text, fm));
    val_y.push_back(index_of(ex));
  }

  ClassifierModel model;
  model.feature_model = fm;
  model.labels = labels;
  model.config = config;
  model.version = "linclf/1";

  // Zero initialization keeps the convex training fully deterministic.
  Eigen::ArrayXd params = Eigen::ArrayXd::Zero(L * V + L);
  Eigen::Map<Eigen::MatrixXd> w_map(params.data(), L, V);
  Eigen::Map<Eigen::VectorXd> b_map(params.data() + L * V, L);
  AdamWState state = AdamWState::zeros(params.size());

  // Optional inverse-frequency class weighting, off by default.
  std::vector<double> example_weight(train_x.size(), 1.0);
  if (config.class_weights) {
    std::vector<double> counts(labels.size(), 0.0);
    for (int y : train_y) counts[static_cast<std::size_t>(y)] += 1.0;
    const double n = static_cast<double>(train_y.size());
    for (std::size_t i = 0; i < train_x.size(); ++i) {
      const double c = counts[static_cast<std::size_t>(train_y[i])];
      example_weight[i] = c > 0 ? n / (static_cast<double>(labels.size()) * c) : 0.0;
    }
  }

  Eigen::MatrixXd grad_w(L, V);
  Eigen::VectorXd grad_b(L);
  auto eval_loss = [&](const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
    return softmax_xent_batch(w, b, val_x, val_y, nullptr, nullptr);
  };

  const long steps_per_epoch =
      static_cast<long>((train_x.size() + static_cast<std::size_t>(config.batch_size) - 1) /
                        static_cast<std::size_t>(config.batch_size));
  const long total_steps = steps_per_epoch * config.epochs;

  long step = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  Eigen::ArrayXd best_params = params;
  auto record_eval = [&]() {
    const double loss = eval_loss(w_map, b_map);
    model.training_log.emplace_back(step, loss);
    if (loss < best_loss) {
      best_loss = loss;
      best_params = params;
      model.best_step = step;
    }
  };

  std::vector<std::size_t> order(train_x.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    SplitMix64 rng(substream_seed(config.seed, "shuffle/epoch" + std::to_string(epoch)));
    seeded_shuffle(order, rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      if (!config.class_weights) {
        std::vector<SparseVector> batch_x;
        std::vector<int> batch_y;
        batch_x.reserve(end - start);
        batch_y.reserve(end - start);
        for (std::size_t i = start; i < end; ++i) {
          batch_x.push_back(train_x[order[i]]);
          batch_y.push_back(train_y[order[i]]);
        }
        softmax_xent_batch(w_map, b_map, batch_x, batch_y, &grad_w, &grad_b);
      } else {
        // Same gradient with per-example inverse-frequency weights folded in.
        grad_w.setZero();
        grad_b.setZero();
        const double inv = 1.0 / static_cast<double>(end - start);
        for (std::size_t i = start; i < end; ++i) {
          Eigen::VectorXd logits = b_map;
          for (const auto& [idx, w] : train_x[order[i]].entries)
            logits += w_map.col(idx) * w;
          Eigen::VectorXd d = stable_softmax(logits);
          d[train_y[order[i]]] -= 1.0;
          d *= inv * example_weight[order[i]];
          grad_b += d;
          for (const auto& [idx, w] : train_x[order[i]].entries) grad_w.col(idx) += d * w;
        }
      }
      Eigen::ArrayXd grads(L * V + L);
      Eigen::Map<Eigen::MatrixXd>(grads.data(), L, V) = grad_w;
      Eigen::Map<Eigen::VectorXd>(grads.data() + L * V, L) = grad_b;
      adamw_step(params, grads, state, config);
      ++step;
      if (step % config.eval_every == 0) record_eval();
    }
  }
  if (model.training_log.empty() || model.training_log.back().first != step) record_eval();
  if (config.eval_every > total_steps)
    model.warnings.push_back("eval_every " + std::to_string(config.eval_every) +
                             " exceeds total steps " + std::to_string(total_steps) +
                             "; single final evaluation");

  Eigen::Map<Eigen::MatrixXd> best_w(best_params.data(), L, V);
  Eigen::Map<Eigen::VectorXd> best_b(best_params.data() + L * V, L);
  model.weights = best_w;
  model.bias = best_b;
  return model;
}

Prediction predict(const ClassifierModel& model, std::string_view text) {
  const SparseVector x = featurize(text, model.feature_model);
  Eigen::VectorXd logits = model.bias;
  for (const auto& [idx, w] : x.entries) logits += model.weights.col(idx) * w;

  Prediction pred;
  pred.probabilities = stable_softmax(logits);
  pred.oov = x.empty();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < pred.probabilities.size(); ++i)
    if (pred.probabilities[i] > pred.probabilities[best]) best = i;
  pred.label = model.labels[static_cast<std::size_t>(best)];
  return pred;
}

void save_feature_model(const FeatureModel& fm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write feature model: " + path.string());
  out << feature_model_to_json(fm).dump(2) << "\n";
}

FeatureModel load_feature_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature model: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("corrupt feature model " + path.string() + ": " + e.what());
  }
  try {
    return feature_model_from_json(j);
  } catch (const json::exception& e) {
    throw DataError("corrupt feature model " + path.string() + ": " + e.what());
  }
}

void save_classifier(const ClassifierModel& model, const std::filesystem::path& path) {
  json weights = json::array();
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.weights.cols(); ++c) row.push_back(model.weights(r, c));
    weights.push_back(std::move(row));
  }
  json log = json::array();
  for (const auto& [step, loss] : model.training_log) log.push_back(json::array({step, loss}));
  std::vector<std::string> label_names;
  label_names.reserve(model.labels.size());
  for (Label l : model.labels) label_names.emplace_back(label_name(l));

  const json j = {
      {"format", "scriptmix.clf/1"},
      {"version", model.version},
      {"labels", label_names},
      {"weights", weights},
      {"bias", std::vector<double>(model.bias.data(), model.bias.data() + model.bias.size())},
      {"training_log", log},
      {"best_step", model.best_step},
      {"warnings", model.warnings},
      {"config", train_config_to_json(model.config)},
      {"feature_model", feature_model_to_json(model.feature_model)},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write classifier: " + path.string());
  out << j.dump(2) << "\n";
}

ClassifierModel load_classifier(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open classifier: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("corrupt classifier " + path.string() + ": " + e.what());
  }
  try {
    if (j.value("format", "") != "scriptmix.clf/1")
      throw DataError("unsupported classifier format in " + path.string());
    ClassifierModel model;
    model.version = j.at("version").get<std::string>();
    for (const auto& name : j.at("labels")) model.labels.push_back(parse_label(name.get<std::string>()));
    model.feature_model = feature_model_from_json(j.at("feature_model"));
    const auto& weights = j.at("weights");
    const auto L = static_cast<Eigen::Index>(model.labels.size());
    const auto V = static_cast<Eigen::Index>(model.feature_model.vocab.size());
    if (static_cast<Eigen::Index>(weights.size()) != L)
      throw DataError("classifier weight row count does not match labels in " + path.string());
    model.weights.resize(L, V);
    for (Eigen::Index r = 0; r < L; ++r) {
      const auto row = weights[static_cast<std::size_t>(r)].get<std::vector<double>>();
      if (static_cast<Eigen::Index>(row.size()) != V)
        throw DataError("classifier weight column count mismatch in " + path.string());
      for (Eigen::Index c = 0; c < V; ++c) model.weights(r, c) = row[static_cast<std::size_t>(c)];
    }
    const auto bias = j.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(bias.size()) != L)
      throw DataError("classifier bias size mismatch in " + path.string());
    model.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), L);
    for (const auto& entry : j.at("training_log"))
      model.training_log.emplace_back(entry.at(0).get<long>(), entry.at(1).get<double>());
    model.best_step = j.at("best_step").get<long>();
    model.warnings = j.value("warnings", std::vector<std::string>{});
    model.config = train_config_from_json(j.at("config"));
    return model;
  } catch (const json::exception& e) {
    throw DataError("corrupt classifier " + path.string() + ": " + e.what());
  }
}

}  // namespace scriptmix
