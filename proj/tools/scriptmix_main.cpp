#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scriptmix/errors.hpp"
#include "scriptmix/pipeline.hpp"

namespace {

using scriptmix::ExperimentConfig;

struct CommonOpts {
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> languages;
  std::vector<std::string> variants;
  std::vector<std::string> scopes;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double sample_fraction = -1;
  long vocab_cap = -1;
  long profile_k = -1;
  double min_margin = -1;
  long min_length = -1;
  long max_docs = -1;
  long epochs = -1;
  long batch_size = -1;
  long eval_every = -1;
  double learning_rate = -1;
  double weight_decay = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "experiment config file (JSON)")
      ->required();
  cmd->add_option("-o,--output-dir", opts.output_dir, "override output directory");
  cmd->add_option("--languages", opts.languages, "restrict to these language codes")
      ->delimiter(',');
  cmd->add_option("--variants", opts.variants, "restrict to these corpus variants")
      ->delimiter(',');
  cmd->add_option("--scopes", opts.scopes, "restrict to mono/multi")->delimiter(',');
  cmd->add_option_function<std::uint64_t>(
         "--seed", [&opts](const std::uint64_t& v) { opts.seed = v; opts.seed_set = true; },
         "override the root seed");
  cmd->add_option("--sample-fraction", opts.sample_fraction,
                  "fraction of abstracts to transliterate");
  cmd->add_option("--vocab-cap", opts.vocab_cap, "feature vocabulary cap");
  cmd->add_option("--profile-k", opts.profile_k, "language profile size");
  cmd->add_option("--min-margin", opts.min_margin, "mining margin threshold");
  cmd->add_option("--min-length", opts.min_length, "mining length threshold (code points)");
  cmd->add_option("--max-docs", opts.max_docs, "mined documents per language (0 = unlimited)");
  cmd->add_option("--epochs", opts.epochs, "training epochs");
  cmd->add_option("--batch-size", opts.batch_size, "mini-batch size");
  cmd->add_option("--eval-every", opts.eval_every, "evaluation interval in steps");
  cmd->add_option("--learning-rate", opts.learning_rate, "AdamW learning rate");
  cmd->add_option("--weight-decay", opts.weight_decay, "AdamW decoupled weight decay");
}

ExperimentConfig make_config(const CommonOpts& opts) {
  ExperimentConfig config = scriptmix::load_config(opts.config_path);
  if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
  if (opts.seed_set) config.seed = opts.seed;
  if (!opts.languages.empty()) {
    config.languages.clear();
    for (const auto& code : opts.languages) config.languages.push_back(scriptmix::parse_lang(code));
  }
  if (!opts.variants.empty()) {
    config.variants.clear();
    for (const auto& name : opts.variants)
      config.variants.push_back(scriptmix::parse_provenance(name));
  }
  if (!opts.scopes.empty()) {
    config.scopes.clear();
    for (const auto& name : opts.scopes) config.scopes.push_back(scriptmix::parse_scope(name));
  }
  if (opts.sample_fraction >= 0) config.sample_fraction = opts.sample_fraction;
  if (opts.vocab_cap >= 0) config.vocab_cap = static_cast<std::size_t>(opts.vocab_cap);
  if (opts.profile_k >= 0) config.profile_k = static_cast<std::size_t>(opts.profile_k);
  if (opts.min_margin >= 0) config.min_margin = opts.min_margin;
  if (opts.min_length >= 0) config.min_length = static_cast<std::size_t>(opts.min_length);
  if (opts.max_docs >= 0) config.max_docs_per_language = static_cast<std::size_t>(opts.max_docs);
  if (opts.epochs >= 0) config.train.epochs = static_cast<int>(opts.epochs);
  if (opts.batch_size >= 0) config.train.batch_size = static_cast<int>(opts.batch_size);
  if (opts.eval_every >= 0) config.train.eval_every = static_cast<int>(opts.eval_every);
  if (opts.learning_rate >= 0) config.train.learning_rate = opts.learning_rate;
  if (opts.weight_decay >= 0) config.train.weight_decay = opts.weight_decay;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scriptmix: script-switch aware multilingual text classification pipeline"};
  app.require_subcommand(1);

  CommonOpts stats_opts, augment_opts, mine_opts, adapt_opts, train_opts, evaluate_opts,
      select_opts, run_opts;

  add_common(app.add_subcommand("stats", "corpus, class and script-mix reports"), stats_opts);
  add_common(app.add_subcommand("augment", "build baseline and synthetic adaptation corpora"),
             augment_opts);
  add_common(app.add_subcommand("mine", "mine organic script-switched documents"), mine_opts);
  add_common(app.add_subcommand("adapt", "fit feature models on the adaptation corpora"),
             adapt_opts);
  add_common(app.add_subcommand("train", "train the classifier grid"), train_opts);
  add_common(app.add_subcommand("evaluate", "evaluate every grid cell on the test split"),
             evaluate_opts);
  add_common(app.add_subcommand("select", "pick per-language winners and nominate a system"),
             select_opts);
  add_common(app.add_subcommand("run", "full pipeline: stats through select"), run_opts);

  auto* predict_cmd = app.add_subcommand("predict", "label one text per input line");
  std::string model_path, input_path, predict_out;
  predict_cmd->add_option("-m,--model", model_path, "classifier file")->required();
  predict_cmd->add_option("-i,--input", input_path, "input file, one text per line")->required();
  predict_cmd->add_option("-o,--output", predict_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("stats")) {
      scriptmix::run_stats(make_config(stats_opts));
    } else if (app.got_subcommand("augment")) {
      scriptmix::stage_augment(make_config(augment_opts));
    } else if (app.got_subcommand("mine")) {
      scriptmix::stage_mine(make_config(mine_opts));
    } else if (app.got_subcommand("adapt")) {
      scriptmix::stage_adapt(make_config(adapt_opts));
    } else if (app.got_subcommand("train")) {
      scriptmix::stage_train(make_config(train_opts));
    } else if (app.got_subcommand("evaluate")) {
      scriptmix::stage_evaluate(make_config(evaluate_opts));
    } else if (app.got_subcommand("select")) {
      const auto result = scriptmix::stage_select(make_config(select_opts));
      std::cout << "nominated: " << scriptmix::provenance_name(result.nominated.variant) << "/"
                << scriptmix::scope_name(result.nominated.scope) << "\n";
    } else if (app.got_subcommand("run")) {
      const auto config = make_config(run_opts);
      const auto result = scriptmix::run_experiment(config);
      std::cout << "nominated: " << scriptmix::provenance_name(result.nominated.variant) << "/"
                << scriptmix::scope_name(result.nominated.scope) << "\n"
                << "reports written to " << (config.output_dir / "reports").string() << "\n";
    } else if (app.got_subcommand("predict")) {
      if (predict_out.empty()) {
        scriptmix::run_predict(model_path, input_path, std::cout);
      } else {
        std::ofstream out(predict_out, std::ios::binary);
        if (!out) throw scriptmix::DataError("cannot write output file: " + predict_out);
        scriptmix::run_predict(model_path, input_path, out);
      }
    }
  } catch (const scriptmix::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const scriptmix::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const scriptmix::TrainError& e) {
    std::cerr << "training error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
