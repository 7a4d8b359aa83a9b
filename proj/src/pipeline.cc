// Copyright 2026 The framelstm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "framelstm/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "framelstm/checkpoint.h"
#include "framelstm/neural/autodiff.h"
#include "framelstm/reference_model.h"

namespace framelstm {

using ordered_json = nlohmann::ordered_json;

void TrainConfig::Validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (batch_size < 1) {
    throw std::invalid_argument("batch_size must be at least 1");
  }
  if (patience < 0) throw std::invalid_argument("patience must be >= 0");
  if (folds < 2) throw std::invalid_argument("folds must be at least 2");
  if (!(adam.learning_rate > 0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (clip_norm < 0) throw std::invalid_argument("clip_norm must be >= 0");
}

namespace {

struct Example {
  Eigen::MatrixXd embedded;
  std::vector<std::optional<std::size_t>> rows;  // table index per token
  GoldLabels gold;
};

std::vector<Example> Prepare(const Model &model, const EmbeddingTable &table,
                             std::span<const AnnotatedSentence> sentences) {
  std::vector<Example> out;
  out.reserve(sentences.size());
  for (const auto &s : sentences) {
    Example ex{EmbedSentence(table, s.tokens), {},
               MakeGoldLabels(s, model.vocab(), model.config().variant)};
    for (const auto &token : s.tokens) ex.rows.push_back(table.Find(token));
    out.push_back(std::move(ex));
  }
  return out;
}

// Embedding vectors under fine-tuning, one d x 1 parameter per table row
// that occurs in the training data.
class TunedEmbeddings {
 public:
  TunedEmbeddings(const EmbeddingTable &table,
                  std::span<const Example> examples)
      : unk_(table.unk()) {
    for (const auto &ex : examples) {
      for (const auto &row : ex.rows) {
        if (row && !params_.Find(Name(*row))) {
          params_.Add(Name(*row), table.vector(*row));
          rows_.push_back(*row);
        }
      }
    }
  }

  neural::ParameterSet &params() { return params_; }

  std::vector<neural::Var> Columns(neural::Tape &tape,
                                   const Example &ex) const {
    std::vector<neural::Var> columns;
    for (Eigen::Index t = 0; t < ex.embedded.rows(); ++t) {
      const auto *p = ex.rows[t] ? params_.Find(Name(*ex.rows[t])) : nullptr;
      columns.push_back(p ? tape.Param(*p)
                          : tape.Constant(ex.embedded.row(t).transpose()));
    }
    return columns;
  }

  void WriteBack(EmbeddingTable &table) const {
    for (std::size_t row : rows_) {
      table.set_vector(row, params_.Get(Name(row)).value.col(0));
    }
  }

 private:
  static std::string Name(std::size_t row) {
    return "embedding." + std::to_string(row);
  }

  Eigen::VectorXd unk_;
  neural::ParameterSet params_;
  std::vector<std::size_t> rows_;
};

neural::Var ExampleGraphLoss(neural::Tape &tape, const Model &model,
                             const Example &ex, const TunedEmbeddings *tuned,
                             Rng *dropout_rng) {
  auto graph =
      tuned ? model.Forward(tape, tuned->Columns(tape, ex), &ex.gold,
                            Mode::kTrain, dropout_rng)
            : model.Forward(tape, ex.embedded, &ex.gold, Mode::kTrain,
                            dropout_rng);
  return JointLoss(graph, ex.gold);
}

double MeanExampleLoss(const Model &model, std::span<const Example> examples,
                       const TunedEmbeddings *tuned = nullptr) {
  double total = 0.0;
  for (const auto &ex : examples) {
    neural::Tape tape;
    total += ExampleGraphLoss(tape, model, ex, tuned, nullptr).scalar();
  }
  return examples.empty() ? 0.0 : total / static_cast<double>(examples.size());
}

struct Trainable {
  neural::ParameterSet *params;
  neural::AdamState adam;
};

// Gradients from the tape go to whichever set owns the parameter.
void Accumulate(const neural::Tape &tape, std::vector<Trainable> &sets) {
  for (const auto &[param, grad] : tape.ParameterGradients()) {
    neural::Parameter *owner = nullptr;
    for (auto &set : sets) {
      const neural::Parameter *p = set.params->Find(param->name);
      if (p == param) owner = const_cast<neural::Parameter *>(p);
    }
    if (!owner) {
      throw std::invalid_argument("tape gradient for foreign parameter '" +
                                  param->name + "'");
    }
    owner->grad += grad;
  }
}

// Averages over the batch, clips the global norm, then updates every set.
void Step(std::vector<Trainable> &sets, const TrainConfig &config,
          std::size_t batch) {
  double squared = 0.0;
  for (auto &set : sets) {
    set.params->ScaleGrad(1.0 / static_cast<double>(batch));
    for (const auto &p : *set.params) squared += p.grad.squaredNorm();
  }
  const double norm = std::sqrt(squared);
  const bool clip = config.clip_norm > 0 && norm > config.clip_norm;
  for (auto &set : sets) {
    if (clip) set.params->ScaleGrad(config.clip_norm / norm);
    if (config.optimizer == OptimizerKind::kAdam) {
      neural::AdamStep(*set.params, set.adam);
    } else {
      neural::SgdStep(*set.params, config.adam.learning_rate);
    }
  }
}

}  // namespace

EmbeddingTable CorpusEmbeddings(std::span<const AnnotatedSentence> corpus,
                                int dim) {
  std::vector<std::string> tokens;
  for (const auto &s : corpus) {
    tokens.insert(tokens.end(), s.tokens.begin(), s.tokens.end());
  }
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return HashedEmbeddings(tokens, dim, kHashedEmbeddingSeed);
}

neural::GradCheckResult CheckModelGradients(
    Model &model, const EmbeddingTable &table,
    const AnnotatedSentence &sentence,
    const neural::GradCheckOptions &options) {
  const Eigen::MatrixXd embedded = EmbedSentence(table, sentence.tokens);
  const GoldLabels gold =
      MakeGoldLabels(sentence, model.vocab(), model.config().variant);
  auto loss = [&](neural::Tape &tape) {
    return JointLoss(model.Forward(tape, embedded, &gold, Mode::kTrain),
                     gold);
  };
  const neural::Matrix<long double> extended =
      embedded.cast<long double>();
  auto numeric = [&]() {
    return ReferenceLoss<long double>(model, extended, gold);
  };
  return neural::GradCheck(loss, numeric, model.params(), options);
}

double MeanLoss(const Model &model, const EmbeddingTable &table,
                std::span<const AnnotatedSentence> sentences) {
  auto examples = Prepare(model, table, sentences);
  return MeanExampleLoss(model, examples);
}

namespace {

TrainResult TrainImpl(Model &model, const EmbeddingTable &table,
                      std::span<const AnnotatedSentence> train,
                      const TrainConfig &config, EmbeddingTable *tune) {
  config.Validate();
  if (train.empty()) throw std::invalid_argument("empty training set");

  Rng rng(config.seed);
  std::vector<Example> all = Prepare(model, table, train);
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Example> heldout;
  const auto heldout_size = static_cast<std::size_t>(
      std::floor(kHeldOutFraction * static_cast<double>(all.size())));
  const bool early_stopping = config.patience > 0 && heldout_size > 0;
  if (early_stopping) {
    Shuffle(order, rng);
    for (std::size_t i = 0; i < heldout_size; ++i) {
      heldout.push_back(all[order[i]]);
    }
    order.erase(order.begin(), order.begin() + heldout_size);
    std::sort(order.begin(), order.end());
  }

  std::optional<TunedEmbeddings> tuned;
  if (tune) {
    std::vector<Example> seen;
    for (std::size_t idx : order) seen.push_back(all[idx]);
    tuned.emplace(table, seen);
  }

  std::vector<Trainable> sets;
  sets.push_back({&model.params(), neural::MakeAdamState(model.params(),
                                                         config.adam)});
  if (tuned) {
    sets.push_back({&tuned->params(),
                    neural::MakeAdamState(tuned->params(), config.adam)});
  }
  for (auto &set : sets) set.params->ZeroGrad();

  TrainResult result;
  std::vector<neural::ParameterSet> best;
  double best_loss = 0.0;
  int since_best = 0;
  const TunedEmbeddings *tuned_ptr = tuned ? &*tuned : nullptr;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(order, rng);
    double epoch_loss = 0.0;
    std::size_t in_batch = 0;
    for (std::size_t idx : order) {
      neural::Tape tape;
      neural::Var loss = ExampleGraphLoss(tape, model, all[idx], tuned_ptr,
                                          &rng);
      epoch_loss += loss.scalar();
      tape.Backward(loss);
      Accumulate(tape, sets);
      if (++in_batch == static_cast<std::size_t>(config.batch_size)) {
        Step(sets, config, in_batch);
        in_batch = 0;
      }
    }
    if (in_batch > 0) Step(sets, config, in_batch);
    result.loss_history.push_back(epoch_loss /
                                  static_cast<double>(order.size()));

    if (early_stopping) {
      const double loss = MeanExampleLoss(model, heldout, tuned_ptr);
      result.heldout_history.push_back(loss);
      if (best.empty() || loss < best_loss) {
        best.clear();
        for (const auto &set : sets) best.push_back(*set.params);
        best_loss = loss;
        result.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= config.patience) {
        result.stopped_early = true;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < best.size(); ++i) {
    sets[i].params->CopyValuesFrom(best[i]);
  }
  for (auto &set : sets) set.params->ZeroGrad();
  if (tuned) {
    tuned->WriteBack(*tune);
    tune->set_trainable(true);
  }
  return result;
}

}  // namespace

TrainResult Train(Model &model, EmbeddingTable &table,
                  std::span<const AnnotatedSentence> train,
                  const TrainConfig &config) {
  return TrainImpl(model, table, train, config,
                   config.train_embeddings ? &table : nullptr);
}

TrainResult Train(Model &model, const EmbeddingTable &table,
                  std::span<const AnnotatedSentence> train,
                  const TrainConfig &config) {
  if (config.train_embeddings) {
    throw std::invalid_argument(
        "embedding fine-tuning needs a mutable embedding table");
  }
  return TrainImpl(model, table, train, config, nullptr);
}

void CheckChainBound(const StageMetrics &stage, const ChainMetrics &chain) {
  // The AI pool is exactly the sentences with a correct frame.
  if (chain.support != stage.ad_support || chain.correct > stage.ai_support) {
    throw std::logic_error("chain accuracy exceeds frame accuracy");
  }
}

FoldResult RunFold(std::span<const AnnotatedSentence> corpus,
                   const FoldAssignment &folds, int fold, const MapIndex *maps,
                   const EmbeddingTable &table,
                   const ModelConfig &model_config,
                   const TrainConfig &train_config) {
  auto [train, test] = SplitFold(corpus, folds, fold);
  ModelConfig mc = model_config;
  mc.seed = model_config.seed + static_cast<uint64_t>(fold);
  TrainConfig tc = train_config;
  tc.seed = train_config.seed + static_cast<uint64_t>(fold);

  Model model(mc, BuildLabelVocab(corpus));
  // Fine-tuned vectors stay within the fold.
  std::optional<EmbeddingTable> tuned;
  if (tc.train_embeddings) tuned = table;
  const EmbeddingTable &fold_table = tuned ? *tuned : table;
  auto history = tuned ? Train(model, *tuned, train, tc)
                       : Train(model, table, train, tc);

  NeuralParser parser(model, fold_table);
  auto eval = EvaluateStagewise(parser, test);
  FoldResult result;
  result.fold = fold;
  result.train_size = train.size();
  result.test_size = test.size();
  result.stage = eval.metrics;
  result.epochs_run = history.loss_history.size();
  if (maps && HasGroundingAnnotations(test)) {
    result.chain = ChainAccuracy(eval.predictions, test, *maps);
    CheckChainBound(result.stage, *result.chain);
  }
  return result;
}

MeanMetrics MeanOverFolds(std::span<const FoldResult> folds) {
  MeanMetrics mean;
  auto average = [](const std::vector<double> &values) -> std::optional<double> {
    if (values.empty()) return std::nullopt;
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  };
  std::vector<double> ad, ai, ac, chain;
  bool all_chain = !folds.empty();
  for (const auto &f : folds) {
    ad.push_back(f.stage.ad_f1);
    if (f.stage.ai_f1) ai.push_back(*f.stage.ai_f1);
    if (f.stage.ac_f1) ac.push_back(*f.stage.ac_f1);
    if (f.chain) {
      chain.push_back(f.chain->accuracy);
    } else {
      all_chain = false;
    }
  }
  mean.ad_f1 = average(ad).value_or(0.0);
  mean.ai_f1 = average(ai);
  mean.ac_f1 = average(ac);
  if (all_chain) mean.chain_accuracy = average(chain);
  return mean;
}

CrossValidationResult CrossValidate(std::span<const AnnotatedSentence> corpus,
                                    const MapIndex *maps,
                                    const EmbeddingTable &table,
                                    const ModelConfig &model_config,
                                    const TrainConfig &train_config,
                                    int jobs) {
  train_config.Validate();
  model_config.Validate();
  const FoldAssignment folds =
      MakeFolds(corpus, train_config.folds, train_config.seed);
  const int k = folds.k;
  std::vector<FoldResult> results(k);
  std::vector<std::exception_ptr> errors(k);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int fold = next++; fold < k; fold = next++) {
      try {
        results[fold] = RunFold(corpus, folds, fold, maps, table, model_config,
                                train_config);
      } catch (...) {
        errors[fold] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, k);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CrossValidationResult result;
  result.name = model_config.Name();
  result.model = model_config;
  result.folds = std::move(results);
  result.mean = MeanOverFolds(result.folds);
  return result;
}

ReportRow RowFrom(const CrossValidationResult &r) {
  return {r.name, r.mean.ad_f1, r.mean.ai_f1, r.mean.ac_f1,
          r.mean.chain_accuracy};
}

ReportRow RowFrom(const std::string &name, const StageMetrics &stage,
                  const std::optional<ChainMetrics> &chain) {
  ReportRow row{name, stage.ad_f1, stage.ai_f1, stage.ac_f1, std::nullopt};
  if (chain) row.chain_accuracy = chain->accuracy;
  return row;
}

namespace {

std::string Percent(const std::optional<double> &value) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", *value * 100.0);
  return buf;
}

std::string Pad(const std::string &s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string PadLeft(const std::string &s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

ordered_json Optional(const std::optional<double> &v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json StageJson(const StageMetrics &s) {
  ordered_json j;
  j["ad_f1"] = s.ad_f1;
  j["ai_f1"] = Optional(s.ai_f1);
  j["ac_f1"] = Optional(s.ac_f1);
  j["support"] = {{"ad", s.ad_support}, {"ai", s.ai_support},
                  {"ac", s.ac_support}};
  return j;
}

ordered_json ChainJson(const std::optional<ChainMetrics> &chain) {
  if (!chain) return nullptr;
  ordered_json j;
  j["accuracy"] = chain->accuracy;
  j["correct"] = chain->correct;
  j["support"] = chain->support;
  return j;
}

}  // namespace

std::string RenderReport(std::span<const ReportRow> rows) {
  std::size_t name_width = 10;
  for (const auto &r : rows) name_width = std::max(name_width, r.name.size());
  std::ostringstream out;
  out << Pad("", name_width) << " | " << PadLeft("AD", 7) << "  "
      << PadLeft("AI", 7) << "  " << PadLeft("AC", 7) << " | "
      << "Whole Chain\n";
  out << std::string(name_width, '-') << "-+-" << std::string(25, '-')
      << "-+-" << std::string(11, '-') << "\n";
  for (const auto &r : rows) {
    out << Pad(r.name, name_width) << " | " << PadLeft(Percent(r.ad_f1), 7)
        << "  " << PadLeft(Percent(r.ai_f1), 7) << "  "
        << PadLeft(Percent(r.ac_f1), 7) << " | "
        << PadLeft(Percent(r.chain_accuracy), 11) << "\n";
  }
  return out.str();
}

ordered_json CrossValidationJson(const CrossValidationResult &r) {
  ordered_json j;
  j["name"] = r.name;
  j["model"] = ModelConfigToJson(r.model);
  j["folds"] = ordered_json::array();
  for (const auto &f : r.folds) {
    ordered_json fj;
    fj["fold"] = f.fold;
    fj["train_size"] = f.train_size;
    fj["test_size"] = f.test_size;
    fj["epochs_run"] = f.epochs_run;
    fj["stage"] = StageJson(f.stage);
    fj["chain"] = ChainJson(f.chain);
    j["folds"].push_back(fj);
  }
  ordered_json mean;
  mean["ad_f1"] = r.mean.ad_f1;
  mean["ai_f1"] = Optional(r.mean.ai_f1);
  mean["ac_f1"] = Optional(r.mean.ac_f1);
  mean["chain_accuracy"] = Optional(r.mean.chain_accuracy);
  j["mean"] = mean;
  return j;
}

ordered_json EvaluationJson(const std::string &name, const StageMetrics &stage,
                            const std::optional<ChainMetrics> &chain) {
  ordered_json j;
  j["name"] = name;
  j["stage"] = StageJson(stage);
  j["chain"] = ChainJson(chain);
  return j;
}

}  // namespace framelstm
