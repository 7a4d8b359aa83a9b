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

#include "framelstm/cli.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "framelstm/checkpoint.h"
#include "framelstm/config.h"
#include "framelstm/corpus.h"
#include "framelstm/embeddings.h"
#include "framelstm/grounding.h"
#include "framelstm/metrics.h"
#include "framelstm/neural/functional.h"
#include "framelstm/model.h"
#include "framelstm/pipeline.h"
#include "framelstm/synthetic.h"
#include "json.hpp"

namespace framelstm::cli {

namespace {

using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  uint64_t seed = 42;
  bool seed_given = false;
  int jobs = 1;
  std::string out;
};

struct TrainArgs {
  std::string corpus;
  std::string config;
  std::vector<std::string> overrides;
  std::string embeddings;
};

struct EvalArgs {
  std::vector<std::string> checkpoints;
  std::string corpus;
  std::vector<std::string> maps;
  std::vector<std::string> configs;
  std::vector<std::string> overrides;
  std::string embeddings;
  int cv = 0;
};

struct ParseArgs {
  std::string checkpoint;
  std::string sentence;
  std::string map;
  bool show_attention = false;
};

struct GradCheckArgs {
  double eps = 1e-5;
  int hidden = 8;
  int tokens = 5;
  bool corrupt = false;
  std::string config;
};

struct GenArgs {
  int n = 0;
  std::vector<std::string> frames;
  std::string map_out;
};

inline constexpr double kGradCheckTolerance = 1e-4;

void WriteFile(const std::string &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> Tokenize(const std::string &text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

// A config path, or the name of a built-in preset.
RunConfig LoadRunConfig(const std::string &spec) {
  if (spec.empty()) return RunConfig{};
  if (!std::filesystem::exists(spec)) {
    if (auto preset = Preset(spec)) return *preset;
  }
  return ReadConfigFile(spec);
}

RunConfig ResolveConfig(const std::string &spec,
                        const std::vector<std::string> &overrides,
                        const GlobalOptions &global) {
  RunConfig config = LoadRunConfig(spec);
  for (const auto &o : overrides) ApplyOverride(config, o);
  if (global.seed_given) config.model.seed = config.train.seed = global.seed;
  try {
    config.model.Validate();
    config.train.Validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  return config;
}

EmbeddingTable ResolveEmbeddings(const std::string &path, const Corpus &corpus,
                                 int dim) {
  if (path.empty()) return CorpusEmbeddings(corpus, dim);
  EmbeddingTable table = ReadEmbeddingsFile(path);
  if (table.dim() != dim) {
    throw ConfigError("embedding file has dimension " +
                      std::to_string(table.dim()) + " but embedding_dim is " +
                      std::to_string(dim));
  }
  return table;
}

MapIndex LoadMaps(const std::vector<std::string> &paths) {
  MapIndex maps;
  for (const auto &path : paths) {
    SemanticMap map = ReadMapFile(path);
    std::string id = map.id;
    if (!maps.emplace(id, std::move(map)).second) {
      throw MapError("duplicate map id '" + id + "'");
    }
  }
  return maps;
}

std::string DumpJson(const ordered_json &json) { return json.dump(2) + "\n"; }

int CmdTrain(const TrainArgs &args, const GlobalOptions &global,
             std::ostream &out) {
  if (global.out.empty()) throw UsageError("train requires --out");
  const RunConfig config = ResolveConfig(args.config, args.overrides, global);
  const Corpus corpus = ReadCorpusFile(args.corpus);
  if (corpus.empty()) throw ValidationError("corpus is empty");
  EmbeddingTable table =
      ResolveEmbeddings(args.embeddings, corpus, config.model.embedding_dim);

  Model model(config.model, BuildLabelVocab(corpus));
  const TrainResult result = Train(model, table, corpus, config.train);
  SaveCheckpoint(global.out, model, table);

  ordered_json history;
  history["model"] = config.model.Name();
  history["config"] = ModelConfigToJson(config.model);
  history["train_size"] = corpus.size();
  history["loss_history"] = result.loss_history;
  history["heldout_history"] = result.heldout_history;
  history["best_epoch"] = result.best_epoch;
  history["stopped_early"] = result.stopped_early;
  WriteFile(global.out + ".history.json", DumpJson(history));

  out << config.model.Name() << ": " << result.loss_history.size()
      << " epochs, final loss ";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f",
                result.loss_history.empty() ? 0.0
                                            : result.loss_history.back());
  out << buf << "\n";
  return kExitOk;
}

bool SameShape(const ModelConfig &a, const ModelConfig &b) {
  return a.variant == b.variant && a.attention == b.attention &&
         a.embedding_dim == b.embedding_dim && a.hidden_size == b.hidden_size &&
         a.decoder_hidden == b.decoder_hidden &&
         a.attention_size == b.attention_size &&
         a.label_embedding_dim == b.label_embedding_dim;
}

void EmitReport(const ordered_json &json, const std::vector<ReportRow> &rows,
                const GlobalOptions &global, std::ostream &out) {
  const std::string table = RenderReport(rows);
  out << table;
  if (global.out.empty()) return;
  WriteFile(global.out, DumpJson(json));
  std::filesystem::path text_path(global.out);
  text_path.replace_extension(".txt");
  if (text_path == std::filesystem::path(global.out)) {
    text_path += ".table";
  }
  WriteFile(text_path.string(), table);
}

int CmdEval(const EvalArgs &args, const GlobalOptions &global,
            std::ostream &out) {
  if (args.checkpoints.empty() == (args.cv == 0)) {
    throw UsageError("eval needs either --checkpoint or --cv");
  }
  const Corpus corpus = ReadCorpusFile(args.corpus);
  if (corpus.empty()) throw ValidationError("corpus is empty");
  const MapIndex maps = LoadMaps(args.maps);
  const bool chain = !maps.empty() && HasGroundingAnnotations(corpus);

  ordered_json json;
  ordered_json runs = ordered_json::array();
  std::vector<ReportRow> rows;

  if (args.cv > 0) {
    std::vector<std::string> specs = args.configs;
    if (specs.empty()) specs.emplace_back();
    for (const auto &spec : specs) {
      RunConfig config = ResolveConfig(spec, args.overrides, global);
      config.train.folds = args.cv;
      const EmbeddingTable table = ResolveEmbeddings(
          args.embeddings, corpus, config.model.embedding_dim);
      const CrossValidationResult result =
          CrossValidate(corpus, chain ? &maps : nullptr, table, config.model,
                        config.train, global.jobs);
      runs.push_back(CrossValidationJson(result));
      rows.push_back(RowFrom(result));
    }
  } else {
    std::optional<RunConfig> expected;
    if (!args.configs.empty()) {
      if (args.configs.size() > 1) {
        throw UsageError("at most one --config with --checkpoint");
      }
      expected = ResolveConfig(args.configs.front(), args.overrides, global);
    }
    for (const auto &path : args.checkpoints) {
      const LoadedCheckpoint ckpt = LoadCheckpoint(path);
      if (expected && !SameShape(expected->model, ckpt.model.config())) {
        throw CheckpointError("checkpoint " + path + " (" +
                              ckpt.model.config().Name() +
                              ") does not match the given config");
      }
      NeuralParser parser(ckpt.model, ckpt.table);
      const StageEvaluation eval = EvaluateStagewise(parser, corpus);
      std::optional<ChainMetrics> chain_metrics;
      if (chain) {
        chain_metrics = ChainAccuracy(eval.predictions, corpus, maps);
        CheckChainBound(eval.metrics, *chain_metrics);
      }
      const std::string name = ckpt.model.config().Name();
      ordered_json run = EvaluationJson(name, eval.metrics, chain_metrics);
      run["checkpoint"] = path;
      runs.push_back(std::move(run));
      rows.push_back(RowFrom(name, eval.metrics, chain_metrics));
    }
  }
  json["corpus_size"] = corpus.size();
  json["runs"] = std::move(runs);
  EmitReport(json, rows, global, out);
  return kExitOk;
}

ordered_json MatrixJson(const Eigen::MatrixXd &m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

int CmdParse(const ParseArgs &args, const GlobalOptions &global,
             std::ostream &out) {
  const std::vector<std::string> tokens = Tokenize(args.sentence);
  if (tokens.empty()) throw UsageError("sentence is empty");
  const LoadedCheckpoint ckpt = LoadCheckpoint(args.checkpoint);
  std::optional<SemanticMap> map;
  if (!args.map.empty()) map = ReadMapFile(args.map);

  NeuralParser parser(ckpt.model, ckpt.table);
  const ModelOutput output = parser.Run(tokens);
  const ParsedCommand parsed = DecodeOutput(
      output, ckpt.model.vocab(), ckpt.model.config().variant);
  std::optional<GroundedCommand> grounded;
  if (map) grounded = GroundCommand(parsed, tokens, *map);

  ordered_json json;
  json["tokens"] = tokens;
  json["frame"] = parsed.frame_type;
  ordered_json elements = ordered_json::array();
  for (std::size_t i = 0; i < parsed.elements.size(); ++i) {
    const FrameElement &e = parsed.elements[i];
    ordered_json element;
    element["type"] = e.type;
    element["span"] = {e.span.start, e.span.end};
    std::string text;
    for (int t = e.span.start; t <= e.span.end; ++t) {
      if (!text.empty()) text += ' ';
      text += tokens[t];
    }
    element["text"] = text;
    if (grounded) {
      const auto &entity = grounded->groundings[i].entity;
      element["entity"] = entity ? ordered_json(*entity) : ordered_json();
    }
    elements.push_back(std::move(element));
  }
  json["elements"] = std::move(elements);
  if (map) json["map_id"] = map->id;
  if (args.show_attention) {
    ordered_json maps = ordered_json::array();
    for (const AttentionMap &a : output.attention_maps) {
      maps.push_back({{"layer", a.layer}, {"weights", MatrixJson(a.weights)}});
    }
    json["attention"] = std::move(maps);
  }
  const std::string text = DumpJson(json);
  if (!global.out.empty()) WriteFile(global.out, text);
  out << text;
  return kExitOk;
}

// First generated sentence with exactly `length` tokens.
AnnotatedSentence GradCheckSentence(uint64_t seed, int length) {
  const Corpus corpus = GenerateSynthetic(seed, 500);
  for (const auto &s : corpus) {
    if (static_cast<int>(s.tokens.size()) == length) return s;
  }
  throw UsageError("no synthetic sentence with " + std::to_string(length) +
                   " tokens");
}

int CmdGradCheck(const GradCheckArgs &args, const GlobalOptions &global,
                 std::ostream &out) {
  if (!(args.eps > 0.0)) throw UsageError("--eps must be positive");
  RunConfig base = ResolveConfig(args.config, {}, global);
  base.model.hidden_size = args.hidden;
  base.model.decoder_hidden = args.hidden;
  base.model.attention_size = args.hidden;
  base.model.dropout = 0.0;

  const Corpus vocab_corpus = GenerateSynthetic(base.model.seed, 60);
  const LabelVocab vocab = BuildLabelVocab(vocab_corpus);
  const AnnotatedSentence sentence =
      GradCheckSentence(base.model.seed, args.tokens);
  const Corpus single{sentence};
  const EmbeddingTable table =
      CorpusEmbeddings(single, base.model.embedding_dim);

  neural::GradCheckOptions options;
  options.epsilon = args.eps;
  options.seed = base.model.seed;
  options.gradient_scale = args.corrupt ? 2.0 : 1.0;

  bool all_pass = true;
  for (Variant variant : {Variant::k2L, Variant::k3L}) {
    for (bool attention : {true, false}) {
      ModelConfig config = base.model;
      config.variant = variant;
      config.attention = attention;
      Model model(config, vocab);
      const auto start = std::chrono::steady_clock::now();
      const neural::GradCheckResult r =
          CheckModelGradients(model, table, sentence, options);
      const double seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      const bool pass = r.max_relative_error < kGradCheckTolerance;
      all_pass = all_pass && pass;
      char line[256];
      std::snprintf(line, sizeof(line),
                    "%-10s max_rel_error %.3e %s 1e-4  eps %g  coords %zu  "
                    "worst %s[%ld]  %.2fs  %s\n",
                    config.Name().c_str(), r.max_relative_error,
                    pass ? "<" : ">=", args.eps, r.coordinates_checked,
                    r.worst_parameter.c_str(),
                    static_cast<long>(r.worst_index), seconds,
                    pass ? "PASS" : "FAIL");
      out << line;
    }
  }
  return all_pass ? kExitOk : kExitFailure;
}

int CmdGenCorpus(const GenArgs &args, const GlobalOptions &global,
                 std::ostream &out) {
  if (args.n < 1) throw UsageError("--n must be at least 1");
  std::vector<std::string> frames =
      args.frames.empty() ? SyntheticFrames() : args.frames;
  const std::vector<std::string> known = SyntheticFrames();
  for (const auto &f : frames) {
    if (std::find(known.begin(), known.end(), f) == known.end()) {
      throw UsageError("unknown synthetic frame '" + f + "'");
    }
  }
  const Corpus corpus = GenerateSynthetic(global.seed, args.n, frames);
  const std::string text = SerializeCorpus(corpus);
  if (global.out.empty()) {
    out << text;
    if (!args.map_out.empty()) WriteFile(args.map_out, SerializeMap(DemoMap()));
    return kExitOk;
  }
  WriteFile(global.out, text);
  std::string map_out = args.map_out;
  if (map_out.empty()) {
    std::filesystem::path p(global.out);
    p.replace_extension(".map.json");
    map_out = p.string();
  }
  WriteFile(map_out, SerializeMap(DemoMap()));
  out << "wrote " << corpus.size() << " sentences to " << global.out
      << " and map " << DemoMap().id << " to " << map_out << "\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Frame-semantic parsing of robot commands", "framelstm"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", global.jobs, "Parallel folds for --cv")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", global.out, "Output path");

  TrainArgs train;
  auto *train_cmd = app.add_subcommand("train", "Train and save a model");
  train_cmd->add_option("--corpus", train.corpus, "JSONL corpus")->required();
  train_cmd->add_option("--config", train.config, "Config file or preset");
  train_cmd->add_option("--override", train.overrides, "key=value");
  train_cmd->add_option("--embeddings", train.embeddings,
                        "Word vectors (text format)");

  EvalArgs eval;
  auto *eval_cmd = app.add_subcommand("eval", "Stagewise and chain metrics");
  eval_cmd->add_option("--checkpoint", eval.checkpoints, "Trained model");
  eval_cmd->add_option("--corpus", eval.corpus, "JSONL corpus")->required();
  eval_cmd->add_option("--map", eval.maps, "Semantic map JSON");
  eval_cmd->add_option("--cv", eval.cv, "Cross-validation folds")
      ->check(CLI::Range(2, 1000));
  eval_cmd->add_option("--config", eval.configs, "Config file or preset");
  eval_cmd->add_option("--override", eval.overrides, "key=value");
  eval_cmd->add_option("--embeddings", eval.embeddings,
                       "Word vectors (text format)");

  ParseArgs parse;
  auto *parse_cmd = app.add_subcommand("parse", "Parse one command");
  parse_cmd->add_option("checkpoint", parse.checkpoint, "Trained model")
      ->required();
  parse_cmd->add_option("sentence", parse.sentence, "Command text")
      ->required();
  parse_cmd->add_option("--map", parse.map, "Semantic map JSON");
  parse_cmd->add_flag("--show-attention", parse.show_attention,
                      "Include attention weights");

  GradCheckArgs grad;
  auto *grad_cmd =
      app.add_subcommand("gradcheck", "Finite-difference gradient check");
  grad_cmd->add_option("--eps", grad.eps, "Perturbation")
      ->capture_default_str();
  grad_cmd->add_option("--hidden", grad.hidden, "Hidden size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  grad_cmd->add_option("--tokens", grad.tokens, "Sentence length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  grad_cmd->add_option("--config", grad.config, "Config file or preset");
  grad_cmd->add_flag("--corrupt-gradient", grad.corrupt,
                     "Scale analytic gradients to force a failure");

  GenArgs gen;
  auto *gen_cmd = app.add_subcommand("gen-corpus", "Write a synthetic corpus");
  gen_cmd->add_option("--n", gen.n, "Sentences")->required();
  gen_cmd->add_option("--frames", gen.frames, "Frame subset")
      ->delimiter(',');
  gen_cmd->add_option("--map-out", gen.map_out, "Demo map path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  global.seed_given = app.get_option("--seed")->count() > 0;

  try {
    if (*train_cmd) return CmdTrain(train, global, out);
    if (*eval_cmd) return CmdEval(eval, global, out);
    if (*parse_cmd) return CmdParse(parse, global, out);
    if (*grad_cmd) return CmdGradCheck(grad, global, out);
    if (*gen_cmd) return CmdGenCorpus(gen, global, out);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CorpusParseError &e) {
    err << "corpus error: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError &e) {
    err << "validation error: " << e.what() << "\n";
    return kExitData;
  } catch (const LabelError &e) {
    err << "label error: " << e.what() << "\n";
    return kExitData;
  } catch (const MapError &e) {
    err << "map error: " << e.what() << "\n";
    return kExitData;
  } catch (const EmbeddingError &e) {
    err << "embedding error: " << e.what() << "\n";
    return kExitData;
  } catch (const CheckpointError &e) {
    err << "checkpoint error: " << e.what() << "\n";
    return kExitCheckpoint;
  } catch (const neural::DimensionError &e) {
    err << "shape mismatch: " << e.what() << "\n";
    return kExitCheckpoint;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace framelstm::cli
