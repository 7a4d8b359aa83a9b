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

#include "framelstm/config.h"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace framelstm {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                   out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for '" +
                      std::string(key) + "'");
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for '" +
                    std::string(key) + "'");
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << v;
  return out.str();
}

}  // namespace

const std::vector<std::string> &ConfigKeys() {
  static const std::vector<std::string> keys = {
      "variant",        "attention",     "embedding_dim",
      "hidden_size",    "decoder_hidden", "attention_size",
      "label_embedding_dim", "dropout",  "seed",
      "epochs",         "batch_size",    "optimizer",
      "learning_rate",  "beta1",         "beta2",
      "adam_epsilon",   "clip_norm",     "patience",
      "folds",          "train_embeddings"};
  return keys;
}

void ApplySetting(RunConfig &c, std::string_view key, std::string_view raw) {
  std::string_view value = Trim(raw);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }
  auto &m = c.model;
  auto &t = c.train;
  if (key == "variant") {
    if (value == "2L") {
      m.variant = Variant::k2L;
    } else if (value == "3L") {
      m.variant = Variant::k3L;
    } else {
      throw ConfigError("variant must be 2L or 3L, got '" +
                        std::string(value) + "'");
    }
  } else if (key == "attention") {
    m.attention = ParseBool(key, value);
  } else if (key == "embedding_dim") {
    m.embedding_dim = ParseNumber<int>(key, value);
  } else if (key == "hidden_size") {
    m.hidden_size = ParseNumber<int>(key, value);
  } else if (key == "decoder_hidden") {
    m.decoder_hidden = ParseNumber<int>(key, value);
  } else if (key == "attention_size") {
    m.attention_size = ParseNumber<int>(key, value);
  } else if (key == "label_embedding_dim") {
    m.label_embedding_dim = ParseNumber<int>(key, value);
  } else if (key == "dropout") {
    m.dropout = ParseNumber<double>(key, value);
  } else if (key == "seed") {
    m.seed = t.seed = ParseNumber<uint64_t>(key, value);
  } else if (key == "epochs") {
    t.epochs = ParseNumber<int>(key, value);
  } else if (key == "batch_size") {
    t.batch_size = ParseNumber<int>(key, value);
  } else if (key == "optimizer") {
    if (value == "adam") {
      t.optimizer = OptimizerKind::kAdam;
    } else if (value == "sgd") {
      t.optimizer = OptimizerKind::kSgd;
    } else {
      throw ConfigError("optimizer must be adam or sgd");
    }
  } else if (key == "learning_rate") {
    t.adam.learning_rate = ParseNumber<double>(key, value);
  } else if (key == "beta1") {
    t.adam.beta1 = ParseNumber<double>(key, value);
  } else if (key == "beta2") {
    t.adam.beta2 = ParseNumber<double>(key, value);
  } else if (key == "adam_epsilon") {
    t.adam.epsilon = ParseNumber<double>(key, value);
  } else if (key == "clip_norm") {
    t.clip_norm = ParseNumber<double>(key, value);
  } else if (key == "patience") {
    t.patience = ParseNumber<int>(key, value);
  } else if (key == "folds") {
    t.folds = ParseNumber<int>(key, value);
  } else if (key == "train_embeddings") {
    t.train_embeddings = ParseBool(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void ApplyOverride(RunConfig &config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) +
                      "' is not key=value");
  }
  ApplySetting(config, Trim(assignment.substr(0, eq)),
               assignment.substr(eq + 1));
}

RunConfig ParseConfigText(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty() || view.front() == '[') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    try {
      ApplySetting(base, Trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const ConfigError &e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  try {
    base.model.Validate();
    base.train.Validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  return base;
}

RunConfig ReadConfigFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str());
}

std::optional<RunConfig> Preset(std::string_view name) {
  RunConfig c;
  if (name == "2L-ATT" || name == "2L-NO-ATT") {
    c.model.variant = Variant::k2L;
  } else if (name == "3L-ATT" || name == "3L-NO-ATT") {
    c.model.variant = Variant::k3L;
  } else {
    return std::nullopt;
  }
  c.model.attention = name.ends_with("-ATT") && !name.ends_with("NO-ATT");
  return c;
}

std::string ConfigText(const RunConfig &c) {
  const auto &m = c.model;
  const auto &t = c.train;
  std::ostringstream out;
  out << "[model]\n"
      << "variant = " << (m.variant == Variant::k2L ? "2L" : "3L") << "\n"
      << "attention = " << (m.attention ? "true" : "false") << "\n"
      << "embedding_dim = " << m.embedding_dim << "\n"
      << "hidden_size = " << m.hidden_size << "\n"
      << "decoder_hidden = " << m.decoder_hidden << "\n"
      << "attention_size = " << m.attention_size << "\n"
      << "label_embedding_dim = " << m.label_embedding_dim << "\n"
      << "dropout = " << FormatDouble(m.dropout) << "\n"
      << "seed = " << m.seed << "\n"
      << "\n[train]\n"
      << "epochs = " << t.epochs << "\n"
      << "batch_size = " << t.batch_size << "\n"
      << "optimizer = "
      << (t.optimizer == OptimizerKind::kAdam ? "adam" : "sgd") << "\n"
      << "learning_rate = " << FormatDouble(t.adam.learning_rate) << "\n"
      << "beta1 = " << FormatDouble(t.adam.beta1) << "\n"
      << "beta2 = " << FormatDouble(t.adam.beta2) << "\n"
      << "adam_epsilon = " << FormatDouble(t.adam.epsilon) << "\n"
      << "clip_norm = " << FormatDouble(t.clip_norm) << "\n"
      << "patience = " << t.patience << "\n"
      << "folds = " << t.folds << "\n"
      << "train_embeddings = " << (t.train_embeddings ? "true" : "false")
      << "\n";
  return out.str();
}

}  // namespace framelstm
