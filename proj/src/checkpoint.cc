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

#include "framelstm/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace framelstm {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char *kFormatTag = "framelstm-checkpoint";

void AppendDouble(std::string &out, double value) {
  uint64_t bits = std::bit_cast<uint64_t>(value);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
}

double ReadDouble(const unsigned char *p) {
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void AppendRowMajor(std::string &out, const Eigen::MatrixXd &m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) AppendDouble(out, m(r, c));
  }
}

ordered_json TensorEntry(const std::string &name, Eigen::Index rows,
                         Eigen::Index cols) {
  ordered_json t;
  t["name"] = name;
  t["shape"] = {rows, cols};
  return t;
}

}  // namespace

ordered_json ModelConfigToJson(const ModelConfig &c) {
  ordered_json j;
  j["variant"] = c.variant == Variant::k2L ? "2L" : "3L";
  j["attention"] = c.attention;
  j["embedding_dim"] = c.embedding_dim;
  j["hidden_size"] = c.hidden_size;
  j["decoder_hidden"] = c.decoder_hidden;
  j["attention_size"] = c.attention_size;
  j["label_embedding_dim"] = c.label_embedding_dim;
  j["dropout"] = c.dropout;
  j["seed"] = c.seed;
  return j;
}

ModelConfig ModelConfigFromJson(const ordered_json &j) {
  try {
    ModelConfig c;
    const auto variant = j.at("variant").get<std::string>();
    if (variant != "2L" && variant != "3L") {
      throw CheckpointError("unknown model variant '" + variant + "'");
    }
    c.variant = variant == "2L" ? Variant::k2L : Variant::k3L;
    c.attention = j.at("attention").get<bool>();
    c.embedding_dim = j.at("embedding_dim").get<int>();
    c.hidden_size = j.at("hidden_size").get<int>();
    c.decoder_hidden = j.at("decoder_hidden").get<int>();
    c.attention_size = j.at("attention_size").get<int>();
    c.label_embedding_dim = j.at("label_embedding_dim").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.seed = j.at("seed").get<uint64_t>();
    return c;
  } catch (const nlohmann::json::exception &e) {
    throw CheckpointError(std::string("bad model config: ") + e.what());
  }
}

std::string SerializeCheckpoint(const Model &model,
                                const EmbeddingTable &table) {
  if (table.dim() != model.config().embedding_dim) {
    throw CheckpointError("embedding table width does not match model");
  }
  ordered_json header;
  header["format"] = kFormatTag;
  header["version"] = kCheckpointVersion;
  header["config"] = ModelConfigToJson(model.config());
  header["vocab"]["frames"] = model.vocab().frames;
  header["vocab"]["element_types"] = model.vocab().element_types;
  header["embedding"]["dim"] = table.dim();
  header["embedding"]["trainable"] = table.trainable();
  header["embedding"]["tokens"] = table.tokens();
  header["tensors"] = ordered_json::array();
  for (const auto &p : model.params()) {
    header["tensors"].push_back(
        TensorEntry(p.name, p.value.rows(), p.value.cols()));
  }
  header["tensors"].push_back(TensorEntry("embedding.unk", table.dim(), 1));
  header["tensors"].push_back(TensorEntry(
      "embedding.vectors", static_cast<Eigen::Index>(table.size()),
      table.dim()));

  std::string out = header.dump();
  out += '\n';
  for (const auto &p : model.params()) AppendRowMajor(out, p.value);
  AppendRowMajor(out, table.unk());
  for (std::size_t i = 0; i < table.size(); ++i) {
    AppendRowMajor(out, table.vector(i).transpose());
  }
  return out;
}

LoadedCheckpoint ParseCheckpoint(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw CheckpointError("checkpoint has no header line");
  }
  ordered_json header;
  try {
    header = ordered_json::parse(bytes.substr(0, newline));
  } catch (const std::exception &e) {
    throw CheckpointError(std::string("malformed checkpoint header: ") +
                          e.what());
  }
  if (header.value("format", "") != kFormatTag) {
    throw CheckpointError("not a framelstm checkpoint");
  }
  if (header.value("version", -1) != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version");
  }

  ModelConfig config = ModelConfigFromJson(header.at("config"));
  std::vector<std::string> frames, types, tokens;
  int dim = 0;
  bool trainable = false;
  try {
    frames = header.at("vocab").at("frames").get<std::vector<std::string>>();
    types = header.at("vocab")
                .at("element_types")
                .get<std::vector<std::string>>();
    dim = header.at("embedding").at("dim").get<int>();
    trainable = header.at("embedding").value("trainable", false);
    tokens =
        header.at("embedding").at("tokens").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception &e) {
    throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
  }
  if (dim != config.embedding_dim) {
    throw CheckpointError("embedding dim " + std::to_string(dim) +
                          " does not match config embedding_dim " +
                          std::to_string(config.embedding_dim));
  }

  std::optional<Model> model;
  try {
    model.emplace(config, MakeLabelVocab(frames, types));
  } catch (const std::invalid_argument &e) {
    throw CheckpointError(std::string("invalid checkpoint config: ") +
                          e.what());
  }

  // Expected tensor list, in order.
  std::vector<std::pair<std::string, std::pair<Eigen::Index, Eigen::Index>>>
      expected;
  for (const auto &p : model->params()) {
    expected.push_back({p.name, {p.value.rows(), p.value.cols()}});
  }
  expected.push_back({"embedding.unk", {dim, 1}});
  expected.push_back(
      {"embedding.vectors", {static_cast<Eigen::Index>(tokens.size()), dim}});

  const auto &tensors = header["tensors"];
  if (!tensors.is_array() || tensors.size() != expected.size()) {
    throw CheckpointError("checkpoint lists " +
                          std::to_string(tensors.size()) +
                          " tensors; config implies " +
                          std::to_string(expected.size()));
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto &[name, shape] = expected[i];
    const auto &entry = tensors[i];
    const auto got_name = entry.value("name", "");
    const auto got_shape = entry.value("shape", std::vector<long long>{});
    if (got_name != name || got_shape.size() != 2 ||
        got_shape[0] != shape.first || got_shape[1] != shape.second) {
      throw CheckpointError("tensor " + std::to_string(i) + " ('" + got_name +
                            "') does not match config: expected '" + name +
                            "' " + std::to_string(shape.first) + "x" +
                            std::to_string(shape.second));
    }
    total += static_cast<std::size_t>(shape.first * shape.second);
  }

  const std::size_t payload = bytes.size() - newline - 1;
  if (payload != total * 8) {
    throw CheckpointError("checkpoint payload has " + std::to_string(payload) +
                          " bytes; expected " + std::to_string(total * 8));
  }
  const auto *data =
      reinterpret_cast<const unsigned char *>(bytes.data() + newline + 1);
  auto read_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = ReadDouble(data);
        data += 8;
      }
    }
    return m;
  };
  for (auto &p : model->params()) {
    p.value = read_matrix(p.value.rows(), p.value.cols());
  }
  EmbeddingTable table(dim);
  table.set_trainable(trainable);
  table.set_unk(read_matrix(dim, 1).col(0));
  for (const auto &token : tokens) {
    if (!table.Add(token, read_matrix(1, dim).row(0).transpose())) {
      throw CheckpointError("duplicate embedding token '" + token + "'");
    }
  }
  return LoadedCheckpoint{std::move(*model), std::move(table)};
}

void SaveCheckpoint(const std::string &path, const Model &model,
                    const EmbeddingTable &table) {
  const std::string bytes = SerializeCheckpoint(model, table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("failed writing checkpoint " + path);
}

LoadedCheckpoint LoadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseCheckpoint(buffer.str());
}

}  // namespace framelstm
