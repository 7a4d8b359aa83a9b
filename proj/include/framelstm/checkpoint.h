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

#ifndef FRAMELSTM_CHECKPOINT_H_
#define FRAMELSTM_CHECKPOINT_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "framelstm/embeddings.h"
#include "framelstm/model.h"
#include "json.hpp"

namespace framelstm {

// Checkpoint layout: one line of JSON header (format tag, version, model
// config, label inventories, embedding vocabulary, tensor names and shapes)
// terminated by '\n', then every tensor in header order as row-major
// little-endian IEEE-754 doubles. Model parameters come first, followed by
// "embedding.unk" and "embedding.vectors".
inline constexpr int kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json ModelConfigToJson(const ModelConfig &config);
// Throws CheckpointError on missing or ill-typed fields.
ModelConfig ModelConfigFromJson(const nlohmann::ordered_json &json);

std::string SerializeCheckpoint(const Model &model,
                                const EmbeddingTable &table);

struct LoadedCheckpoint {
  Model model;
  EmbeddingTable table;
};

// Rebuilds the model from the header config and checks every tensor name and
// shape against it before reading values.
LoadedCheckpoint ParseCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::string &path, const Model &model,
                    const EmbeddingTable &table);
LoadedCheckpoint LoadCheckpoint(const std::string &path);

}  // namespace framelstm

#endif  // FRAMELSTM_CHECKPOINT_H_
