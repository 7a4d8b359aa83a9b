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

#ifndef FRAMELSTM_CONFIG_H_
#define FRAMELSTM_CONFIG_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "framelstm/model.h"
#include "framelstm/pipeline.h"

namespace framelstm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
};

// Recognized keys, in documentation order.
const std::vector<std::string> &ConfigKeys();

// `seed` sets both the model and the training seed. Throws ConfigError for
// unknown keys or unparsable values.
void ApplySetting(RunConfig &config, std::string_view key,
                  std::string_view value);
// "key=value".
void ApplyOverride(RunConfig &config, std::string_view assignment);

// Text format: "key = value" lines, '#' comments, optional "[section]"
// headers (ignored), values optionally double-quoted.
RunConfig ParseConfigText(std::string_view text, RunConfig base = {});
RunConfig ReadConfigFile(const std::string &path);

// Built-in presets "2L-ATT", "2L-NO-ATT", "3L-ATT", "3L-NO-ATT".
std::optional<RunConfig> Preset(std::string_view name);

// Serializes every key, so ParseConfigText(ConfigText(c)) == c.
std::string ConfigText(const RunConfig &config);

}  // namespace framelstm

#endif  // FRAMELSTM_CONFIG_H_
