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

#ifndef FRAMELSTM_GROUNDING_H_
#define FRAMELSTM_GROUNDING_H_

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "framelstm/corpus.h"
#include "framelstm/parsed_command.h"

namespace framelstm {

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Entity {
  std::string id;
  std::string type;
  std::vector<std::string> lexical_refs;  // lowercase, non-empty
  std::optional<std::string> location;
};

struct SemanticMap {
  std::string id;
  std::vector<Entity> entities;

  const Entity *Find(std::string_view entity_id) const;
};

// Parses and validates a map document: unique ids, non-empty lexical refs,
// locations that resolve inside the map. Lexical refs are lowercased.
SemanticMap LoadMap(std::string_view json_text);
SemanticMap ReadMapFile(const std::string &path);
std::string SerializeMap(const SemanticMap &map);

using MapIndex = std::map<std::string, SemanticMap, std::less<>>;

// Leading tokens dropped before matching.
inline constexpr std::string_view kStripWords[] = {
    "the", "a", "an", "to", "in", "on", "at", "into", "from"};

// Links a span to the unique entity whose lexical ref equals the stripped
// span string or one of its remaining tokens. Ambiguity or no match yields
// nullopt.
std::optional<std::string> GroundElement(
    std::span<const std::string> span_tokens, const SemanticMap &map);

struct ElementGrounding {
  FrameElement element;
  std::optional<std::string> entity;
};

struct GroundedCommand {
  std::string frame_type;
  std::vector<ElementGrounding> groundings;
};

GroundedCommand GroundCommand(const ParsedCommand &parsed,
                              std::span<const std::string> tokens,
                              const SemanticMap &map);

// Whole-chain correctness: right frame, exactly the gold typed spans, and each
// gold-grounded element linked to its gold entity. Elements without a gold
// grounding place no constraint on the link. Throws std::invalid_argument when
// the sentence has no gold groundings.
bool ChainCorrect(const GroundedCommand &predicted,
                  const AnnotatedSentence &gold);

struct ChainMetrics {
  double accuracy = 0.0;
  std::size_t support = 0;
  std::size_t correct = 0;
};

// Throws MapError for a sentence whose map is absent from `maps`, and
// std::invalid_argument for sentences lacking map_id or gold groundings.
ChainMetrics ChainAccuracy(std::span<const ParsedCommand> predictions,
                           std::span<const AnnotatedSentence> gold,
                           const MapIndex &maps);
ChainMetrics ChainAccuracy(const CommandParser &parser,
                           std::span<const AnnotatedSentence> gold,
                           const MapIndex &maps);

// True when every sentence carries a map id and gold groundings.
bool HasGroundingAnnotations(std::span<const AnnotatedSentence> corpus);

}  // namespace framelstm

#endif  // FRAMELSTM_GROUNDING_H_
