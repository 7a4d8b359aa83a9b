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

#include "framelstm/grounding.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace framelstm {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool IsStripWord(std::string_view token) {
  return std::find(std::begin(kStripWords), std::end(kStripWords), token) !=
         std::end(kStripWords);
}

}  // namespace

const Entity *SemanticMap::Find(std::string_view entity_id) const {
  for (const auto &e : entities) {
    if (e.id == entity_id) return &e;
  }
  return nullptr;
}

SemanticMap LoadMap(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const std::exception &e) {
    throw MapError(std::string("malformed map JSON: ") + e.what());
  }
  SemanticMap map;
  try {
    map.id = doc.at("id").get<std::string>();
    for (const auto &ej : doc.at("entities")) {
      Entity e;
      e.id = ej.at("id").get<std::string>();
      e.type = ej.value("type", std::string());
      for (const auto &ref : ej.at("lexical_refs")) {
        e.lexical_refs.push_back(Lower(ref.get<std::string>()));
      }
      if (ej.contains("location") && !ej.at("location").is_null()) {
        e.location = ej.at("location").get<std::string>();
      }
      map.entities.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception &e) {
    throw MapError(std::string("invalid map document: ") + e.what());
  }

  std::set<std::string> ids;
  for (const auto &e : map.entities) {
    if (!ids.insert(e.id).second) {
      throw MapError("map '" + map.id + "': duplicate entity id '" + e.id +
                     "'");
    }
    if (e.lexical_refs.empty()) {
      throw MapError("map '" + map.id + "': entity '" + e.id +
                     "' has no lexical references");
    }
  }
  for (const auto &e : map.entities) {
    if (e.location && !ids.count(*e.location)) {
      throw MapError("map '" + map.id + "': entity '" + e.id +
                     "' located in unknown entity '" + *e.location + "'");
    }
  }
  return map;
}

SemanticMap ReadMapFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MapError("cannot open map file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return LoadMap(buffer.str());
}

std::string SerializeMap(const SemanticMap &map) {
  ordered_json doc;
  doc["id"] = map.id;
  doc["entities"] = ordered_json::array();
  for (const auto &e : map.entities) {
    ordered_json ej;
    ej["id"] = e.id;
    ej["type"] = e.type;
    ej["lexical_refs"] = e.lexical_refs;
    ej["location"] = e.location ? ordered_json(*e.location)
                                : ordered_json(nullptr);
    doc["entities"].push_back(ej);
  }
  return doc.dump();
}

std::optional<std::string> GroundElement(
    std::span<const std::string> span_tokens, const SemanticMap &map) {
  std::vector<std::string> words;
  for (const auto &t : span_tokens) words.push_back(Lower(t));
  std::size_t first = 0;
  while (first < words.size() && IsStripWord(words[first])) ++first;
  if (first == words.size()) return std::nullopt;

  std::string phrase;
  for (std::size_t i = first; i < words.size(); ++i) {
    if (i > first) phrase += ' ';
    phrase += words[i];
  }

  const Entity *match = nullptr;
  for (const auto &entity : map.entities) {
    bool hit = false;
    for (const auto &ref : entity.lexical_refs) {
      if (ref == phrase ||
          std::find(words.begin() + first, words.end(), ref) != words.end()) {
        hit = true;
        break;
      }
    }
    if (!hit) continue;
    if (match) return std::nullopt;  // ambiguous
    match = &entity;
  }
  if (!match) return std::nullopt;
  return match->id;
}

GroundedCommand GroundCommand(const ParsedCommand &parsed,
                              std::span<const std::string> tokens,
                              const SemanticMap &map) {
  GroundedCommand grounded;
  grounded.frame_type = parsed.frame_type;
  for (const auto &e : parsed.elements) {
    auto span_tokens = tokens.subspan(e.span.start, e.span.length());
    grounded.groundings.push_back({e, GroundElement(span_tokens, map)});
  }
  return grounded;
}

bool ChainCorrect(const GroundedCommand &predicted,
                  const AnnotatedSentence &gold) {
  if (!gold.gold_groundings) {
    throw std::invalid_argument("sentence '" + gold.id +
                                "' has no gold groundings");
  }
  if (predicted.frame_type != gold.frame.frame_type) return false;

  std::set<FrameElement> predicted_spans, gold_spans(
                                              gold.frame.elements.begin(),
                                              gold.frame.elements.end());
  for (const auto &g : predicted.groundings) predicted_spans.insert(g.element);
  if (predicted_spans != gold_spans) return false;

  for (const auto &g : *gold.gold_groundings) {
    const FrameElement &element = gold.frame.elements.at(g.element);
    auto it = std::find_if(
        predicted.groundings.begin(), predicted.groundings.end(),
        [&](const ElementGrounding &p) { return p.element == element; });
    if (it == predicted.groundings.end() || it->entity != g.entity) {
      return false;
    }
  }
  return true;
}

ChainMetrics ChainAccuracy(std::span<const ParsedCommand> predictions,
                           std::span<const AnnotatedSentence> gold,
                           const MapIndex &maps) {
  if (predictions.size() != gold.size()) {
    throw std::invalid_argument("prediction count does not match test set");
  }
  ChainMetrics metrics;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto &s = gold[i];
    if (!s.map_id) {
      throw std::invalid_argument("sentence '" + s.id + "' has no map id");
    }
    auto it = maps.find(*s.map_id);
    if (it == maps.end()) {
      throw MapError("sentence '" + s.id + "' refers to unknown map '" +
                     *s.map_id + "'");
    }
    auto grounded = GroundCommand(predictions[i], s.tokens, it->second);
    if (ChainCorrect(grounded, s)) ++metrics.correct;
    ++metrics.support;
  }
  metrics.accuracy = metrics.support == 0
                         ? 0.0
                         : static_cast<double>(metrics.correct) /
                               static_cast<double>(metrics.support);
  return metrics;
}

ChainMetrics ChainAccuracy(const CommandParser &parser,
                           std::span<const AnnotatedSentence> gold,
                           const MapIndex &maps) {
  std::vector<ParsedCommand> predictions;
  predictions.reserve(gold.size());
  for (const auto &s : gold) predictions.push_back(parser.Parse(s.tokens));
  return ChainAccuracy(predictions, gold, maps);
}

bool HasGroundingAnnotations(std::span<const AnnotatedSentence> corpus) {
  return std::all_of(corpus.begin(), corpus.end(), [](const auto &s) {
    return s.map_id.has_value() && s.gold_groundings.has_value();
  });
}

}  // namespace framelstm
