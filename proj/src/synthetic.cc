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

#include "framelstm/synthetic.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "framelstm/random.h"

namespace framelstm {
namespace {

struct LexiconEntry {
  std::string phrase;  // may span several tokens
  std::string entity;
  std::string location;  // empty when unplaced
};

// Slot lexicons. Each entry is one entity of the demo map.
const std::map<std::string, std::vector<LexiconEntry>> &Lexicons() {
  static const auto *lexicons =
      new std::map<std::string, std::vector<LexiconEntry>>{
          {"ROOM",
           {{"kitchen", "kitchen_1", ""},
            {"bedroom", "bedroom_1", ""},
            {"bathroom", "bathroom_1", ""},
            {"living room", "living_room_1", ""},
            {"dining room", "dining_room_1", ""},
            {"office", "office_1", ""},
            {"garage", "garage_1", ""}}},
          {"FURNITURE",
           {{"table", "table_1", "dining_room_1"},
            {"sofa", "sofa_1", "living_room_1"},
            {"shelf", "shelf_1", "office_1"},
            {"bed", "bed_1", "bedroom_1"},
            {"counter", "counter_1", "kitchen_1"},
            {"desk", "desk_1", "office_1"}}},
          {"OBJECT",
           {{"book", "book_1", "shelf_1"},
            {"cup", "cup_1", "counter_1"},
            {"bottle", "bottle_1", "table_1"},
            {"remote", "remote_1", "sofa_1"},
            {"phone", "phone_1", "desk_1"},
            {"glass", "glass_1", "counter_1"},
            {"towel", "towel_1", "bathroom_1"},
            {"pillow", "pillow_1", "bed_1"},
            {"apple", "apple_1", "kitchen_1"},
            {"newspaper", "newspaper_1", "sofa_1"}}},
      };
  return *lexicons;
}

const std::map<std::string, std::string> &EntityTypes() {
  static const auto *types = new std::map<std::string, std::string>{
      {"ROOM", "Room"}, {"FURNITURE", "Furniture"}, {"OBJECT", "Object"}};
  return *types;
}

// Template notation, one entry per word position:
//   a|b      one of the alternatives
//   *a|b     lexical unit
//   $SLOT    lexicon phrase, grounded to its entity
//   [Type    opens a frame element; a trailing ']' closes it
const std::map<std::string, std::vector<std::string>> &Templates() {
  static const auto *templates =
      new std::map<std::string, std::vector<std::string>>{
          {"Motion",
           {"*go|move|walk|run [Goal to the $ROOM]",
            "please *go|move [Goal to the $ROOM]",
            "*go|head [Goal into the $ROOM]"}},
          {"Bringing",
           {"*bring|take|carry [Theme the $OBJECT] [Goal to the $ROOM]",
            "*bring [Beneficiary me] [Theme the|a $OBJECT]",
            "can you *bring [Theme the $OBJECT] [Goal to the $ROOM]",
            "*bring|take [Theme the $OBJECT] [Goal to the $ROOM] please"}},
          {"Taking",
           {"*take|grab|get [Theme the $OBJECT]",
            "*take|grab|pick [Theme the $OBJECT] [Source from the $FURNITURE]",
            "please *grab|get [Theme the|a $OBJECT]"}},
          {"Placing",
           {"*put|place|leave [Theme the $OBJECT] [Goal on the $FURNITURE]",
            "*put|place [Theme the $OBJECT] [Goal in the $ROOM]",
            "please *put [Theme the $OBJECT] [Goal on the $FURNITURE]"}},
          {"Searching",
           {"*find|locate [Phenomenon the|a $OBJECT]",
            "*look for [Phenomenon the $OBJECT] [Ground in the $ROOM]",
            "*search [Ground the $ROOM] for [Phenomenon the $OBJECT]",
            "can you *find [Phenomenon the $OBJECT]"}},
          {"Following",
           {"*follow [Cotheme me]",
            "*follow [Cotheme me] [Goal to the $ROOM]",
            "please *follow [Cotheme me]",
            "*follow [Cotheme the person]"}},
      };
  return *templates;
}

std::vector<std::string> Split(const std::string &text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

AnnotatedSentence Realize(const std::string &frame, const std::string &pattern,
                          Rng &rng) {
  AnnotatedSentence s;
  s.frame.frame_type = frame;
  s.map_id = "house1";
  std::vector<Grounding> groundings;

  std::string open_type;
  int open_start = -1;
  std::string open_entity;
  for (std::string item : Split(pattern, ' ')) {
    if (item.front() == '[') {
      open_type = item.substr(1);
      open_start = static_cast<int>(s.tokens.size());
      open_entity.clear();
      continue;
    }
    bool closes = item.back() == ']';
    if (closes) item.pop_back();

    if (item.front() == '$') {
      const auto &lexicon = Lexicons().at(item.substr(1));
      const auto &entry = lexicon[UniformIndex(rng, lexicon.size())];
      for (auto &word : Split(entry.phrase, ' ')) s.tokens.push_back(word);
      open_entity = entry.entity;
    } else {
      bool lexical_unit = item.front() == '*';
      if (lexical_unit) item.erase(0, 1);
      auto options = Split(item, '|');
      if (lexical_unit) {
        int at = static_cast<int>(s.tokens.size());
        s.frame.lexical_unit = Span{at, at};
      }
      s.tokens.push_back(options[UniformIndex(rng, options.size())]);
    }

    if (closes) {
      int end = static_cast<int>(s.tokens.size()) - 1;
      s.frame.elements.push_back({open_type, Span{open_start, end}});
      if (!open_entity.empty()) {
        groundings.push_back(
            {static_cast<int>(s.frame.elements.size()) - 1, open_entity});
      }
      open_type.clear();
    }
  }
  s.gold_groundings = std::move(groundings);
  return s;
}

}  // namespace

std::vector<std::string> SyntheticFrames() {
  return {"Motion", "Bringing", "Taking", "Placing", "Searching", "Following"};
}

SemanticMap DemoMap() {
  SemanticMap map;
  map.id = "house1";
  // Rooms first so locations always point backwards.
  for (const char *slot : {"ROOM", "FURNITURE", "OBJECT"}) {
    for (const auto &entry : Lexicons().at(slot)) {
      Entity e;
      e.id = entry.entity;
      e.type = EntityTypes().at(slot);
      e.lexical_refs = {entry.phrase};
      if (!entry.location.empty()) e.location = entry.location;
      map.entities.push_back(std::move(e));
    }
  }
  return map;
}

std::vector<std::string> SyntheticVocabulary() {
  std::set<std::string> words;
  for (const auto &[slot, lexicon] : Lexicons()) {
    for (const auto &entry : lexicon) {
      for (auto &w : Split(entry.phrase, ' ')) words.insert(w);
    }
  }
  for (const auto &[frame, patterns] : Templates()) {
    for (const auto &pattern : patterns) {
      for (std::string item : Split(pattern, ' ')) {
        if (item.front() == '[' || item.front() == '$') continue;
        if (item.back() == ']') item.pop_back();
        if (item.front() == '$') continue;
        if (item.front() == '*') item.erase(0, 1);
        for (auto &w : Split(item, '|')) words.insert(w);
      }
    }
  }
  return {words.begin(), words.end()};
}

Corpus GenerateSynthetic(uint64_t seed, int n,
                         std::span<const std::string> frames) {
  if (n < 1) throw std::invalid_argument("sentence count must be positive");
  if (frames.empty()) throw std::invalid_argument("empty frame subset");
  for (const auto &f : frames) {
    if (!Templates().count(f)) {
      throw std::invalid_argument("frame '" + f +
                                  "' is not in the synthetic grammar");
    }
  }

  Rng rng(seed);
  Corpus corpus;
  corpus.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::string &frame =
        static_cast<std::size_t>(i) < frames.size()
            ? frames[i]
            : frames[UniformIndex(rng, frames.size())];
    const auto &patterns = Templates().at(frame);
    auto sentence =
        Realize(frame, patterns[UniformIndex(rng, patterns.size())], rng);
    char id[32];
    std::snprintf(id, sizeof(id), "syn%04d", i);
    sentence.id = id;
    ValidateSentence(sentence);
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

}  // namespace framelstm
