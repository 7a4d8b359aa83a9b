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

#include "framelstm/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "framelstm/random.h"
#include "json.hpp"

namespace framelstm {

using ordered_json = nlohmann::ordered_json;

CorpusParseError::CorpusParseError(int line, const std::string &message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                        message
                                  : message),
      line_(line) {}

namespace {

void Fail(const AnnotatedSentence &s, const std::string &what) {
  throw ValidationError("sentence '" + s.id + "': " + what);
}

std::string SpanText(const Span &span) {
  return "[" + std::to_string(span.start) + "," + std::to_string(span.end) +
         "]";
}

void CheckSpan(const AnnotatedSentence &s, const Span &span,
               const std::string &what) {
  const int n = static_cast<int>(s.tokens.size());
  if (span.start > span.end) Fail(s, what + " span " + SpanText(span) +
                                         " has start after end");
  if (span.start < 0 || span.end >= n) {
    Fail(s, what + " span " + SpanText(span) + " out of range for " +
                std::to_string(n) + " tokens");
  }
}

Span ReadSpan(const ordered_json &j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    throw std::invalid_argument("span must be a [start,end] integer pair");
  }
  return Span{j[0].get<int>(), j[1].get<int>()};
}

AnnotatedSentence ReadRecord(const ordered_json &j) {
  AnnotatedSentence s;
  s.id = j.at("id").get<std::string>();
  s.tokens = j.at("tokens").get<std::vector<std::string>>();
  const auto &frame = j.at("frame");
  s.frame.frame_type = frame.at("frame_type").get<std::string>();
  s.frame.lexical_unit = ReadSpan(frame.at("lexical_unit"));
  if (frame.contains("elements")) {
    for (const auto &e : frame.at("elements")) {
      s.frame.elements.push_back(
          {e.at("type").get<std::string>(), ReadSpan(e.at("span"))});
    }
  }
  if (j.contains("map_id") && !j.at("map_id").is_null()) {
    s.map_id = j.at("map_id").get<std::string>();
  }
  if (j.contains("gold_groundings") && !j.at("gold_groundings").is_null()) {
    std::vector<Grounding> groundings;
    for (const auto &g : j.at("gold_groundings")) {
      groundings.push_back(
          {g.at("element").get<int>(), g.at("entity").get<std::string>()});
    }
    s.gold_groundings = std::move(groundings);
  }
  return s;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  });
}

}  // namespace

void ValidateSentence(const AnnotatedSentence &s) {
  if (s.id.empty()) throw ValidationError("sentence with empty id");
  if (s.tokens.empty()) Fail(s, "no tokens");
  if (s.frame.frame_type.empty()) Fail(s, "empty frame type");
  CheckSpan(s, s.frame.lexical_unit, "lexical unit");
  const auto &elements = s.frame.elements;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].type.empty()) Fail(s, "element without type");
    CheckSpan(s, elements[i].span, elements[i].type);
    for (std::size_t j = 0; j < i; ++j) {
      if (elements[i].span.Overlaps(elements[j].span)) {
        Fail(s, "overlapping element spans " + SpanText(elements[j].span) +
                    " and " + SpanText(elements[i].span));
      }
    }
  }
  if (s.gold_groundings) {
    for (const auto &g : *s.gold_groundings) {
      if (g.element < 0 || g.element >= static_cast<int>(elements.size())) {
        Fail(s, "grounding refers to missing element " +
                    std::to_string(g.element));
      }
      if (g.entity.empty()) Fail(s, "grounding with empty entity id");
    }
  }
}

Corpus ParseCorpus(std::string_view text) {
  Corpus corpus;
  std::set<std::string> ids;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (IsBlank(line)) continue;

    AnnotatedSentence sentence;
    try {
      sentence = ReadRecord(ordered_json::parse(line));
    } catch (const std::exception &e) {
      throw CorpusParseError(line_no, e.what());
    }
    ValidateSentence(sentence);
    if (!ids.insert(sentence.id).second) {
      throw ValidationError("sentence '" + sentence.id + "': duplicate id");
    }
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

Corpus ReadCorpusFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusParseError(0, "cannot open corpus file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseCorpus(buffer.str());
}

std::string SerializeSentence(const AnnotatedSentence &s) {
  ordered_json j;
  j["id"] = s.id;
  j["tokens"] = s.tokens;
  ordered_json frame;
  frame["frame_type"] = s.frame.frame_type;
  frame["lexical_unit"] = {s.frame.lexical_unit.start,
                           s.frame.lexical_unit.end};
  frame["elements"] = ordered_json::array();
  for (const auto &e : s.frame.elements) {
    ordered_json element;
    element["type"] = e.type;
    element["span"] = {e.span.start, e.span.end};
    frame["elements"].push_back(element);
  }
  j["frame"] = frame;
  j["map_id"] = s.map_id ? ordered_json(*s.map_id) : ordered_json(nullptr);
  if (s.gold_groundings) {
    j["gold_groundings"] = ordered_json::array();
    for (const auto &g : *s.gold_groundings) {
      ordered_json gj;
      gj["element"] = g.element;
      gj["entity"] = g.entity;
      j["gold_groundings"].push_back(gj);
    }
  } else {
    j["gold_groundings"] = nullptr;
  }
  return j.dump();
}

std::string SerializeCorpus(std::span<const AnnotatedSentence> corpus) {
  std::string out;
  for (const auto &s : corpus) {
    out += SerializeSentence(s);
    out += '\n';
  }
  return out;
}

// IOB.

LabelSequence EncodeIob(const AnnotatedSentence &sentence, IobScheme scheme) {
  LabelSequence seq;
  seq.scheme = scheme;
  seq.labels.assign(sentence.tokens.size(), "O");
  for (const auto &e : sentence.frame.elements) {
    const std::string suffix =
        scheme == IobScheme::kTyped ? "-" + e.type : std::string();
    seq.labels[e.span.start] = "B" + suffix;
    for (int i = e.span.start + 1; i <= e.span.end; ++i) {
      seq.labels[i] = "I" + suffix;
    }
  }
  return seq;
}

std::vector<FrameElement> DecodeIob(const LabelSequence &seq) {
  std::vector<FrameElement> out;
  std::optional<FrameElement> open;
  auto close = [&](int last) {
    if (open) {
      open->span.end = last;
      out.push_back(*open);
      open.reset();
    }
  };
  const bool typed = seq.scheme == IobScheme::kTyped;
  for (int i = 0; i < static_cast<int>(seq.labels.size()); ++i) {
    const std::string &label = seq.labels[i];
    if (label == "O") {
      close(i - 1);
      continue;
    }
    char tag = label.empty() ? '\0' : label[0];
    std::string type;
    bool ok = tag == 'B' || tag == 'I';
    if (ok && typed) {
      ok = label.size() > 2 && label[1] == '-';
      if (ok) type = label.substr(2);
    } else if (ok) {
      ok = label.size() == 1;
    }
    if (!ok) throw LabelError("unknown IOB label '" + label + "'");

    if (tag == 'I' && open && open->type == type) continue;
    close(i - 1);
    open = FrameElement{type, Span{i, i}};
  }
  close(static_cast<int>(seq.labels.size()) - 1);
  return out;
}

std::vector<FrameElement> Untyped(std::span<const FrameElement> elements) {
  std::vector<FrameElement> out;
  out.reserve(elements.size());
  for (const auto &e : elements) out.push_back({std::string(), e.span});
  return out;
}

// Label vocabulary.

namespace {

int IndexOf(const std::vector<std::string> &labels, std::string_view label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

}  // namespace

int LabelVocab::FrameIndex(std::string_view frame) const {
  return IndexOf(frames, frame);
}
int LabelVocab::IobIndex(std::string_view label) const {
  return IndexOf(iob, label);
}
int LabelVocab::TypedIobIndex(std::string_view label) const {
  return IndexOf(typed_iob, label);
}
int LabelVocab::AcIndex(std::string_view type) const {
  return IndexOf(ac_labels, type);
}

LabelVocab MakeLabelVocab(std::vector<std::string> frames,
                          std::vector<std::string> element_types) {
  std::sort(frames.begin(), frames.end());
  frames.erase(std::unique(frames.begin(), frames.end()), frames.end());
  std::sort(element_types.begin(), element_types.end());
  element_types.erase(std::unique(element_types.begin(), element_types.end()),
                      element_types.end());

  LabelVocab vocab;
  vocab.frames = std::move(frames);
  vocab.element_types = std::move(element_types);
  vocab.iob = {"O", "B", "I"};
  vocab.typed_iob = {"O"};
  for (const auto &t : vocab.element_types) vocab.typed_iob.push_back("B-" + t);
  for (const auto &t : vocab.element_types) vocab.typed_iob.push_back("I-" + t);
  vocab.ac_labels = {"O"};
  for (const auto &t : vocab.element_types) vocab.ac_labels.push_back(t);
  return vocab;
}

LabelVocab BuildLabelVocab(std::span<const AnnotatedSentence> corpus) {
  std::vector<std::string> frames;
  std::vector<std::string> types;
  for (const auto &s : corpus) {
    frames.push_back(s.frame.frame_type);
    for (const auto &e : s.frame.elements) types.push_back(e.type);
  }
  return MakeLabelVocab(std::move(frames), std::move(types));
}

// Folds.

std::vector<std::size_t> FoldAssignment::FoldSizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (const auto &[id, fold] : assignment) ++sizes[fold];
  return sizes;
}

FoldAssignment MakeFolds(std::span<const AnnotatedSentence> corpus, int k,
                         uint64_t seed) {
  if (k < 2) throw std::invalid_argument("fold count must be at least 2");
  if (static_cast<std::size_t>(k) > corpus.size()) {
    throw std::invalid_argument("fold count " + std::to_string(k) +
                                " exceeds corpus size " +
                                std::to_string(corpus.size()));
  }
  std::map<std::string, std::vector<std::string>> by_frame;
  std::set<std::string_view> seen;
  for (const auto &s : corpus) {
    if (!seen.insert(s.id).second) {
      throw std::invalid_argument("duplicate sentence id '" + s.id + "'");
    }
    by_frame[s.frame.frame_type].push_back(s.id);
  }
  const bool stratify =
      std::all_of(by_frame.begin(), by_frame.end(), [k](const auto &entry) {
        return entry.second.size() >= static_cast<std::size_t>(k);
      });

  Rng rng(seed);
  std::vector<std::string> order;
  if (stratify) {
    for (auto &[frame, ids] : by_frame) {
      Shuffle(ids, rng);
      order.insert(order.end(), ids.begin(), ids.end());
    }
  } else {
    for (const auto &s : corpus) order.push_back(s.id);
    Shuffle(order, rng);
  }

  FoldAssignment folds;
  folds.k = k;
  folds.stratified = stratify;
  for (std::size_t i = 0; i < order.size(); ++i) {
    folds.assignment[order[i]] = static_cast<int>(i % k);
  }
  return folds;
}

std::pair<Corpus, Corpus> SplitFold(std::span<const AnnotatedSentence> corpus,
                                    const FoldAssignment &folds, int fold) {
  Corpus train, test;
  for (const auto &s : corpus) {
    (folds.assignment.at(s.id) == fold ? test : train).push_back(s);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace framelstm
