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

#ifndef FRAMELSTM_CORPUS_H_
#define FRAMELSTM_CORPUS_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace framelstm {

// Malformed corpus input. line() is 1-based, 0 when not line-specific.
class CorpusParseError : public std::runtime_error {
 public:
  CorpusParseError(int line, const std::string &message);
  int line() const { return line_; }

 private:
  int line_;
};

// A record that parsed but violates an annotation invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inclusive token span.
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  bool Overlaps(const Span &other) const {
    return start <= other.end && other.start <= end;
  }
  auto operator<=>(const Span &) const = default;
};

// A typed frame element. `type` is empty for untyped (plain IOB) spans.
struct FrameElement {
  std::string type;
  Span span;

  auto operator<=>(const FrameElement &) const = default;
};

struct FrameAnnotation {
  std::string frame_type;
  Span lexical_unit;
  std::vector<FrameElement> elements;
};

struct Grounding {
  int element = 0;
  std::string entity;

  bool operator==(const Grounding &) const = default;
};

// One annotated command: tokens, a single frame, optional gold entity links.
struct AnnotatedSentence {
  std::string id;
  std::vector<std::string> tokens;
  FrameAnnotation frame;
  std::optional<std::string> map_id;
  std::optional<std::vector<Grounding>> gold_groundings;
};

using Corpus = std::vector<AnnotatedSentence>;

// Throws ValidationError naming the sentence id.
void ValidateSentence(const AnnotatedSentence &sentence);

// Parses newline-delimited JSON records. Blank lines are skipped. Ids must be
// unique across the corpus.
Corpus ParseCorpus(std::string_view text);
Corpus ReadCorpusFile(const std::string &path);

// One JSON record without trailing newline.
std::string SerializeSentence(const AnnotatedSentence &sentence);
// Records joined by '\n', each line newline-terminated.
std::string SerializeCorpus(std::span<const AnnotatedSentence> corpus);

// IOB tagging.

enum class IobScheme { kPlain, kTyped };

struct LabelSequence {
  std::vector<std::string> labels;
  IobScheme scheme = IobScheme::kPlain;
};

class LabelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

LabelSequence EncodeIob(const AnnotatedSentence &sentence, IobScheme scheme);

// Extracts maximal segments. An I label that cannot continue the open segment
// starts a new one. Throws LabelError on a label outside the scheme alphabet.
std::vector<FrameElement> DecodeIob(const LabelSequence &labels);

// Drops element types, keeping spans.
std::vector<FrameElement> Untyped(std::span<const FrameElement> elements);

// Index spaces for the three classification heads. Every label space puts
// "O" at index 0 followed by the remaining labels in lexicographic order.
struct LabelVocab {
  std::vector<std::string> frames;
  std::vector<std::string> iob;            // O, B, I
  std::vector<std::string> element_types;  // sorted
  std::vector<std::string> typed_iob;      // O, B-*, I-*
  std::vector<std::string> ac_labels;      // O, then element_types

  // Index lookup; -1 when absent.
  int FrameIndex(std::string_view frame) const;
  int IobIndex(std::string_view label) const;
  int TypedIobIndex(std::string_view label) const;
  int AcIndex(std::string_view type) const;

  bool operator==(const LabelVocab &) const = default;
};

LabelVocab BuildLabelVocab(std::span<const AnnotatedSentence> corpus);
LabelVocab MakeLabelVocab(std::vector<std::string> frames,
                          std::vector<std::string> element_types);

// Cross-validation folds.

struct FoldAssignment {
  int k = 0;
  std::map<std::string, int> assignment;
  bool stratified = false;

  std::vector<std::size_t> FoldSizes() const;
};

// Shuffles with the seeded generator and deals round-robin. When every frame
// type has at least k examples the deal runs over frame-grouped shuffles so
// that each fold sees every frame.
FoldAssignment MakeFolds(std::span<const AnnotatedSentence> corpus, int k,
                         uint64_t seed);

// Splits the corpus into (train, test) for fold `fold`, preserving order.
std::pair<Corpus, Corpus> SplitFold(std::span<const AnnotatedSentence> corpus,
                                    const FoldAssignment &folds, int fold);

}  // namespace framelstm

#endif  // FRAMELSTM_CORPUS_H_
