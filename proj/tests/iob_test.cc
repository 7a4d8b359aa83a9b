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
#include <algorithm>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "framelstm/corpus.h"
#include "framelstm/random.h"
#include "oracles.h"
#include "test_util.h"

namespace framelstm {
namespace {

using testing::RandomSpanSentence;

using Labels = std::vector<std::string>;

LabelSequence Seq(Labels labels, IobScheme scheme) {
  return {std::move(labels), scheme};
}

TEST(EncodeIobTest, TypedExample) {
  EXPECT_EQ(EncodeIob(testing::BookToKitchen(), IobScheme::kTyped).labels,
            (Labels{"O", "B-Theme", "I-Theme", "B-Goal", "I-Goal", "I-Goal"}));
}

TEST(EncodeIobTest, PlainExample) {
  EXPECT_EQ(EncodeIob(testing::BookToKitchen(), IobScheme::kPlain).labels,
            (Labels{"O", "B", "I", "B", "I", "I"}));
}

TEST(EncodeIobTest, NoElementsAllO) {
  AnnotatedSentence s = testing::BookToKitchen();
  s.frame.elements.clear();
  EXPECT_EQ(EncodeIob(s, IobScheme::kTyped).labels, Labels(6, "O"));
}

TEST(EncodeIobTest, SingleTokenElementAtStart) {
  AnnotatedSentence s = testing::BookToKitchen();
  s.frame.elements = {{"Theme", {0, 0}}};
  EXPECT_EQ(EncodeIob(s, IobScheme::kPlain).labels,
            (Labels{"B", "O", "O", "O", "O", "O"}));
}

TEST(DecodeIobTest, InverseOfEncode) {
  EXPECT_EQ(DecodeIob(Seq({"O", "B-Theme", "I-Theme", "B-Goal", "I-Goal",
                           "I-Goal"},
                          IobScheme::kTyped)),
            (std::vector<FrameElement>{{"Theme", {1, 2}}, {"Goal", {3, 5}}}));
}

TEST(DecodeIobTest, RepairsOrphanInside) {
  EXPECT_EQ(DecodeIob(Seq({"I-Goal", "O"}, IobScheme::kTyped)),
            (std::vector<FrameElement>{{"Goal", {0, 0}}}));
  EXPECT_EQ(DecodeIob(Seq({"O", "I", "I", "O", "I"}, IobScheme::kPlain)),
            (std::vector<FrameElement>{{"", {1, 2}}, {"", {4, 4}}}));
}

TEST(DecodeIobTest, TypeChangeStartsNewSegment) {
  EXPECT_EQ(DecodeIob(Seq({"B-Theme", "I-Goal", "I-Goal"}, IobScheme::kTyped)),
            (std::vector<FrameElement>{{"Theme", {0, 0}}, {"Goal", {1, 2}}}));
}

TEST(DecodeIobTest, AdjacentBeginsAreSeparateSpans) {
  EXPECT_EQ(DecodeIob(Seq({"B", "B", "I"}, IobScheme::kPlain)),
            (std::vector<FrameElement>{{"", {0, 0}}, {"", {1, 2}}}));
}

TEST(DecodeIobTest, AllOIsEmpty) {
  EXPECT_TRUE(DecodeIob(Seq(Labels(4, "O"), IobScheme::kTyped)).empty());
}

TEST(DecodeIobTest, UnknownLabelThrows) {
  EXPECT_THROW(DecodeIob(Seq({"O", "X"}, IobScheme::kPlain)), LabelError);
  EXPECT_THROW(DecodeIob(Seq({"B-Goal"}, IobScheme::kPlain)), LabelError);
  EXPECT_THROW(DecodeIob(Seq({"B"}, IobScheme::kTyped)), LabelError);
  EXPECT_THROW(DecodeIob(Seq({"B-"}, IobScheme::kTyped)), LabelError);
}

TEST(IobPropertyTest, RoundTripOverRandomSpanSets) {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const AnnotatedSentence s = RandomSpanSentence(rng);
    ASSERT_NO_THROW(ValidateSentence(s));
    const auto typed = DecodeIob(EncodeIob(s, IobScheme::kTyped));
    ASSERT_EQ(typed, s.frame.elements) << "case " << i;
    const auto plain = DecodeIob(EncodeIob(s, IobScheme::kPlain));
    ASSERT_EQ(plain, Untyped(s.frame.elements)) << "case " << i;
  }
}

TEST(IobPropertyTest, DecodeOfArbitraryLabelsIsValid) {
  Rng rng(77);
  const Labels alphabet = {"O", "B-A", "I-A", "B-B", "I-B"};
  for (int i = 0; i < 1000; ++i) {
    Labels labels(1 + UniformIndex(rng, 12));
    for (auto &l : labels) l = alphabet[UniformIndex(rng, alphabet.size())];
    const auto spans = DecodeIob(Seq(labels, IobScheme::kTyped));
    for (std::size_t k = 0; k < spans.size(); ++k) {
      ASSERT_LE(spans[k].span.start, spans[k].span.end);
      ASSERT_LT(spans[k].span.end, static_cast<int>(labels.size()));
      if (k > 0) {
        ASSERT_LT(spans[k - 1].span.end, spans[k].span.start);
      }
    }
    // Non-O tokens are exactly the covered tokens.
    std::vector<bool> covered(labels.size(), false);
    for (const auto &e : spans) {
      for (int t = e.span.start; t <= e.span.end; ++t) covered[t] = true;
    }
    for (std::size_t t = 0; t < labels.size(); ++t) {
      ASSERT_EQ(covered[t], labels[t] != "O");
    }
  }
}

}  // namespace
}  // namespace framelstm
