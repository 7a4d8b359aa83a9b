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

#ifndef FRAMELSTM_PARSED_COMMAND_H_
#define FRAMELSTM_PARSED_COMMAND_H_

#include <string>
#include <vector>

#include "framelstm/corpus.h"

namespace framelstm {

// Output of the three parsing stages for one sentence.
struct ParsedCommand {
  std::string frame_type;
  std::vector<FrameElement> elements;  // sorted by span start

  bool operator==(const ParsedCommand &) const = default;
};

// Anything that maps a token sequence to a ParsedCommand. The evaluation
// harness is written against this so that scripted parsers can stand in for
// a trained network.
class CommandParser {
 public:
  virtual ~CommandParser() = default;
  virtual ParsedCommand Parse(const std::vector<std::string> &tokens) const = 0;
};

}  // namespace framelstm

#endif  // FRAMELSTM_PARSED_COMMAND_H_
