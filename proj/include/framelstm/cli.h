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

#ifndef FRAMELSTM_CLI_H_
#define FRAMELSTM_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace framelstm::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitCheckpoint = 4;

// Runs the command line `args` (without the program name). Subcommands:
// train, eval, parse, gradcheck, gen-corpus.
int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace framelstm::cli

#endif  // FRAMELSTM_CLI_H_
