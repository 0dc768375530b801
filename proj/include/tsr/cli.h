// Copyright 2026 The tsr Authors
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

#pragma once

#include <iosfwd>

namespace tsr {

// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;         // bad flags, config or input files
inline constexpr int kExitTableFailed = 2;   // some table failed a pipeline stage
inline constexpr int kExitMissingPreds = 3;  // evaluate: predictions missing or corrupt

// tsrtool entry point: reconstruct, evaluate, export-pairs, pairgen,
// classify, synth, patches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsr
