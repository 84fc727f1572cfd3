// Copyright 2026 The vecforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VECFORGE_TOOLS_CLI_H_
#define VECFORGE_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace vecforge::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;

// Runs one command line (args[0] is the program name). All output goes to
// the given streams.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vecforge::cli

#endif  // VECFORGE_TOOLS_CLI_H_
