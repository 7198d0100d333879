// Copyright 2026 The dpcda Authors
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

// Command-line front end. Subcommands: synthesize, account, calibrate, sweep,
// preview, compare, verify. Run with --help for the flag list.

#ifndef DPCDA_CLI_HPP_
#define DPCDA_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "dpcda/error.hpp"

namespace dpcda::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitPrecision = 2;
inline constexpr int kExitIo = 3;

int exit_code_for(ErrorKind kind) noexcept;

// `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpcda::cli

#endif  // DPCDA_CLI_HPP_
