// Copyright 2026 The tcqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcqkd::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kAborted = 2,
};

/// Runs one command. `args` excludes the program name. Human-readable output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a flat key=value file ('#' starts a comment) into "--key=value"
/// arguments. Throws std::runtime_error on an unreadable file or a line
/// without '='.
std::vector<std::string> config_file_args(const std::string& path);

}  // namespace tcqkd::cli
