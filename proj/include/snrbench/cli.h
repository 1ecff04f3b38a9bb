// Copyright 2026  The snrbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SNRBENCH_CLI_H_
#define SNRBENCH_CLI_H_

#include <iosfwd>

namespace snrbench {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitInternalError = 4;

/// Parses argv and runs the selected subcommand. Progress goes to `out`;
/// failures are written to `err` as one JSON object
/// {"error": {"code", "kind", "message"}}.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace snrbench

#endif  // SNRBENCH_CLI_H_
