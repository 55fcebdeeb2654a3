/*
 * Copyright 2026 The churnpno Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CHURNPNO_TOOLS_CLI_H_
#define CHURNPNO_TOOLS_CLI_H_

#include <iosfwd>

namespace churnpno::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CHURNPNO_OUTPUT_DIR";

// Entry point of the `churnpno` tool; returns the process exit code.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace churnpno::cli

#endif  // CHURNPNO_TOOLS_CLI_H_
