// SPDX-FileCopyrightText: © 2026 The rirforge Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rirforge::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kIo = 3,
    kGeneration = 4,
};

// Default for `dataset generate --workers`.
inline constexpr const char* kWorkersEnvVar = "RIRFORGE_WORKERS";

/// Runs the tool with argv-style `args` (program name excluded). Errors are
/// reported on `err` as a single "error: ..." line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rirforge::cli
