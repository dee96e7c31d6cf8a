// Copyright 2026 The attrib Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace attrib::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;      // bad arguments or parameter values
inline constexpr int kDataError = 2;  // input data failed validation
inline constexpr int kIoError = 3;    // unreadable / unwritable files

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace attrib::cli
